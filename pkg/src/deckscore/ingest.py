"""Source normalization and lossless segmentation into typed slices.

LaTeX projects are flattened (``\\input``/``\\include`` resolved recursively from the
root file, comments removed) and cut at sectioning commands and artifact
environments. Markdown is cut at ATX headings, tagged fences and ``$$`` blocks.
"""

from __future__ import annotations

import enum
import json
import re
from collections.abc import Callable, Iterable
from dataclasses import dataclass, replace
from pathlib import Path

from deckscore.text import collapse_ws, strip_markup


class SourceFormat(str, enum.Enum):
    LATEX = "latex"
    MARKDOWN = "markdown"


class SliceType(str, enum.Enum):
    HEADING = "heading"
    TEXT = "text"
    EQUATION = "equation"
    FIGURE = "figure"
    TABLE = "table"
    THEOREM = "theorem"
    ALGORITHM = "algorithm"

    @property
    def is_artifact(self) -> bool:
        return self not in (SliceType.HEADING, SliceType.TEXT)


class SourceError(ValueError):
    """Base class for ingestion failures that are the document's fault."""


class UnsupportedFormatError(SourceError):
    pass


class IncludeCycleError(SourceError):
    def __init__(self, cycle: list[Path]):
        self.cycle = cycle
        super().__init__("include cycle: " + " -> ".join(p.name for p in cycle))


class UnbalancedEnvironmentError(SourceError):
    def __init__(self, env: str, line: int):
        self.env = env
        self.line = line
        super().__init__(f"unbalanced environment '{env}' opened at line {line}")


class MissingIncludeError(FileNotFoundError):
    def __init__(self, path: Path, included_from: Path):
        self.path = path
        self.included_from = included_from
        super().__init__(f"unresolved include {path} (from {included_from})")


_EXTENSIONS = {".tex": SourceFormat.LATEX, ".md": SourceFormat.MARKDOWN, ".markdown": SourceFormat.MARKDOWN}


@dataclass(frozen=True)
class SourceDocument:
    root_path: Path
    format: SourceFormat
    raw_stream: str


@dataclass(frozen=True)
class ContentSlice:
    index: int
    slice_type: SliceType
    # heading level for headings; enclosing heading level (0 before any heading) otherwise
    level: int
    title: str = ""
    body: str = ""
    abstract: str = ""
    line: int = 0

    def to_record(self) -> dict:
        return {
            "index": self.index,
            "type": self.slice_type.value,
            "level": self.level,
            "title": self.title,
            "abstract": self.abstract,
            "body": self.body,
        }

    @classmethod
    def from_record(cls, rec: dict) -> ContentSlice:
        return cls(
            index=int(rec["index"]),
            slice_type=SliceType(rec["type"]),
            level=int(rec["level"]),
            title=rec.get("title", ""),
            body=rec.get("body", ""),
            abstract=rec.get("abstract", ""),
        )


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------

_COMMENT_RE = re.compile(r"(?<!\\)%.*")
_INCLUDE_RE = re.compile(r"\\(?:input|include)\s*\{([^}]*)\}")


def strip_latex_comments(text: str) -> str:
    return "\n".join(_COMMENT_RE.sub("", line) for line in text.split("\n"))


def detect_format(path: Path) -> SourceFormat:
    try:
        return _EXTENSIONS[path.suffix.lower()]
    except KeyError:
        raise UnsupportedFormatError(
            f"unsupported source format '{path.suffix or path.name}': convert to .tex or .md first"
        ) from None


def _resolve_include(target: str, base: Path) -> Path:
    p = Path(target.strip())
    if not p.suffix:
        p = p.with_suffix(".tex")
    return p if p.is_absolute() else base / p


def _flatten(path: Path, base: Path, chain: list[Path]) -> str:
    text = strip_latex_comments(path.read_text(encoding="utf-8"))

    def expand(match: re.Match) -> str:
        child = _resolve_include(match.group(1), base)
        resolved = child.resolve()
        if resolved in chain:
            raise IncludeCycleError([*chain[chain.index(resolved):], resolved])
        if not child.is_file():
            raise MissingIncludeError(child, path)
        return _flatten(child, base, [*chain, resolved])

    return _INCLUDE_RE.sub(expand, text)


def normalize_source(path: str | Path) -> SourceDocument:
    """Read a root file into a single stream, recursively inlining includes for LaTeX."""
    path = Path(path)
    fmt = detect_format(path)
    if not path.is_file():
        raise FileNotFoundError(f"source file not found: {path}")
    if fmt is SourceFormat.MARKDOWN:
        stream = path.read_text(encoding="utf-8")
    else:
        # include paths are relative to the root file's directory, as in LaTeX
        stream = _flatten(path, path.parent, [path.resolve()])
    return SourceDocument(root_path=path, format=fmt, raw_stream=stream)


# ---------------------------------------------------------------------------
# segmentation
# ---------------------------------------------------------------------------

LATEX_HEADINGS = {"section": 1, "subsection": 2, "subsubsection": 3, "paragraph": 4, "subparagraph": 5}

LATEX_ENVIRONMENTS = {
    "equation": SliceType.EQUATION,
    "align": SliceType.EQUATION,
    "gather": SliceType.EQUATION,
    "multline": SliceType.EQUATION,
    "eqnarray": SliceType.EQUATION,
    "displaymath": SliceType.EQUATION,
    "figure": SliceType.FIGURE,
    "wrapfigure": SliceType.FIGURE,
    "table": SliceType.TABLE,
    "theorem": SliceType.THEOREM,
    "lemma": SliceType.THEOREM,
    "proposition": SliceType.THEOREM,
    "corollary": SliceType.THEOREM,
    "definition": SliceType.THEOREM,
    "algorithm": SliceType.ALGORITHM,
}

MARKDOWN_FENCES = {
    "math": SliceType.EQUATION,
    "table": SliceType.TABLE,
    "figure": SliceType.FIGURE,
    "theorem": SliceType.THEOREM,
    "algorithm": SliceType.ALGORITHM,
}

_LATEX_TOKEN_RE = re.compile(
    r"\\(?P<head>" + "|".join(LATEX_HEADINGS) + r")\*?\s*(?:\[[^\]]*\])?\s*\{"
    r"|\\begin\{(?P<env>(?:" + "|".join(LATEX_ENVIRONMENTS) + r")\*?)\}"
    r"|(?P<dmath>\\\[)"
)
_DOC_BEGIN = "\\begin{document}"
_DOC_END = "\\end{document}"


class _Builder:
    def __init__(self) -> None:
        self.slices: list[ContentSlice] = []
        self.level = 0

    def heading(self, level: int, title: str, line: int) -> None:
        self.level = level
        self._add(SliceType.HEADING, level, title, title, line)

    def artifact(self, kind: SliceType, body: str, line: int) -> None:
        self._add(kind, self.level, "", body, line)

    def text(self, body: str, line: int, keep: Callable[[str], bool]) -> None:
        body = body.strip("\n")
        if body.strip() and keep(body):
            self._add(SliceType.TEXT, self.level, "", body, line)

    def _add(self, kind: SliceType, level: int, title: str, body: str, line: int) -> None:
        self.slices.append(ContentSlice(len(self.slices), kind, level, title, body, line=line))


def _line_of(text: str, pos: int, offset: int) -> int:
    return text.count("\n", 0, pos) + 1 + offset


def _segment_latex(stream: str) -> list[ContentSlice]:
    offset = 0
    begin = stream.find(_DOC_BEGIN)
    if begin >= 0:
        offset = stream.count("\n", 0, begin)
        stream = stream[begin + len(_DOC_BEGIN):]
        end = stream.find(_DOC_END)
        if end >= 0:
            stream = stream[:end]

    b = _Builder()
    keep = lambda body: bool(strip_markup(body).strip())  # noqa: E731
    pos = 0
    while True:
        m = _LATEX_TOKEN_RE.search(stream, pos)
        if m is None:
            b.text(stream[pos:], _line_of(stream, pos, offset), keep)
            break
        b.text(stream[pos:m.start()], _line_of(stream, pos, offset), keep)
        line = _line_of(stream, m.start(), offset)
        if m.group("head"):
            close = _balanced_close(stream, m.end() - 1)
            if close < 0:
                raise UnbalancedEnvironmentError("\\" + m.group("head"), line)
            title = collapse_ws(strip_markup(stream[m.end():close]))
            b.heading(LATEX_HEADINGS[m.group("head")], title, line)
            pos = close + 1
        elif m.group("env"):
            env = m.group("env")
            end = _env_end(stream, env, m.end())
            if end < 0:
                raise UnbalancedEnvironmentError(env, line)
            b.artifact(LATEX_ENVIRONMENTS[env.rstrip("*")], stream[m.start():end], line)
            pos = end
        else:
            end = stream.find("\\]", m.end())
            if end < 0:
                raise UnbalancedEnvironmentError("\\[", line)
            b.artifact(SliceType.EQUATION, stream[m.start():end + 2], line)
            pos = end + 2
    return b.slices


def _balanced_close(text: str, open_pos: int) -> int:
    depth = 0
    i = open_pos
    while i < len(text):
        ch = text[i]
        if ch == "\\":
            i += 2
            continue
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return i
        i += 1
    return -1


def _env_end(text: str, env: str, start: int) -> int:
    """Index just past the ``\\end{env}`` matching an already-consumed ``\\begin{env}``."""
    pattern = re.compile(r"\\(begin|end)\{" + re.escape(env) + r"\}")
    depth = 1
    for m in pattern.finditer(text, start):
        depth += 1 if m.group(1) == "begin" else -1
        if depth == 0:
            return m.end()
    return -1


_MD_HEADING_RE = re.compile(r"^(#{1,6})[ \t]+(.*?)[ \t#]*$")
_FENCE_RE = re.compile(r"^(`{3,}|~{3,})[ \t]*([\w-]*)")


def _segment_markdown(stream: str) -> list[ContentSlice]:
    b = _Builder()
    lines = stream.split("\n")
    pending: list[str] = []
    pending_line = 1
    keep = lambda body: True  # noqa: E731

    def flush() -> None:
        b.text("\n".join(pending), pending_line, keep)
        pending.clear()

    i = 0
    while i < len(lines):
        line = lines[i]
        fence = _FENCE_RE.match(line)
        if fence:
            marker, tag = fence.group(1), fence.group(2).lower()
            close = next(
                (j for j in range(i + 1, len(lines)) if lines[j].strip().startswith(marker[0] * len(marker))
                 and not lines[j].strip().strip(marker[0])),
                -1,
            )
            if close < 0:
                raise UnbalancedEnvironmentError(f"{marker}{tag}", i + 1)
            if tag in MARKDOWN_FENCES:
                flush()
                b.artifact(MARKDOWN_FENCES[tag], "\n".join(lines[i + 1:close]), i + 1)
                pending_line = close + 2
            else:
                if not pending:
                    pending_line = i + 1
                pending.extend(lines[i:close + 1])
            i = close + 1
            continue
        stripped = line.strip()
        if stripped.startswith("$$"):
            rest = stripped[2:]
            if "$$" in rest:
                inner, close = rest[: rest.index("$$")], i
            else:
                close = next((j for j in range(i + 1, len(lines)) if "$$" in lines[j]), -1)
                if close < 0:
                    raise UnbalancedEnvironmentError("$$", i + 1)
                tail = lines[close][: lines[close].index("$$")]
                inner = "\n".join([rest, *lines[i + 1:close], tail]).strip("\n")
            flush()
            b.artifact(SliceType.EQUATION, inner, i + 1)
            pending_line = close + 2
            i = close + 1
            continue
        heading = _MD_HEADING_RE.match(line)
        if heading:
            flush()
            b.heading(len(heading.group(1)), heading.group(2).strip(), i + 1)
            pending_line = i + 2
        else:
            if not pending:
                pending_line = i + 1
            pending.append(line)
        i += 1
    flush()
    return b.slices


def segment(doc: SourceDocument) -> list[ContentSlice]:
    if not doc.raw_stream.strip():
        raise SourceError(f"empty source stream: {doc.root_path}")
    if doc.format is SourceFormat.MARKDOWN:
        return _segment_markdown(doc.raw_stream)
    return _segment_latex(doc.raw_stream)


_MARKER_LINE_RE = re.compile(r"^[ \t]*(?:`{3,}|~{3,}).*$", re.MULTILINE)
_MARKER_HEAD_RE = re.compile(r"^[ \t]{0,3}#{1,6}[ \t]+", re.MULTILINE)


def strip_markers(text: str) -> str:
    """Markdown structural markers removed and whitespace collapsed; the losslessness yardstick."""
    text = _MARKER_LINE_RE.sub(" ", text)
    text = _MARKER_HEAD_RE.sub(" ", text)
    text = text.replace("$$", " ")
    return collapse_ws(text)


# ---------------------------------------------------------------------------
# abstracts
# ---------------------------------------------------------------------------

Summarizer = Callable[[str], str]

_SENTENCE_END_RE = re.compile(r"[.!?](?=\s|$)")


@dataclass(frozen=True)
class FirstSentenceSummarizer:
    """First sentence of the text, cut back to the last whitespace before ``cap`` characters."""

    cap: int = 120

    def __call__(self, text: str) -> str:
        text = collapse_ws(text)
        if not text:
            return ""
        m = _SENTENCE_END_RE.search(text)
        sentence = text[: m.end()] if m else text
        if len(sentence) <= self.cap:
            return sentence
        head = sentence[: self.cap]
        if sentence[self.cap].isspace():
            return head.rstrip()
        cut = head.rfind(" ")
        return head[:cut].rstrip() if cut > 0 else head


def summarize_slice(slice_: ContentSlice, summarizer: Summarizer | None = None) -> str:
    summarizer = summarizer or FirstSentenceSummarizer()
    if not slice_.body.strip():
        return ""
    return summarizer(strip_markup(slice_.body))


def with_abstracts(slices: Iterable[ContentSlice], summarizer: Summarizer | None = None) -> list[ContentSlice]:
    return [replace(s, abstract=summarize_slice(s, summarizer)) for s in slices]


# ---------------------------------------------------------------------------
# line-delimited slice records
# ---------------------------------------------------------------------------

def dump_slices(slices: Iterable[ContentSlice]) -> str:
    return "".join(json.dumps(s.to_record(), ensure_ascii=False, sort_keys=True) + "\n" for s in slices)


def load_slices(text: str) -> list[ContentSlice]:
    return [ContentSlice.from_record(json.loads(line)) for line in text.splitlines() if line.strip()]

