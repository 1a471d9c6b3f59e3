"""Shared text handling: the one tokenizer every metric uses, and LaTeX markup stripping."""

from __future__ import annotations

import re
from collections import Counter

MIN_TOKEN_LEN = 2

_WORD_RE = re.compile(r"[^\W_]+")

# Commands whose arguments carry no prose; dropped together with their arguments.
DROP_WITH_ARGS = frozenset(
    {
        "label", "ref", "eqref", "cref", "Cref", "autoref", "pageref",
        "cite", "citep", "citet", "citealp", "citeauthor", "nocite",
        "includegraphics", "usepackage", "documentclass", "bibliography",
        "bibliographystyle", "vspace", "hspace", "input", "include",
        "newcommand", "renewcommand", "setlength", "addtolength",
        "begin", "end", "url", "href", "graphicspath", "resizebox",
        "definecolor", "newtheorem", "numberwithin",
    }
)


def tokenize(text: str) -> list[str]:
    """Lowercase, split on anything non-alphanumeric, drop tokens shorter than two characters."""
    return [t for t in _WORD_RE.findall(text.lower()) if len(t) >= MIN_TOKEN_LEN]


def term_counts(text: str) -> Counter[str]:
    return Counter(tokenize(text))


def word_count(text: str) -> int:
    return len(tokenize(text))


def truncate_tokens(text: str, limit: int) -> str:
    """Cut ``text`` right after its ``limit``-th token (tokenizer's notion of a token)."""
    if limit <= 0:
        return ""
    seen = 0
    for match in _WORD_RE.finditer(text):
        if len(match.group()) < MIN_TOKEN_LEN:
            continue
        seen += 1
        if seen == limit:
            return text[: match.end()]
    return text


def collapse_ws(text: str) -> str:
    return " ".join(text.split())


def _skip_group(text: str, pos: int, open_ch: str, close_ch: str) -> int:
    """Return the index just past the balanced group starting at ``text[pos] == open_ch``."""
    depth = 0
    i = pos
    while i < len(text):
        ch = text[i]
        if ch == "\\":
            i += 2
            continue
        if ch == open_ch:
            depth += 1
        elif ch == close_ch:
            depth -= 1
            if depth == 0:
                return i + 1
        i += 1
    return len(text)


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos] in " \t":
        pos += 1
    return pos


def strip_markup(text: str) -> str:
    """Remove LaTeX commands from ``text``.

    Formatting commands (``\\textbf``, ``\\emph``, ``\\caption`` ...) lose the command
    name but keep their argument text; commands in :data:`DROP_WITH_ARGS` vanish
    along with their arguments. Braces, math shifts and alignment tabs become spaces.
    """
    out: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\\":
            j = i + 1
            while j < n and text[j].isalpha():
                j += 1
            name = text[i + 1 : j]
            if not name:
                # control symbol such as \\, \%, \&, \[
                sym = text[j] if j < n else ""
                out.append(sym if sym in "%&$#_{}" else " ")
                i = j + 1
                continue
            if j < n and text[j] == "*":
                j += 1
            if name in DROP_WITH_ARGS:
                k = _skip_ws(text, j)
                while k < n and text[k] in "[{":
                    k = _skip_group(text, k, text[k], "]" if text[k] == "[" else "}")
                    k = _skip_ws(text, k)
                i = k
            else:
                k = _skip_ws(text, j)
                if k < n and text[k] == "[":
                    k = _skip_group(text, k, "[", "]")
                i = k
            out.append(" ")
            continue
        if ch in "{}$&~^":
            out.append(" ")
        else:
            out.append(ch)
        i += 1
    return "".join(out)
