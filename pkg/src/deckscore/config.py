"""INI-style configuration (``key = value`` under ``[section]`` headers).

Sections: ``[retrieval]``, ``[artifact]``, ``[delivery]``, ``[pacing]``, ``[ingest]``.
Unknown sections or keys are rejected; every value is re-validated by the
parameter type that owns it. The delivery scoreboard shares ``beta`` with
``[artifact]``.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from deckscore.artifact import ArtifactWeights
from deckscore.delivery import OMEGA_KEYS, DeliveryWeights
from deckscore.orchestration import DEFAULT_OVERRUN
from deckscore.retrieval import RetrievalParams


class ConfigError(ValueError):
    pass


_INT_KEYS = {"m0", "l_max", "top_k", "summary_cap"}
_DELIVERY_SCALARS = ("eta", "l", "u", "epsilon", "std_max", "omega_stab", "omega_fid")


@dataclass(frozen=True)
class Config:
    retrieval: RetrievalParams = field(default_factory=RetrievalParams)
    artifact: ArtifactWeights = field(default_factory=ArtifactWeights)
    delivery: DeliveryWeights = field(default_factory=DeliveryWeights)
    overrun: float = DEFAULT_OVERRUN
    summary_cap: int = 120

    def __post_init__(self) -> None:
        if self.overrun < 0:
            raise ConfigError("pacing.overrun must be >= 0")
        if self.summary_cap < 1:
            raise ConfigError("ingest.summary_cap must be >= 1")
        if self.delivery.beta != self.artifact.beta:
            object.__setattr__(self, "delivery", replace(self.delivery, beta=self.artifact.beta))

    def as_dict(self) -> dict:
        d = self.delivery.as_dict()
        d.pop("beta")
        return {
            "retrieval": self.retrieval.as_dict(),
            "artifact": self.artifact.as_dict(),
            "delivery": d,
            "pacing": {"overrun": self.overrun},
            "ingest": {"summary_cap": self.summary_cap},
        }

    def with_retrieval(self, **changes) -> Config:
        return replace(self, retrieval=replace(self.retrieval, **changes))


def _number(section: str, key: str, raw: str) -> float | int | None:
    raw = raw.strip()
    if key == "std_max" and raw.lower() in ("", "auto", "none"):
        return None
    try:
        return int(raw) if key in _INT_KEYS else float(raw)
    except ValueError:
        raise ConfigError(f"{section}.{key}: not a number: {raw!r}") from None


def _check_keys(section: str, items: dict, allowed: set[str]) -> None:
    unknown = sorted(set(items) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(unknown)}")


def parse_config(text: str, base: Config | None = None) -> Config:
    """Parse config text; keys not given keep their values from ``base`` (defaults if None)."""
    base = base or Config()
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keys are case-sensitive (omega_R vs omega_r)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    unknown = sorted(set(cp.sections()) - {"retrieval", "artifact", "delivery", "pacing", "ingest"})
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(unknown)}")

    def section(name: str) -> dict[str, str]:
        return dict(cp.items(name)) if cp.has_section(name) else {}

    try:
        items = section("retrieval")
        _check_keys("retrieval", items, {f.name for f in fields(RetrievalParams)})
        retrieval = replace(base.retrieval, **{k: _number("retrieval", k, v) for k, v in items.items()})

        items = section("artifact")
        _check_keys("artifact", items, {f.name for f in fields(ArtifactWeights)})
        artifact = replace(base.artifact, **{k: _number("artifact", k, v) for k, v in items.items()})

        items = section("delivery")
        omega_keys = {f"omega_{k}" for k in OMEGA_KEYS}
        _check_keys("delivery", items, set(_DELIVERY_SCALARS) | omega_keys | {"markers"})
        changes: dict = {}
        omega = dict(base.delivery.omega)
        for k, v in items.items():
            if k == "markers":
                changes["markers"] = tuple(m.strip() for m in v.split(",") if m.strip())
            elif k in omega_keys:
                omega[k.removeprefix("omega_")] = _number("delivery", k, v)
            else:
                changes[k] = _number("delivery", k, v)
        delivery = replace(base.delivery, omega=omega, **changes)

        items = section("pacing")
        _check_keys("pacing", items, {"overrun"})
        overrun = _number("pacing", "overrun", items["overrun"]) if "overrun" in items else base.overrun

        items = section("ingest")
        _check_keys("ingest", items, {"summary_cap"})
        cap = _number("ingest", "summary_cap", items["summary_cap"]) if "summary_cap" in items else base.summary_cap

        return Config(retrieval, artifact, delivery, overrun, cap)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str | Path | None, base: Config | None = None) -> Config:
    if path is None:
        return base or Config()
    return parse_config(Path(path).read_text(encoding="utf-8"), base)


def dump_config(cfg: Config) -> str:
    lines = []
    for name, values in cfg.as_dict().items():
        lines.append(f"[{name}]")
        for k, v in values.items():
            if k == "omega":
                lines.extend(f"omega_{ok} = {ov!r}" for ok, ov in v.items())
            elif k == "markers":
                lines.append(f"markers = {', '.join(v)}")
            else:
                lines.append(f"{k} = {'auto' if v is None else repr(v)}")
        lines.append("")
    return "\n".join(lines)
