"""Flat key = value run configuration."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .coeffs import FORM_WEIGHTS

FORMS = tuple(FORM_WEIGHTS) + ("unit",)


class ConfigError(ValueError):
    pass


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.replace(",", " ").split()]


@dataclass
class RunConfig:
    form_id: str = "delta"
    n_max: int = 2**18
    h: int = 1
    k: int = 1
    twists: list = field(default_factory=list)
    M: list = field(default_factory=list)
    delta: list = field(default_factory=lambda: [64.0])
    xi: list = field(default_factory=list)
    V: list = field(default_factory=list)
    A: list = field(default_factory=lambda: [2.0])
    eps: float = 0.01
    c_small: float = 0.01
    C_big: float = 100.0
    word: str = "BABAAB"
    quad_cutoff: int = 4000
    out: str = "out"
    workers: int = 1

    def twist_list(self) -> list[tuple[int, int]]:
        return list(self.twists) if self.twists else [(self.h, self.k)]

    def validate(self) -> "RunConfig":
        if self.form_id not in FORMS:
            raise ConfigError(f"form_id: unknown form {self.form_id!r}")
        if not 1 <= self.n_max:
            raise ConfigError("n_max: must be positive")
        for h, k in self.twist_list():
            if k < 1 or math.gcd(h, k) != 1:
                raise ConfigError(f"k: twist h={h}, k={k} is not coprime")
        if self.workers < 1:
            raise ConfigError("workers: must be at least 1")
        for name in ("M", "xi"):
            for v in getattr(self, name):
                if v <= 0:
                    raise ConfigError(f"{name}: values must be positive")
        for v in self.delta:
            if v < 0:
                raise ConfigError("delta: values must be nonnegative")
        if any(ch not in "AB" for ch in self.word.upper()):
            raise ConfigError(f"word: malformed process word {self.word!r}")
        if self.c_small <= 0 or self.C_big <= 0:
            raise ConfigError("c_small/C_big: must be positive")
        return self

    def check_grids(self) -> None:
        """Grids that index the coefficient table must fit inside n_max."""
        for M in self.M_grid():
            if 2 * M > self.n_max:
                raise ConfigError(f"M: 2M={2 * M:g} exceeds n_max={self.n_max}")

    def M_grid(self) -> list[float]:
        return list(self.M) if self.M else [float(min(10**5, self.n_max // 2))]

    def digest(self) -> str:
        # worker count and output location do not change results
        data = {k: v for k, v in asdict(self).items() if k not in ("workers", "out")}
        blob = json.dumps(data, sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

_PARSERS = {
    "form_id": str,
    "n_max": int,
    "h": int,
    "k": int,
    "M": _floats,
    "delta": _floats,
    "xi": _floats,
    "V": _floats,
    "A": _floats,
    "eps": float,
    "c_small": float,
    "C_big": float,
    "word": str,
    "quad_cutoff": int,
    "out": str,
    "workers": int,
}

def _parse_twists(text: str) -> list[tuple[int, int]]:
    out = []
    for item in text.replace(",", " ").split():
        h, _, k = item.partition("/")
        out.append((int(h), int(k)))
    return out

def load_config(path, overrides: dict | None = None) -> RunConfig:
    """Read 'key = value' lines; '#' starts a comment; unknown keys are errors."""
    values = {}
    text = Path(path).read_text() if path is not None else ""
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, _, raw = (s.strip() for s in line.partition("="))
        try:
            if key == "twists":
                values[key] = _parse_twists(raw)
            elif key in _PARSERS:
                values[key] = _PARSERS[key](raw)
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from None
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    known = {f.name for f in fields(RunConfig)}
    cfg = RunConfig(**{k: v for k, v in values.items() if k in known})
    return cfg.validate()
