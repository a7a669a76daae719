"""Canonical JSON reports: sorted keys, 17 significant digits, no NaN."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

TOOL_VERSION = "0.1.0"


class ReportError(ValueError):
    pass


def _canonical(obj, where="report"):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            raise ReportError(f"non-finite value {v!r} at {where}")
        return _Float(v)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _canonical(obj.real, where), "im": _canonical(obj.imag, where)}
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _canonical(v, f"{where}.{k}") for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_canonical(v, f"{where}[{i}]") for i, v in enumerate(obj)]
    if is_dataclass(obj):
        return _canonical(asdict(obj), where)
    return str(obj)


class _Float(float):
    def __repr__(self) -> str:
        return format(float(self), ".17g")


def _dump(obj) -> str:
    def enc(o):
        if isinstance(o, _Float):
            return repr(o)
        if isinstance(o, dict):
            items = sorted(o.items())
            return "{" + ", ".join(f"{json.dumps(k)}: {enc(v)}" for k, v in items) + "}"
        if isinstance(o, list):
            return "[" + ", ".join(enc(v) for v in o) + "]"
        return json.dumps(o)

    return enc(obj)


def make_report(module: str, op: str, params: dict, results: dict, config_hash: str, form_id: str, flags=()) -> dict:
    return {
        "tool_version": TOOL_VERSION,
        "config_hash": config_hash,
        "form_id": form_id,
        "module": module,
        "op": op,
        "params": params,
        "results": results,
        "flags": list(flags),
    }


def dumps_report(report: dict) -> str:
    return _dump(_canonical(report)) + "\n"


def export_report(report: dict, path) -> None:
    text = dumps_report(report)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
