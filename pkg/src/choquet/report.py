"""Deterministic report serialization.

Field order is the insertion order of the producing code, floats carry 17
significant digits and rationals are written as ``"p/q"``, so two runs
with the same inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .expsum import ExpSum
from .intervals import IntervalUnion
from .io import element_str, rational_str


@dataclass
class Check:
    """One verified statement: what was fed in, what was expected, what came out."""

    name: str
    passed: bool
    inputs: object = None
    expected: object = None
    got: object = None
    exact: bool = True
    detail: dict = field(default_factory=dict)


def plain(obj):
    """Convert to JSON-ready values with exact numbers kept as strings."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Fraction):
        return rational_str(obj)
    if isinstance(obj, ExpSum):
        return str(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, IntervalUnion):
        return [[rational_str(p), rational_str(q)] for p, q in obj.intervals]
    if isinstance(obj, frozenset):
        return element_str(obj)
    if isinstance(obj, dict):
        return {(k if isinstance(k, str) else _key(k)): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if dataclasses.is_dataclass(obj):
        return {f.name: plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    return repr(obj)


def _key(k) -> str:
    if isinstance(k, Fraction):
        return rational_str(k)
    if isinstance(k, frozenset):
        return element_str(k)
    return str(k)


def _float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with floats at 17 significant digits."""
    return _dump(plain(obj), indent, 0) + "\n"


def _dump(v, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(v, float):
        return _float(v)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{pad}{json.dumps(k, ensure_ascii=False)}: {_dump(x, indent, level + 1)}" for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(v, list):
        if not v:
            return "[]"
        if all(not isinstance(x, (dict, list)) for x in v):
            return "[" + ", ".join(_dump(x, indent, level + 1) for x in v) + "]"
        return "[\n" + ",\n".join(pad + _dump(x, indent, level + 1) for x in v) + "\n" + end + "]"
    return json.dumps(v, ensure_ascii=False)


def suite_document(results: dict) -> dict:
    """``{suite id: [Check, ...]}`` to the report document."""
    suites = []
    for sid, checks in results.items():
        suites.append({
            "suite": sid,
            "passed": all(c.passed for c in checks),
            "n_checks": len(checks),
            "n_failed": sum(not c.passed for c in checks),
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "exact": c.exact,
                    "inputs": c.inputs,
                    "expected": c.expected,
                    "got": c.got,
                    **({"detail": c.detail} if c.detail else {}),
                }
                for c in checks
            ],
        })
    return {"passed": all(s["passed"] for s in suites), "suites": suites}


def emit_report(results: dict, path: str | Path | None = None, fmt: str = "json") -> str:
    """Serialize suite results; writes ``path`` when given and returns the text."""
    if fmt == "json":
        text = dumps(suite_document(results))
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "check", "passed", "exact", "inputs", "expected", "got"])
        for sid, checks in results.items():
            for c in checks:
                w.writerow([
                    sid,
                    c.name,
                    int(c.passed),
                    int(c.exact),
                    *(_cell(x) for x in (c.inputs, c.expected, c.got)),
                ])
        text = buf.getvalue()
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def _cell(x) -> str:
    v = plain(x)
    if isinstance(v, float):
        return _float(v)
    if isinstance(v, str):
        return v
    return dumps(v, indent=0).replace("\n", "")
