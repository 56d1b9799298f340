"""JSON encoding of records.

Integers outside the IEEE-double safe range become decimal strings,
rationals become ``[num, den]`` pairs and polytopes are stored by vertices.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .polyhedra import RationalPolytope

SAFE_INT = 2 ** 53


def encode_int(x: int):
    return str(x) if abs(x) >= SAFE_INT else x


def decode_int(x) -> int:
    return int(x)


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return encode_int(obj)
    if isinstance(obj, Fraction):
        if obj.denominator == 1:
            return encode_int(obj.numerator)
        return [encode_int(obj.numerator), encode_int(obj.denominator)]
    if isinstance(obj, RationalPolytope):
        return {"vertices": [[to_jsonable(Fraction(x)) for x in v] for v in obj.vertices],
                "lattice": obj.is_lattice}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return [to_jsonable(v) for v in sorted(obj)]
    if hasattr(obj, "__dataclass_fields__"):
        return {k: to_jsonable(getattr(obj, k)) for k in obj.__dataclass_fields__}
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj: Any) -> str:
    """Deterministic JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def decode_rational(x) -> Fraction:
    if isinstance(x, list):
        return Fraction(int(x[0]), int(x[1]))
    return Fraction(int(x))


def torsion_to_json(t) -> dict:
    return {"taus": [encode_int(x) for x in t.taus], "gamma": to_jsonable(t.gamma), "order": str(t.order)}
