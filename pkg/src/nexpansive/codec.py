"""JSON forms for points, systems, pseudo-orbits and reports.

Rationals travel as "p/q" strings, never as floats; sequences as their
four description fields, canonicalized again on the way in. ``encode``
turns any report dataclass into JSON-ready data with deterministic
ordering, so identical inputs yield byte-identical report files.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction

from nexpansive.base import BiSeq
from nexpansive.space import AugSystem, BasePoint, ExtraPoint
from nexpansive.shadowing import (
    LimitPseudoOrbit,
    PseudoOrbit,
    TwoSidedLimitPseudoOrbit,
)


def format_fraction(value):
    f = Fraction(value)
    return f"{f.numerator}/{f.denominator}"


def parse_fraction(text):
    if isinstance(text, int):
        return Fraction(text)
    num, _, den = str(text).partition("/")
    return Fraction(int(num), int(den) if den else 1)


def biseq_to_json(seq):
    return {"left": seq.left, "core": seq.core, "right": seq.right,
            "offset": seq.offset}


def biseq_from_json(data):
    return BiSeq(data["left"], data.get("core", ""), data["right"],
                 data.get("offset", 0))


def point_to_json(point):
    if isinstance(point, BasePoint):
        return {"type": "base", "seq": biseq_to_json(point.seq)}
    return {"type": "extra", "i": point.i, "k": point.k, "j": point.j}


def point_from_json(data):
    if data["type"] == "base":
        return BasePoint(biseq_from_json(data["seq"]))
    if data["type"] == "extra":
        return ExtraPoint(data["i"], data["k"], data["j"])
    raise ValueError(f"unknown point type {data['type']!r}")


def system_to_json(sys):
    return {"n": sys.n, "variant": sys.variant, "k_max": sys.k_max}


def system_from_json(data):
    return AugSystem(n=data.get("n", 2), variant=data.get("variant", "standard"),
                     k_max=data.get("k_max", 50))


def pseudo_orbit_to_json(po):
    return {"delta": format_fraction(po.delta),
            "points": [point_to_json(p) for p in po.points]}


def pseudo_orbit_from_json(data):
    return PseudoOrbit(tuple(point_from_json(p) for p in data["points"]),
                       parse_fraction(data["delta"]))


def limit_orbit_to_json(lpo):
    return {"points": [point_to_json(p) for p in lpo.points],
            "schedule": [{"k": k, "bound": format_fraction(b)}
                         for k, b in lpo.schedule]}


def limit_orbit_from_json(data):
    return LimitPseudoOrbit(
        tuple(point_from_json(p) for p in data["points"]),
        tuple((e["k"], parse_fraction(e["bound"])) for e in data["schedule"]))


def two_sided_orbit_to_json(tslpo):
    out = limit_orbit_to_json(tslpo)
    out["start"] = tslpo.start
    return out


def two_sided_orbit_from_json(data):
    return TwoSidedLimitPseudoOrbit(
        tuple(point_from_json(p) for p in data["points"]), data["start"],
        tuple((e["k"], parse_fraction(e["bound"])) for e in data["schedule"]))


def encode(value):
    """Recursively convert a value into JSON-serializable data."""
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, BiSeq):
        return biseq_to_json(value)
    if isinstance(value, (BasePoint, ExtraPoint)):
        return point_to_json(value)
    if isinstance(value, AugSystem):
        return system_to_json(value)
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: encode(getattr(value, f.name))
                for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if isinstance(value, (str, int, bool)) or value is None:
        return value
    raise TypeError(f"cannot encode {type(value).__name__}")
