"""JSON readers and writers for the command line.

Rationals are always strings ``"c/d"`` (or ``"c"``); exponent infinity is
``"inf"``.  Each ``*_to_json`` is inverted by the matching ``*_from_json``.
"""

from __future__ import annotations

from fractions import Fraction

from .duality import DualPresentation, GroupPresentation
from .exactnum import RationalMatrix, format_rational, parse_rational
from .flows import FrequencyVector, SymbolicBasis
from .products import ProductSolenoid
from .supernatural import (
    INF,
    AllOnes,
    ArrangedSequence,
    ConstantRepeat,
    IndexedPrimes,
    PrimeSequenceSpec,
    SupernaturalNumber,
)
from .trajectories import TruncatedPoint


def exponent_to_json(e):
    return "inf" if e == INF else int(e)


def exponent_from_json(v):
    if isinstance(v, str) and v.strip().lower() in ("inf", "infinity", "∞"):
        return INF
    if isinstance(v, bool) or int(v) != v:
        raise ValueError(f"bad exponent {v!r}")
    return int(v)


# --- sequences and supernatural numbers ----------------------------------

def spec_to_json(spec: PrimeSequenceSpec) -> dict:
    tail = spec.tail
    if isinstance(tail, AllOnes):
        t = {"kind": "all_ones"}
    elif isinstance(tail, ConstantRepeat):
        t = {"kind": "repeat", "values": list(tail.values)}
    else:
        t = {"kind": "indexed_primes", "r": tail.r, "m": tail.m}
    return {"head": list(spec.head), "tail": t}


def spec_from_json(obj: dict) -> PrimeSequenceSpec:
    head = tuple(int(x) for x in obj.get("head", ()))
    t = obj.get("tail", {"kind": "all_ones"})
    kind = t.get("kind")
    if kind == "all_ones":
        tail = AllOnes()
    elif kind == "repeat":
        tail = ConstantRepeat(tuple(int(x) for x in t["values"]))
    elif kind == "indexed_primes":
        tail = IndexedPrimes(int(t["r"]), int(t["m"]))
    else:
        raise ValueError(f"unknown tail kind {kind!r}")
    return PrimeSequenceSpec(head, tail)


def supernatural_to_json(S: SupernaturalNumber) -> dict:
    return {
        "exceptions": {str(p): exponent_to_json(e) for p, e in S.exceptions.items()},
        "classes": [{"r": r, "m": m, "exponent": exponent_to_json(e)} for r, m, e in S.default_classes],
        "default": exponent_to_json(S.default),
    }


def supernatural_from_json(obj: dict) -> SupernaturalNumber:
    return SupernaturalNumber(
        {int(p): exponent_from_json(e) for p, e in obj.get("exceptions", {}).items()},
        [(c["r"], c["m"], exponent_from_json(c["exponent"])) for c in obj.get("classes", ())],
        exponent_from_json(obj.get("default", 0)),
    )


def solenoid_from_json(obj):
    """A sequence description (has "head"/"tail") or a supernatural number."""
    if not isinstance(obj, dict):
        raise ValueError("expected a JSON object")
    if "head" in obj or "tail" in obj:
        return spec_from_json(obj)
    return supernatural_from_json(obj)


def product_from_json(obj: dict) -> ProductSolenoid:
    """Coordinates are properly arranged on reading."""
    return ProductSolenoid.arrange([solenoid_from_json(c) for c in obj["coordinates"]])


def product_to_json(P: ProductSolenoid) -> dict:
    coords = []
    for c, s in zip(P.coordinates, P.specs or [None] * P.n):
        coords.append(spec_to_json(s) if isinstance(s, PrimeSequenceSpec) else supernatural_to_json(c))
    return {"coordinates": coords}


# --- matrices, frequencies, points, presentations ------------------------

def matrix_to_json(M) -> list:
    return [[format_rational(x) for x in row] for row in M]


def matrix_from_json(rows) -> RationalMatrix:
    if isinstance(rows, dict):
        rows = rows["rows"]
    return RationalMatrix([[parse_rational(x) if not isinstance(x, int) else x for x in r] for r in rows])


def frequency_to_json(w: FrequencyVector, values=None) -> dict:
    out = w.to_json()
    if values:
        out["values"] = dict(values)
    return out


def frequency_from_json(obj: dict) -> tuple[FrequencyVector, dict | None]:
    basis = SymbolicBasis(tuple(obj["basis"]))
    coords = matrix_from_json(obj["coords"])
    return FrequencyVector(basis, coords), obj.get("values")


def _number(x):
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, bool):
        raise ValueError("booleans are not coordinates")
    return x if isinstance(x, int) else float(x)


def point_to_json(x: TruncatedPoint) -> dict:
    return x.to_json()


def point_from_json(obj: dict) -> TruncatedPoint:
    levels = tuple(tuple(_number(v) for v in lv) for lv in obj["levels"])
    return TruncatedPoint(levels, float(obj.get("error_bound", 0.0)))


def gens_to_json(G: GroupPresentation) -> dict:
    if G.is_pattern:
        return {"pattern": {"numerators": list(G.numerators), "bases": list(G.bases)}}
    return {"rows": matrix_to_json(G.generators)}


def gens_from_json(obj) -> GroupPresentation:
    if isinstance(obj, list):
        return GroupPresentation.finite([[parse_rational(x) for x in row] for row in obj])
    if "pattern" in obj:
        pat = obj["pattern"]
        return GroupPresentation.pattern([int(c) for c in pat["numerators"]], [int(b) for b in pat["bases"]])
    return GroupPresentation.finite([[parse_rational(x) for x in row] for row in obj["rows"]])


def dual_to_json(D: DualPresentation) -> dict:
    return {
        "matrices": [[m[k, k] for k in range(m.rows)] for m in D.matrices],
        "coordinates": [supernatural_to_json(c) for c in D.coordinates],
    }


def rational_to_json(q) -> str:
    return format_rational(Fraction(q))
