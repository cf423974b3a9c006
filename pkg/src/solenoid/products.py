"""Finite products of 1-solenoids and their automorphisms.

A product Sigma_P1 x ... x Sigma_Pn is the n-solenoid with diagonal bonding
matrices diag(p_k^1, ..., p_k^n).  Its automorphisms lift to matrices A in
GL(n, Q) whose entries a_ij, and those of A^-1, are proper P_j -> P_i
multipliers.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import MissingSpecs, NotProperlyArranged, SingularMatrix, SizeMismatch
from .exactnum import IntMatrix, RationalMatrix, as_rational_matrix, rat_inverse
from .multipliers import MultiplierVerdict, is_proper_multiplier
from .supernatural import (
    ArrangedSequence,
    PrimeSequenceSpec,
    Relation,
    SupernaturalNumber,
    arrange_supernaturals,
    compare,
    is_properly_arranged,
    to_supernatural,
)


@dataclass(frozen=True)
class ProductSolenoid:
    """n coordinates (supernatural numbers) plus optional concrete sequences."""

    coordinates: tuple[SupernaturalNumber, ...]
    specs: tuple | None = None  # PrimeSequenceSpec or ArrangedSequence per coordinate
    properly_arranged: bool = False

    def __post_init__(self):
        coords = tuple(to_supernatural(c) for c in self.coordinates)
        if not coords:
            raise SizeMismatch("a product needs at least one coordinate")
        object.__setattr__(self, "coordinates", coords)
        if self.specs is not None:
            specs = tuple(self.specs)
            if len(specs) != len(coords):
                raise SizeMismatch("one sequence per coordinate")
            object.__setattr__(self, "specs", specs)

    @classmethod
    def from_specs(cls, specs: Sequence[PrimeSequenceSpec], depth: int = 64):
        """Keep the given sequences; the arrangement flag is checked to ``depth`` terms."""
        specs = tuple(specs)
        coords = tuple(to_supernatural(s) for s in specs)
        return cls(coords, specs, is_properly_arranged(specs, depth))

    @classmethod
    def arrange(cls, items: Sequence):
        """Properly arrange ``items`` (sequences or supernatural numbers) and wrap them."""
        cards = arrange_supernaturals(list(items))
        return cls(tuple(cards), tuple(ArrangedSequence(c) for c in cards), True)

    @property
    def n(self) -> int:
        return len(self.coordinates)

    def require_specs(self):
        if self.specs is None:
            raise MissingSpecs("this operation needs concrete sequences")
        return self.specs

    def terms(self, count: int) -> list[list[int]]:
        """``terms[k][i]`` is the (k+1)-th term of coordinate i."""
        specs = self.require_specs()
        cols = [s.terms(count) for s in specs]
        return [list(row) for row in zip(*cols)]


def bonding_matrices(P: ProductSolenoid, N: int) -> list[IntMatrix]:
    if N < 1:
        raise ValueError("N must be >= 1")
    return [IntMatrix.diagonal(row) for row in P.terms(N)]


# --- automorphisms --------------------------------------------------------

@dataclass(frozen=True)
class AutVerdict:
    is_automorphism: bool
    failing_entry: tuple[int, int, str, MultiplierVerdict] | None = None  # (i, j, "A" | "A_inv", verdict)
    singular: bool = False

    def __bool__(self):
        return self.is_automorphism

    def to_json(self):
        out = {"is_automorphism": self.is_automorphism}
        if self.singular:
            out["singular"] = True
        if self.failing_entry is not None:
            i, j, which, verdict = self.failing_entry
            out["failing_entry"] = {"i": i, "j": j, "matrix": which, "verdict": verdict.to_json()}
        return out


def _first_bad_entry(M: RationalMatrix, coords, which: str):
    for i in range(M.rows):
        for j in range(M.cols):
            verdict = is_proper_multiplier(M[i, j], coords[j], coords[i])
            if not verdict.proper:
                return (i + 1, j + 1, which, verdict)
    return None


def is_automorphism(A, P: ProductSolenoid) -> AutVerdict:
    """Entrywise multiplier test on A and A^-1 (1-based indices in the report)."""
    A = as_rational_matrix(A)
    if not P.properly_arranged:
        raise NotProperlyArranged("arrange the product before testing automorphisms")
    if A.shape != (P.n, P.n):
        raise SizeMismatch(f"expected a {P.n}x{P.n} matrix, got {A.shape}")
    try:
        inv = rat_inverse(A)
    except SingularMatrix:
        return AutVerdict(False, singular=True)
    bad = _first_bad_entry(A, P.coordinates, "A") or _first_bad_entry(inv, P.coordinates, "A_inv")
    return AutVerdict(bad is None, bad)


class FormCase(str, enum.Enum):
    EQUAL = "Equal"
    STRICTLY_GREATER = "StrictlyGreater"
    INCOMPARABLE = "Incomparable"


@dataclass(frozen=True)
class AutGroupForm2D:
    """Shape of the automorphism matrices of Sigma_P x Sigma_Q.

    For StrictlyGreater the zero entry sits above the diagonal when P > Q and
    below it when Q > P.
    """

    case: FormCase
    shape: str  # "full" | "lower-triangular" | "upper-triangular" | "diagonal"
    relation: Relation

    def allows_pattern(self, A) -> bool:
        A = as_rational_matrix(A)
        if self.shape == "full":
            return True
        if self.shape == "diagonal":
            return A[0, 1] == 0 and A[1, 0] == 0
        if self.shape == "lower-triangular":
            return A[0, 1] == 0
        return A[1, 0] == 0

    def to_json(self):
        return {"case": self.case.value, "shape": self.shape, "relation": self.relation.value}


def aut_group_form_2d(P, Q) -> AutGroupForm2D:
    rel = compare(P, Q).relation
    if rel is Relation.EQUIVALENT:
        return AutGroupForm2D(FormCase.EQUAL, "full", rel)
    if rel is Relation.GREATER_OR_EQUAL:
        return AutGroupForm2D(FormCase.STRICTLY_GREATER, "lower-triangular", rel)
    if rel is Relation.LESS_OR_EQUAL:
        return AutGroupForm2D(FormCase.STRICTLY_GREATER, "upper-triangular", rel)
    return AutGroupForm2D(FormCase.INCOMPARABLE, "diagonal", rel)


# --- metric comparison ------------------------------------------------------

def _random_point(P: ProductSolenoid, depth: int, rng: random.Random):
    """A truncated point of the product: random top level, lower levels by the bonding maps."""
    from .trajectories import TruncatedPoint

    mats = P.terms(depth)
    top = [Fraction(rng.randrange(10**6), 10**6) for _ in range(P.n)]
    levels = [top]
    for k in range(depth - 2, -1, -1):
        levels.append([(m * x) % 1 for m, x in zip(mats[k], levels[-1])])
    return TruncatedPoint(tuple(tuple(lv) for lv in reversed(levels)))


def product_distances(P: ProductSolenoid, x, y) -> tuple[Fraction, Fraction]:
    """(product metric, interleaved n-solenoid metric) for two truncated points.

    The product metric weights factor i by 2^-i and measures each factor with
    sum_j 2^-j ||u - v||.  The interleaved metric is the n-solenoid metric
    sum_j 2^-j sum_i 2^-i ||u_i - v_i||.
    """
    from .trajectories import TruncatedPoint, circle_distance, metric

    if x.dim != P.n or y.dim != P.n:
        raise SizeMismatch("points do not live in this product")
    d_prod = Fraction(0)
    for i in range(P.n):
        xi = TruncatedPoint(tuple((lv[i],) for lv in x.levels))
        yi = TruncatedPoint(tuple((lv[i],) for lv in y.levels))
        # metric() on a 1-dim point carries the index weight 1/2; strip it
        d_prod += Fraction(1, 2 ** (i + 1)) * 2 * metric(xi, yi).value
    d_inter = Fraction(0)
    for j, (u, v) in enumerate(zip(x.levels, y.levels), start=1):
        d_inter += Fraction(1, 2**j) * sum(
            Fraction(1, 2**i) * circle_distance(a, b) for i, (a, b) in enumerate(zip(u, v), start=1)
        )
    return d_prod, d_inter


def product_isometry_check(P: ProductSolenoid, depth: int, samples: int = 16, seed: int = 0) -> bool:
    """Sample truncated point pairs and compare both metrics to within 2^-depth."""
    P.require_specs()
    if depth < 1:
        raise ValueError("depth must be >= 1")
    rng = random.Random(seed)
    tol = Fraction(1, 2**depth)
    for _ in range(samples):
        x, y = _random_point(P, depth, rng), _random_point(P, depth, rng)
        for a, b in ((x, x), (x, y)):
            d_prod, d_inter = product_distances(P, a, b)
            if abs(d_prod - d_inter) >= tol:
                return False
    return True
