"""Rational multipliers between 1-solenoids.

A rational ``r`` acts on the path component of the identity by
``pi_P(s) -> pi_Q(r s)``; it is a *proper* P -> Q multiplier when this
extends to a continuous homomorphism.  The predicate below is exact.  The
probe evaluates the witness sequences that show discontinuity numerically,
at a finite truncation depth, and is only a falsification aid.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvariantBreach, NotProperMultiplier, SourceTargetMismatch, ZeroInput
from .exactnum import factorize, prime_index
from .supernatural import (
    INF,
    ArrangedSequence,
    Relation,
    SupernaturalNumber,
    arrange_supernaturals,
    compare,
    diagonal_bijection,
    to_supernatural,
)


class Reason(str, enum.Enum):
    ZERO = "Zero"
    INTEGER_TIMES_INVERTED_DIVISORS = "IntegerTimesInvertedDivisors"
    ORDER_OBSTRUCTION = "OrderObstruction"
    BAD_DENOMINATOR_PRIME = "BadDenominatorPrime"


@dataclass(frozen=True)
class MultiplierVerdict:
    proper: bool
    reason: Reason
    prime: int | None = None  # the offending prime for BadDenominatorPrime
    relation: Relation | None = None  # order relation P vs Q, when it was needed

    def __bool__(self):
        return self.proper

    def to_json(self):
        out = {"proper": self.proper, "reason": self.reason.value}
        if self.prime is not None:
            out["prime"] = self.prime
        if self.relation is not None:
            out["relation"] = self.relation.value
        return out


def is_proper_multiplier(r, P, Q) -> MultiplierVerdict:
    """Exact test of whether ``r`` is a proper P -> Q multiplier."""
    r = Fraction(r)
    if r == 0:
        return MultiplierVerdict(True, Reason.ZERO)
    P, Q = to_supernatural(P), to_supernatural(Q)
    rel = compare(P, Q).relation
    if rel not in (Relation.GREATER_OR_EQUAL, Relation.EQUIVALENT):
        return MultiplierVerdict(False, Reason.ORDER_OBSTRUCTION, relation=rel)
    for p in sorted(factorize(r.denominator)):
        if not P.divides(p):
            return MultiplierVerdict(False, Reason.BAD_DENOMINATOR_PRIME, prime=p, relation=rel)
    return MultiplierVerdict(True, Reason.INTEGER_TIMES_INVERTED_DIVISORS, relation=rel)


def is_iso_multiplier(r, P) -> bool:
    """``r`` and ``1/r`` both proper P -> P multipliers."""
    r = Fraction(r)
    if r == 0:
        raise ZeroInput("0 is never an iso-multiplier")
    P = to_supernatural(P)
    primes = set(factorize(r.numerator)) | set(factorize(r.denominator))
    return all(P.divides(p) for p in primes)


@dataclass(frozen=True)
class ScalarMorphism:
    """The homomorphism source -> target induced by a proper multiplier."""

    r: Fraction
    source: SupernaturalNumber
    target: SupernaturalNumber

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        object.__setattr__(self, "source", to_supernatural(self.source))
        object.__setattr__(self, "target", to_supernatural(self.target))
        verdict = is_proper_multiplier(self.r, self.source, self.target)
        if not verdict.proper:
            raise NotProperMultiplier(f"{self.r} is not a proper multiplier ({verdict.reason.value})")

    def __call__(self, s):
        """Action on the lifted coordinate of the identity path component."""
        return self.r * s


def compose(f: ScalarMorphism, g: ScalarMorphism) -> ScalarMorphism:
    """``f o g``; requires ``f.source == g.target``."""
    if f.source != g.target:
        raise SourceTargetMismatch("f.source must equal g.target")
    try:
        return ScalarMorphism(f.r * g.r, g.source, f.target)
    except NotProperMultiplier as exc:  # proper multipliers are closed under composition
        raise InvariantBreach(f"composition left the proper multipliers: {exc}") from exc


# --- numeric continuity probe --------------------------------------------

class ProbeVerdict(str, enum.Enum):
    CONVERGES = "ConvergesToIdentity"
    BOUNDED_AWAY = "StaysBoundedAwayBy"


@dataclass(frozen=True)
class ProbeResult:
    verdict: ProbeVerdict
    distances: tuple[Fraction, ...]  # image distances to the identity along the witness tail
    observed_min: Fraction
    lower_bound: Fraction | None = None  # guaranteed 1/(2^(N+1) D) separation, when known
    N: int | None = None
    witness: str = ""
    details: dict = field(default_factory=dict)

    @property
    def converges(self) -> bool:
        return self.verdict is ProbeVerdict.CONVERGES

    @property
    def respects_bound(self) -> bool | None:
        if self.lower_bound is None:
            return None
        return self.observed_min >= self.lower_bound

    def to_json(self):
        out = {
            "verdict": self.verdict.value,
            "observed_min": str(self.observed_min),
            "observed_min_float": float(self.observed_min),
            "witness": self.witness,
        }
        if self.lower_bound is not None:
            out["lower_bound"] = str(self.lower_bound)
            out["N"] = self.N
            out["respects_bound"] = self.respects_bound
        return out


def _image_distance(x: Fraction, q_prefix: list[int], depth: int) -> Fraction:
    """Distance from pi_Q(x) to the identity: sum_j 2^-j ||x / (q_1...q_{j-1})||."""
    total = Fraction(0)
    div = 1
    for j in range(1, depth + 1):
        if j > 1:
            div *= q_prefix[j - 2]
        y = x / div
        frac = y - (y.numerator // y.denominator)
        total += Fraction(min(frac, 1 - frac), 2**j)
    return total


def _level_distances(num: int, den: int, q_prefix: list[int], depth: int) -> tuple[Fraction, list[bool]]:
    """Same as :func:`_image_distance` for x = num/den, using modular arithmetic."""
    total = Fraction(0)
    nonzero = []
    div = den
    for j in range(1, depth + 1):
        if j > 1:
            div *= q_prefix[j - 2]
        rem = num % div
        total += Fraction(min(rem, div - rem), div * 2**j)
        nonzero.append(rem != 0)
    return total, nonzero


def _first_nonzero_level(x: Fraction, cards: SupernaturalNumber, seq: ArrangedSequence) -> int | None:
    """First level j with x / (q_1 ... q_(j-1)) not an integer; None if pi_Q(x) is the identity."""
    if x.denominator != 1:
        return 1
    x = x.numerator
    if cards.is_finite_total():
        if x % cards.finite_total() == 0:
            return None
    elif x == 0:
        return None
    div = 1
    for j in itertools.count(2):
        div *= seq.term(j - 1)
        if x % div:
            return j


def continuity_probe(r, P, Q, depth: int = 12):
    """Evaluate r^{P->Q} along the witness sequence that converges to the identity.

    ``P`` and ``Q`` are properly arranged first (the scalar maps are defined
    for arranged pairs).  If P is eventually 1 the witness is s -> p^- on the
    identity arc and the verdict is exact: the limit pi_Q(r p) either is or
    is not the identity, and the reported distance is taken down to the first
    level where it differs (which may lie below ``depth``).  Otherwise the witness is
    pi_P(p_1 ... p_n) and the verdict is ``ConvergesToIdentity`` when the
    tail distances drop below 2^-depth.
    """
    if depth < 2:
        raise ValueError("depth must be >= 2")
    r = Fraction(r)
    Ps, Qs = to_supernatural(P), to_supernatural(Q)
    if Ps == Qs:
        arrangedP = arrangedQ = arrange_supernaturals([Ps])[0]
    else:
        arrangedP, arrangedQ = arrange_supernaturals([Ps, Qs])
    seqP, seqQ = ArrangedSequence(arrangedP), ArrangedSequence(arrangedQ)
    q_prefix = seqQ.terms(depth)
    threshold = Fraction(1, 2**depth)

    if arrangedP.is_finite_total():
        p = arrangedP.finite_total()
        ns = range(depth, 3 * depth + 1)
        dists = tuple(
            _image_distance(r * p * (1 - Fraction(1, 2**n)), q_prefix, depth) for n in ns
        )
        # the witness tends to pi_Q(r p); continuity needs that to be the identity
        level = _first_nonzero_level(r * p, arrangedQ, seqQ)
        converges = level is None
        if converges:
            return ProbeResult(ProbeVerdict.CONVERGES, dists, dists[-1], witness=f"s -> {p} from below")
        levels = max(depth, level)
        limit = _image_distance(r * p, seqQ.terms(levels), levels)
        return ProbeResult(
            ProbeVerdict.BOUNDED_AWAY,
            dists,
            limit,
            witness=f"s -> {p} from below",
            details={"limit_distance": limit, "first_nonzero_level": level},
        )

    n_hi = max(4 * depth, depth * depth)
    window = range(n_hi - depth, n_hi + 1)
    p_terms = seqP.terms(n_hi)
    prod = 1
    dists = []
    flags = []
    for n, term in enumerate(p_terms, start=1):
        prod *= term
        if n in window:
            dist, nz = _level_distances(r.numerator * prod, r.denominator, q_prefix, depth)
            dists.append(dist)
            flags.append(nz)
    dists = tuple(dists)
    observed = min(dists)
    converges = max(dists) < threshold
    result = dict(
        verdict=ProbeVerdict.CONVERGES if converges else ProbeVerdict.BOUNDED_AWAY,
        distances=dists,
        observed_min=observed,
        witness="pi_P(p_1 ... p_n)",
    )
    if converges:
        return ProbeResult(**result)

    # the lower bound carried by the non-continuity argument
    verdict = is_proper_multiplier(r, Ps, Qs)
    N = bound = None
    if verdict.reason is Reason.BAD_DENOMINATOR_PRIME:
        bad = verdict.prime
        k = prime_index(bad)
        kappa = arrangedP.card(bad)
        N = diagonal_bijection(k, kappa) + 1 if kappa and kappa != INF else 1
        bound = Fraction(1, 2 ** (N + 1) * r.denominator)
    else:
        level = next(
            (j for j in range(depth) if all(nz[j] for nz in flags)),
            None,
        )
        if level is not None:
            N = level  # coordinate N+1 (1-based) is the first that never vanishes
            qprod = 1
            for q in q_prefix[:N]:
                qprod *= q
            bound = Fraction(1, 2 ** (N + 1) * r.denominator * qprod)
    return ProbeResult(**result, lower_bound=bound, N=N)
