"""Finitely presented integer sequences and the supernatural numbers they define.

A 1-solenoid is determined up to isomorphism by how often each prime occurs
in the factored sequence of its bonding degrees.  ``PrimeSequenceSpec`` is a
finite description of such a sequence (a head plus a periodic or
prime-indexed tail) and ``SupernaturalNumber`` is the prime -> exponent
function it induces, stored as finitely many exceptional primes on top of a
pattern that is periodic in the prime index (2 is index 1, 3 is index 2...).
"""

from __future__ import annotations

import enum
import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .exactnum import factorize, is_prime, lcm, nth_prime, prime_factors, prime_index

INF = math.inf


def _check_exponent(e):
    if e == INF:
        return INF
    if isinstance(e, bool) or int(e) != e or e < 0:
        raise ValueError(f"exponent must be a natural number or INF, got {e!r}")
    return int(e)


# --- sequence descriptions ------------------------------------------------

@dataclass(frozen=True)
class AllOnes:
    pass


@dataclass(frozen=True)
class ConstantRepeat:
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if not self.values:
            raise ValueError("repeat block must be nonempty")
        if any(v == 0 for v in self.values):
            raise ValueError("sequence terms must be nonzero")


@dataclass(frozen=True)
class IndexedPrimes:
    """The primes p_k with k = r (mod m), in increasing order."""

    r: int
    m: int

    def __post_init__(self):
        if self.m < 1 or not 0 <= self.r < self.m:
            raise ValueError("need m >= 1 and 0 <= r < m")

    def indices(self) -> Iterator[int]:
        return itertools.count(self.r if self.r else self.m, self.m)


TailRule = AllOnes | ConstantRepeat | IndexedPrimes


@dataclass(frozen=True)
class PrimeSequenceSpec:
    """A sequence of nonzero integers given as ``head`` followed by ``tail``."""

    head: tuple[int, ...] = ()
    tail: TailRule = field(default_factory=AllOnes)

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(int(v) for v in self.head))
        if any(v == 0 for v in self.head):
            raise ValueError("sequence terms must be nonzero")

    @classmethod
    def repeat(cls, *values, head=()):
        return cls(tuple(head), ConstantRepeat(tuple(values)))

    @classmethod
    def indexed_primes(cls, r, m, head=()):
        return cls(tuple(head), IndexedPrimes(r, m))

    def iter_terms(self) -> Iterator[int]:
        yield from self.head
        tail = self.tail
        if isinstance(tail, AllOnes):
            yield from itertools.repeat(1)
        elif isinstance(tail, ConstantRepeat):
            yield from itertools.cycle(tail.values)
        else:
            for k in tail.indices():
                yield nth_prime(k)

    def terms(self, n: int) -> list[int]:
        return list(itertools.islice(self.iter_terms(), n))

    def iter_derived(self) -> Iterator[int]:
        for term in self.iter_terms():
            if abs(term) == 1:
                yield 1
            else:
                yield from prime_factors(term)


def derived_sequence(spec: PrimeSequenceSpec, n: int) -> list[int]:
    """First ``n`` terms of the derived sequence (primes and 1s)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return list(itertools.islice(spec.iter_derived(), n))


# --- supernatural numbers -------------------------------------------------

class SupernaturalNumber:
    """Map prime -> exponent in N u {INF}, with finite description.

    ``exceptions`` pins individual primes; every other prime p_k takes
    ``pattern[k % period]``.  The representation is canonical: the period is
    minimal and no exception repeats what the pattern already says, so
    ``==`` is equality of the underlying functions.
    """

    __slots__ = ("_exceptions", "_period", "_pattern")

    def __init__(self, exceptions=None, classes=(), default=0):
        default = _check_exponent(default)
        if default not in (0, INF):
            raise ValueError("default exponent must be 0 or INF")
        classes = [(int(r), int(m), _check_exponent(e)) for r, m, e in classes]
        for r, m, _ in classes:
            if m < 1 or not 0 <= r < m:
                raise ValueError(f"bad residue class {r} mod {m}")
        period = lcm(*(m for _, m, _ in classes)) if classes else 1
        pattern: list = [None] * period
        for r, m, e in classes:
            for c in range(r, period, m):
                if pattern[c] is not None and pattern[c] != e:
                    raise ValueError("residue classes overlap with different exponents")
                pattern[c] = e
        pattern = [default if e is None else e for e in pattern]
        excs = {}
        for p, e in dict(exceptions or {}).items():
            p = int(p)
            if not is_prime(p):
                raise ValueError(f"exception key {p} is not prime")
            excs[p] = _check_exponent(e)
        self._set(excs, tuple(pattern))

    @classmethod
    def _from_parts(cls, exceptions, pattern):
        obj = cls.__new__(cls)
        obj._set(dict(exceptions), tuple(pattern))
        return obj

    def _set(self, exceptions, pattern):
        period = len(pattern)
        for d in sorted(d for d in range(1, period + 1) if period % d == 0):
            if all(pattern[i] == pattern[i % d] for i in range(period)):
                pattern = pattern[:d]
                break
        self._pattern = pattern
        self._period = len(pattern)
        self._exceptions = {
            p: e
            for p, e in sorted(exceptions.items())
            if e != pattern[prime_index(p) % self._period]
        }

    # constructors
    @classmethod
    def finite(cls, exponents: dict):
        return cls(exceptions=exponents)

    @classmethod
    def torus(cls):
        return cls()

    @classmethod
    def universal(cls):
        """Every prime with infinite exponent (the maximal class)."""
        return cls(default=INF)

    # accessors
    @property
    def exceptions(self) -> dict:
        return dict(self._exceptions)

    @property
    def period(self) -> int:
        return self._period

    @property
    def pattern(self) -> tuple:
        return self._pattern

    @property
    def default(self):
        zeros = sum(1 for e in self._pattern if e == 0)
        infs = sum(1 for e in self._pattern if e == INF)
        return INF if infs > zeros else 0

    @property
    def default_classes(self) -> list[tuple[int, int, object]]:
        d = self.default
        if self._period == 1:
            return [] if self._pattern[0] == d else [(0, 1, self._pattern[0])]
        return [(r, self._period, e) for r, e in enumerate(self._pattern) if e != d]

    def class_exponent(self, k: int):
        return self._pattern[k % self._period]

    def card_at_index(self, k: int, p: int | None = None):
        """Exponent of the k-th prime (pass ``p`` to skip recomputing it)."""
        if self._exceptions:
            if p is None:
                p = nth_prime(k)
            if p in self._exceptions:
                return self._exceptions[p]
        return self._pattern[k % self._period]

    def card(self, p: int):
        if p in self._exceptions:
            return self._exceptions[p]
        return self._pattern[prime_index(p) % self._period]

    def divides(self, p: int) -> bool:
        return self.card(p) == INF

    def is_finite_total(self) -> bool:
        """True when only finitely many prime factors occur (torus class)."""
        return all(e == 0 for e in self._pattern) and all(
            e != INF for e in self._exceptions.values()
        )

    def finite_total(self) -> int:
        if not self.is_finite_total():
            raise ValueError("infinite total multiplicity")
        return math.prod(p**e for p, e in self._exceptions.items())

    def lifted_pattern(self, period: int) -> tuple:
        if period % self._period:
            raise ValueError("period must be a multiple of the canonical period")
        return tuple(self._pattern[c % self._period] for c in range(period))

    def __eq__(self, other):
        if not isinstance(other, SupernaturalNumber):
            return NotImplemented
        return self._exceptions == other._exceptions and self._pattern == other._pattern

    def __hash__(self):
        return hash((tuple(self._exceptions.items()), self._pattern))

    def __repr__(self):
        parts = []
        if self._exceptions:
            inner = ", ".join(f"{p}: {_fmt(e)}" for p, e in self._exceptions.items())
            parts.append("{" + inner + "}")
        for r, m, e in self.default_classes:
            parts.append(f"k={r} mod {m}: {_fmt(e)}")
        parts.append(f"default {_fmt(self.default)}")
        return f"SupernaturalNumber({'; '.join(parts)})"


def _fmt(e):
    return "inf" if e == INF else str(e)


def to_supernatural(spec) -> SupernaturalNumber:
    """Compress a sequence description into its prime-cardinality function."""
    if isinstance(spec, SupernaturalNumber):
        return spec
    counts: Counter = Counter()
    for term in spec.head:
        counts.update(factorize(term))
    tail = spec.tail
    if isinstance(tail, AllOnes):
        return SupernaturalNumber(exceptions=counts)
    if isinstance(tail, ConstantRepeat):
        excs = dict(counts)
        for v in tail.values:
            for p in factorize(v):
                excs[p] = INF
        return SupernaturalNumber(exceptions=excs)
    excs = {
        p: c + (1 if prime_index(p) % tail.m == tail.r else 0) for p, c in counts.items()
    }
    return SupernaturalNumber(exceptions=excs, classes=[(tail.r, tail.m, 1)])


def cardinality(obj, p: int):
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return to_supernatural(obj).card(p)


def divides(p: int, obj) -> bool:
    return cardinality(obj, p) == INF


# --- the order --------------------------------------------------------------

class Relation(str, enum.Enum):
    LESS_OR_EQUAL = "LessOrEqual"
    GREATER_OR_EQUAL = "GreaterOrEqual"
    EQUIVALENT = "Equivalent"
    INCOMPARABLE = "Incomparable"


@dataclass(frozen=True)
class Obstruction:
    """Why ``P <= Q`` fails: an infinite excess at one prime or one index class."""

    kind: str  # "infinite_prime" | "infinite_class"
    prime: int | None = None
    residue: int | None = None
    modulus: int | None = None
    exponents: tuple = ()

    def to_json(self):
        out = {"kind": self.kind, "exponents": [_fmt(e) for e in self.exponents]}
        if self.prime is not None:
            out["prime"] = self.prime
        if self.modulus is not None:
            out["residue"], out["modulus"] = self.residue, self.modulus
        return out


@dataclass(frozen=True)
class OneWay:
    """Outcome of testing ``P <= Q``.

    ``holds`` comes with ``excess`` (the finite multiset of deletions from P'
    that makes it dominated by Q'), otherwise ``obstruction`` explains why.
    """

    holds: bool
    excess: dict = field(default_factory=dict)
    obstruction: Obstruction | None = None

    @property
    def deletions(self) -> int:
        return sum(self.excess.values())


@dataclass(frozen=True)
class OrderVerdict:
    relation: Relation
    forward: OneWay  # P <= Q
    backward: OneWay  # Q <= P

    @property
    def le(self) -> bool:
        return self.forward.holds

    @property
    def ge(self) -> bool:
        return self.backward.holds

    @property
    def strict(self) -> bool:
        return self.relation in (Relation.LESS_OR_EQUAL, Relation.GREATER_OR_EQUAL)


def _one_way(P: SupernaturalNumber, Q: SupernaturalNumber) -> OneWay:
    period = lcm(P.period, Q.period)
    pp, qp = P.lifted_pattern(period), Q.lifted_pattern(period)
    for c in range(period):
        a, b = pp[c], qp[c]
        if a > b:
            # every prime in this index class beyond the exceptions has excess
            return OneWay(False, obstruction=Obstruction("infinite_class", residue=c, modulus=period, exponents=(a, b)))
    excess = {}
    for p in sorted(set(P.exceptions) | set(Q.exceptions)):
        a, b = P.card(p), Q.card(p)
        if a == INF and b != INF:
            return OneWay(False, obstruction=Obstruction("infinite_prime", prime=p, exponents=(a, b)))
        if a != INF and a > b:
            excess[p] = a - b
    return OneWay(True, excess=excess)


def compare(P, Q) -> OrderVerdict:
    """Decide the Bing order between two sequences / supernatural numbers."""
    P, Q = to_supernatural(P), to_supernatural(Q)
    fwd, bwd = _one_way(P, Q), _one_way(Q, P)
    if fwd.holds and bwd.holds:
        rel = Relation.EQUIVALENT
    elif fwd.holds:
        rel = Relation.LESS_OR_EQUAL
    elif bwd.holds:
        rel = Relation.GREATER_OR_EQUAL
    else:
        rel = Relation.INCOMPARABLE
    return OrderVerdict(rel, fwd, bwd)


def le(P, Q) -> bool:
    return _one_way(to_supernatural(P), to_supernatural(Q)).holds


# --- diagonal bijection and the universal sequence -------------------------

def diagonal_bijection(k: int, i: int) -> int:
    """Position of (k, i) in the diagonal enumeration of N x N (1-based)."""
    if k < 1 or i < 1:
        raise ValueError("indices start at 1")
    return (k + i - 2) * (k + i - 1) // 2 + i


def diagonal_inverse(j: int) -> tuple[int, int]:
    if j < 1:
        raise ValueError("indices start at 1")
    s = (math.isqrt(8 * j) + 1) // 2  # candidate diagonal number k + i - 1
    while s * (s - 1) // 2 >= j:
        s -= 1
    while s * (s + 1) // 2 < j:
        s += 1
    i = j - s * (s - 1) // 2
    return s + 1 - i, i


def universal_sequence(n: int) -> list[int]:
    """First ``n`` terms of the sequence in which every prime recurs forever."""
    return [nth_prime(diagonal_inverse(j)[0]) for j in range(1, n + 1)]


# --- proper arrangement -----------------------------------------------------

def _assign(cards: Sequence, order: Sequence[Sequence[bool]]) -> tuple:
    """One prime level of the arrangement: rounds of (max, first argmax, upward closure)."""
    n = len(cards)
    out: list = [None] * n
    remaining = list(range(n))
    while remaining:
        kappa = max(cards[j] for j in remaining)
        m = min(j for j in remaining if cards[j] == kappa)
        group = [j for j in remaining if order[m][j]]
        for j in group:
            out[j] = kappa
        remaining = [j for j in remaining if out[j] is None]
    return tuple(out)


@dataclass(frozen=True)
class ArrangedSequence:
    """A sequence of primes and 1s whose slot f(k, i) holds p_k iff i <= card(p_k)."""

    cards: SupernaturalNumber

    def term(self, j: int) -> int:
        k, i = diagonal_inverse(j)
        p = nth_prime(k)
        return p if i <= self.cards.card_at_index(k, p) else 1

    def iter_terms(self) -> Iterator[int]:
        for j in itertools.count(1):
            yield self.term(j)

    def terms(self, n: int) -> list[int]:
        return [self.term(j) for j in range(1, n + 1)]

    iter_derived = iter_terms


def arrange_supernaturals(items: Sequence) -> list[SupernaturalNumber]:
    """Cardinality functions of the proper arrangement of ``items``."""
    sn = [to_supernatural(x) for x in items]
    if not sn:
        raise ValueError("need at least one sequence")
    order = [[le(a, b) for b in sn] for a in sn]
    period = lcm(*(s.period for s in sn))
    lifted = [s.lifted_pattern(period) for s in sn]
    patterns = list(zip(*(_assign([lp[c] for lp in lifted], order) for c in range(period))))
    primes = sorted(set().union(*(s.exceptions for s in sn)))
    excs = [dict() for _ in sn]
    for p in primes:
        for j, e in enumerate(_assign([s.card(p) for s in sn], order)):
            excs[j][p] = e
    return [SupernaturalNumber._from_parts(excs[j], patterns[j]) for j in range(len(sn))]


@dataclass(frozen=True)
class Arrangement:
    sequences: tuple[ArrangedSequence, ...]
    prefixes: tuple[tuple[int, ...], ...]

    @property
    def supernaturals(self) -> tuple[SupernaturalNumber, ...]:
        return tuple(s.cards for s in self.sequences)


def proper_arrangement(items: Sequence, n_terms: int) -> Arrangement:
    """Proper arrangement of several sequences; first ``n_terms`` of each plus card data."""
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    seqs = tuple(ArrangedSequence(c) for c in arrange_supernaturals(items))
    return Arrangement(seqs, tuple(tuple(s.terms(n_terms)) for s in seqs))


def is_properly_arranged(seqs: Sequence, depth: int = 64) -> bool:
    """Finite-depth test that the arrangement of ``seqs`` reproduces them term by term."""
    arranged = arrange_supernaturals([to_supernatural(_cards_of(s)) for s in seqs])
    for s, a in zip(seqs, arranged):
        raw = list(itertools.islice(s.iter_terms(), depth))
        if raw != ArrangedSequence(a).terms(depth):
            return False
    return True


def _cards_of(seq):
    return seq.cards if isinstance(seq, ArrangedSequence) else seq
