"""Frequency vectors, irrationality, and equivalence of linear flows.

A frequency vector omega in R^n is stored as rational coordinates over a
declared symbolic basis of reals assumed linearly independent over Q (label
``"1"`` first).  Two flows on a product solenoid are equivalent exactly when
some automorphism A and nonzero scalar a satisfy ``a * omega' = A omega``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    BasisMismatch,
    NotProperlyArranged,
    SingularMatrix,
    SizeMismatch,
    ZeroInput,
    ZeroScale,
)
from .exactnum import (
    RationalMatrix,
    as_rational_matrix,
    ext_gcd,
    factorize,
    format_rational,
    primitive_integer_vector,
    rat_inverse,
    rat_kernel_rank,
    rref,
    valuation,
)
from .products import FormCase, ProductSolenoid, aut_group_form_2d, is_automorphism
from .supernatural import INF, Relation, SupernaturalNumber, le


# --- symbolic frequencies -------------------------------------------------

@dataclass(frozen=True)
class SymbolicBasis:
    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        if not labels:
            raise ValueError("basis must be nonempty")
        if labels[0] != "1":
            raise ValueError('the first basis label is reserved for the unit "1"')
        if len(set(labels)) != len(labels):
            raise ValueError("basis labels must be distinct")
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.labels)

    def values(self, overrides: Mapping[str, float] | None = None) -> list[float]:
        """Float value of each label (``sqrtN``, ``pi``, ``e``, numerals, or ``overrides``)."""
        return [symbol_value(lab, overrides) for lab in self.labels]


def symbol_value(label: str, overrides: Mapping[str, float] | None = None) -> float:
    if overrides and label in overrides:
        return float(overrides[label])
    if label == "1":
        return 1.0
    if label == "pi":
        return math.pi
    if label == "e":
        return math.e
    if label.startswith("sqrt"):
        return math.sqrt(float(Fraction(label[4:])))
    try:
        return float(Fraction(label))
    except ValueError:
        raise ValueError(f"no numeric value known for symbol {label!r}") from None


@dataclass(frozen=True)
class FrequencyVector:
    """``coords[i]`` holds the coordinates of omega_i over ``basis``."""

    basis: SymbolicBasis
    coords: RationalMatrix

    def __post_init__(self):
        coords = as_rational_matrix(self.coords)
        if coords.cols != len(self.basis):
            raise SizeMismatch("coordinate rows must match the basis length")
        if all(x == 0 for x in coords.entries):
            raise ZeroInput("frequency vector must be nonzero")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def of(cls, labels: Sequence[str], rows):
        return cls(SymbolicBasis(tuple(labels)), RationalMatrix(rows))

    @classmethod
    def rational(cls, values):
        """A frequency vector with rational entries (basis ``{1}``)."""
        return cls.of(["1"], [[v] for v in values])

    @property
    def n(self) -> int:
        return self.coords.rows

    def is_rational(self) -> bool:
        return all(self.coords[i, b] == 0 for i in range(self.n) for b in range(1, len(self.basis)))

    def numeric(self, overrides=None) -> list[float]:
        vals = self.basis.values(overrides)
        return [math.fsum(float(c) * v for c, v in zip(row, vals)) for row in self.coords]

    def to_json(self):
        return {
            "basis": list(self.basis.labels),
            "coords": [[format_rational(x) for x in row] for row in self.coords],
        }


def _same_basis(w: FrequencyVector, w2: FrequencyVector):
    if w.basis != w2.basis:
        raise BasisMismatch(f"{w.basis.labels} vs {w2.basis.labels}")
    if w.n != w2.n:
        raise SizeMismatch("frequency vectors differ in length")


@dataclass(frozen=True)
class Irrationality:
    irrational: bool
    witness: tuple[int, ...] | None = None  # integer k with sum k_i omega_i = 0

    def __bool__(self):
        return self.irrational


def is_irrational(w: FrequencyVector) -> Irrationality:
    _, kernel = rat_kernel_rank(w.coords.transpose())
    if not kernel:
        return Irrationality(True)
    return Irrationality(False, primitive_integer_vector(kernel[0]))


def rank(w: FrequencyVector) -> int:
    return rat_kernel_rank(w.coords)[0]


def transform_frequency(H, a, w: FrequencyVector) -> FrequencyVector:
    """``(1/a) H omega``."""
    a = Fraction(a)
    if a == 0:
        raise ZeroScale("a must be nonzero")
    H = as_rational_matrix(H)
    if H.shape != (w.n, w.n):
        raise SizeMismatch(f"H must be {w.n}x{w.n}")
    return FrequencyVector(w.basis, (H @ w.coords).scale(1 / a))


def verify_equivalence(A, a, P: ProductSolenoid, w: FrequencyVector, w2: FrequencyVector) -> bool:
    """Check a certificate: A an automorphism of P and ``a * omega' == A omega``."""
    _same_basis(w, w2)
    A = as_rational_matrix(A)
    if A.shape != (w.n, w.n) or P.n != w.n:
        raise SizeMismatch("certificate, product and frequencies disagree in size")
    a = Fraction(a)
    if a == 0:
        return False
    if not is_automorphism(A, P).is_automorphism:
        return False
    return w2.coords.scale(a) == A @ w.coords


# --- the 2-dimensional decision -------------------------------------------

class VerdictKind(str, enum.Enum):
    EQUIVALENT = "Equivalent"
    NOT_EQUIVALENT = "NotEquivalent"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class EquivalenceVerdict:
    kind: VerdictKind
    A: RationalMatrix | None = None
    a: Fraction | None = None
    detail: dict = field(default_factory=dict)  # obstruction or reason

    @property
    def equivalent(self) -> bool:
        return self.kind is VerdictKind.EQUIVALENT

    def to_json(self):
        out = {"verdict": self.kind.value}
        if self.A is not None:
            out["A"] = [[format_rational(x) for x in row] for row in self.A]
            out["a"] = format_rational(self.a)
        if self.detail:
            key = "obstruction" if self.kind is VerdictKind.NOT_EQUIVALENT else "reason"
            out[key] = self.detail
        return out


def _not_eq(kind, **info):
    return EquivalenceVerdict(VerdictKind.NOT_EQUIVALENT, detail={"kind": kind, **info})


def _solve_rows(X: RationalMatrix, Y: RationalMatrix) -> tuple[RationalMatrix, list[int]]:
    """C with C X = Y on the pivot columns of X, plus the rows of Y it fails to reproduce."""
    _, pivots = rref(X)
    XS = RationalMatrix([[X[i, c] for c in pivots] for i in range(X.rows)])
    YS = RationalMatrix([[Y[i, c] for c in pivots] for i in range(X.rows)])
    C = YS @ rat_inverse(XS)
    CX = C @ X
    return C, [i for i in range(X.rows) if CX.row(i) != Y.row(i)]


def _rank_two(P, Q, X, Y) -> EquivalenceVerdict:
    """omega has independent entries: A = a C is forced, only a is free."""
    C, outside = _solve_rows(X, Y)
    if outside:
        return _not_eq(
            "span",
            note="omega' is not in the rational span of omega, so no rational a works",
            rows=[i + 1 for i in outside],
        )
    try:
        Cinv = rat_inverse(C)
    except SingularMatrix:
        return _not_eq("rank", note="omega' spans a smaller space than omega")
    coords = (P, Q)
    # a zero of C stays a zero of a C; nonzero entries need P_j >= P_i
    for M, name in ((C, "A"), (Cinv, "A_inv")):
        for i in range(2):
            for j in range(2):
                if M[i, j] != 0 and not le(coords[i], coords[j]):
                    return _not_eq("order", matrix=name, entry=[i + 1, j + 1])
    # per prime: -v(C_ij) <= v(a) <= v(Cinv_ij) for primes outside the infinite part of P_j
    primes = set()
    for M in (C, Cinv):
        for x in M.entries:
            if x:
                primes |= set(factorize(x.numerator)) | set(factorize(x.denominator))
    a = Fraction(1)
    for ell in sorted(primes):
        lo, hi = -math.inf, math.inf
        for i in range(2):
            for j in range(2):
                if coords[j].card(ell) == INF:
                    continue
                if C[i, j]:
                    lo = max(lo, -valuation(C[i, j], ell))
                if Cinv[i, j]:
                    hi = min(hi, valuation(Cinv[i, j], ell))
        if lo > hi:
            return _not_eq("valuation", prime=ell, lower=lo, upper=hi)
        v = min(max(0, lo), hi)
        a *= Fraction(ell) ** int(v)
    return EquivalenceVerdict(VerdictKind.EQUIVALENT, C.scale(a), a)


def _unimodular_sending(u: tuple[int, int], w: tuple[int, int]) -> RationalMatrix:
    """Integer matrix of determinant 1 mapping primitive u to primitive w."""

    def completion(v):
        p, q = v
        g, s, t = ext_gcd(p, q)  # p s + q t = g = +-1
        s, t = s * g, t * g
        return RationalMatrix([[p, -t], [q, s]])

    X, Y = completion(u), completion(w)
    return Y @ rat_inverse(X)


def _direction(X: RationalMatrix):
    """Write the rows of a rank-1 matrix as multiples x_i of a common row v."""
    v = next(row for row in X if any(row))
    piv = next(b for b, c in enumerate(v) if c)
    return v, tuple(X[i, piv] / v[piv] for i in range(X.rows))


def _units_mod(N: int, generators: Sequence[int], target: int, limit: int = 200_000):
    """A word in ``generators`` (and -1) congruent to ``target`` mod N.

    Returns ``(word or None, complete)``; ``complete`` says the whole generated
    subgroup of (Z/N)^x was explored.
    """
    start = 1 % N
    seen = {start: Fraction(1)}
    frontier = [start]
    gens = [(-1, Fraction(-1))] + [(g, Fraction(g)) for g in generators] + [
        (pow(g, -1, N), Fraction(1, g)) for g in generators
    ]
    while frontier and len(seen) <= limit:
        nxt = []
        for x in frontier:
            for g, word in gens:
                y = (x * g) % N
                if y not in seen:
                    seen[y] = seen[x] * word
                    nxt.append(y)
        if target % N in seen:
            return seen[target % N], True
        frontier = nxt
    return seen.get(target % N), not frontier


def _lower_triangular(P, Q, x, y, prime_bound):
    """Solve [[al,0],[ga,de]] x = b y with al a unit of R_P, de of R_Q, ga in R_P."""
    x1, x2 = x
    y1, y2 = y
    if x1 == 0:
        if y1 != 0:
            return _not_eq("zero-pattern", note="first coordinate vanishes on one side only")
        return Fraction(1), Fraction(0), Fraction(1), x2 / y2
    if y1 == 0:
        return _not_eq("zero-pattern", note="first coordinate vanishes on one side only")
    r1, r2 = y2 / y1, x2 / x1
    # gamma = u r1 - r2 with u = al/de; only primes outside the infinite part of P matter
    bad = {}
    for q in (r1, r2):
        if q:
            for ell in factorize(q.denominator):
                if P.card(ell) != INF:
                    bad[ell] = None
    residues = {}
    for ell in sorted(bad):
        v1 = valuation(r1, ell) if r1 else math.inf
        v2 = valuation(r2, ell) if r2 else math.inf
        if v1 != v2:
            return _not_eq("valuation", prime=ell, note="gamma cannot be integral at this prime",
                           valuations=[str(v1), str(v2)])
        k = -v1
        ratio = r2 / r1
        mod = ell**k
        residues[mod] = ratio.numerator * pow(ratio.denominator, -1, mod) % mod
    u = Fraction(1)
    if residues:
        N = 1
        for m in residues:
            N *= m
        target = 0
        for m, res in residues.items():  # CRT
            M = N // m
            target = (target + res * M * pow(M, -1, m)) % N
        finite_part = all(e != INF for e in P.pattern)
        found, complete = _units_mod(N, _infinite_primes(P, prime_bound), target)
        if found is None:
            if finite_part and complete:
                return _not_eq("unit-congruence", modulus=N, residue=target,
                               note="no unit of R_P has the required residue")
            return EquivalenceVerdict(
                VerdictKind.UNDECIDED,
                detail={"kind": "prime-search", "modulus": N, "residue": target, "prime_bound": prime_bound},
            )
        u = found
    al, de = u, Fraction(1)
    ga = u * r1 - r2
    b = al * x1 / y1
    return al, ga, de, b


def _infinite_primes(P: SupernaturalNumber, bound: int) -> list[int]:
    from sympy import primerange

    exc = [p for p, e in P.exceptions.items() if e == INF]
    if all(e != INF for e in P.pattern):
        return sorted(exc)
    return sorted(set(exc) | {p for p in primerange(2, bound) if P.card(p) == INF})


def _rank_one(P, Q, form, X, Y, prime_bound) -> EquivalenceVerdict:
    v, x = _direction(X)
    v2, y = _direction(Y)
    # v2 must be a rational multiple of v, else a would have to be irrational
    lam = next(v2[b] / v[b] for b, c in enumerate(v) if c)
    if any(v2[b] != lam * v[b] for b in range(len(v))):
        conditional = _rank_one_rational(P, Q, form, x, y, prime_bound)
        return EquivalenceVerdict(
            VerdictKind.UNDECIDED,
            detail={
                "kind": "irrational-scalar",
                "direction": [format_rational(c) for c in v],
                "direction_prime": [format_rational(c) for c in v2],
                "note": "a would be a multiple of the ratio of the two directions; "
                "the verdict below assumes that ratio is admissible",
                "verdict_if_admissible": conditional.kind.value,
            },
        )
    y = tuple(lam * c for c in y)
    # now omega = x v and omega' = y v, so a omega' = A omega reads A x = a y
    return _rank_one_rational(P, Q, form, x, y, prime_bound)


def _rank_one_rational(P, Q, form, x, y, prime_bound) -> EquivalenceVerdict:
    """Find A in Aut and rational b with A x = b y (x, y in Q^2, nonzero)."""
    if form.case is FormCase.EQUAL:
        px, py = primitive_integer_vector(x), primitive_integer_vector(y)
        gx = next(c / p for c, p in zip(x, px) if p)
        gy = next(c / p for c, p in zip(y, py) if p)
        U = _unimodular_sending(px, py)
        return EquivalenceVerdict(VerdictKind.EQUIVALENT, U, gx / gy)

    if form.case is FormCase.INCOMPARABLE:
        for i in range(2):
            if (x[i] == 0) != (y[i] == 0):
                return _not_eq("zero-pattern", coordinate=i + 1)
        coords = (P, Q)
        ratios = [(coords[i], y[i] / x[i]) for i in range(2) if x[i] != 0]
        primes = set()
        for _, q in ratios:
            primes |= set(factorize(q.numerator)) | set(factorize(q.denominator))
        b = Fraction(1)
        for ell in sorted(primes):
            forced = {-valuation(q, ell) for S, q in ratios if S.card(ell) != INF}
            if len(forced) > 1:
                return _not_eq("valuation", prime=ell, note="the two diagonal entries need different scalings")
            if forced:
                b *= Fraction(ell) ** forced.pop()
        A = RationalMatrix([[b * y[0] / x[0] if x[0] else 1, 0], [0, b * y[1] / x[1] if x[1] else 1]])
        return EquivalenceVerdict(VerdictKind.EQUIVALENT, A, b)

    swap = form.relation is Relation.LESS_OR_EQUAL
    if swap:
        P, Q, x, y = Q, P, x[::-1], y[::-1]
    sol = _lower_triangular(P, Q, x, y, prime_bound)
    if isinstance(sol, EquivalenceVerdict):
        return sol
    al, ga, de, b = sol
    A = RationalMatrix([[al, 0], [ga, de]])
    if swap:
        A = RationalMatrix([[A[1, 1], A[1, 0]], [A[0, 1], A[0, 0]]])
    return EquivalenceVerdict(VerdictKind.EQUIVALENT, A, b)


def decide_equivalence_2d(
    P: ProductSolenoid, w: FrequencyVector, w2: FrequencyVector, prime_bound: int = 10_000
) -> EquivalenceVerdict:
    """Decide whether the flows along omega and omega' on a 2-dimensional product are equivalent.

    The scalar a is searched among rationals.  ``NotEquivalent`` means no
    rational a works; ``Undecided`` is returned when only an irrational a could
    possibly work, or when a unit search over infinitely many primes is cut at
    ``prime_bound``.  Every ``Equivalent`` answer carries a checked certificate.
    """
    if P.n != 2:
        raise SizeMismatch("the decision procedure handles 2-dimensional products")
    if not P.properly_arranged:
        raise NotProperlyArranged("arrange the product first")
    _same_basis(w, w2)
    if w.n != 2:
        raise SizeMismatch("frequencies must have two entries")
    p1, p2 = P.coordinates
    form = aut_group_form_2d(p1, p2)
    r, r2 = rank(w), rank(w2)
    if r != r2:
        return _not_eq("rank", ranks=[r, r2])
    if r == 2:
        verdict = _rank_two(p1, p2, w.coords, w2.coords)
    else:
        verdict = _rank_one(p1, p2, form, w.coords, w2.coords, prime_bound)
    if verdict.equivalent and not verify_equivalence(verdict.A, verdict.a, P, w, w2):
        from .errors import InvariantBreach

        raise InvariantBreach("constructed certificate failed verification")
    if verdict.kind is VerdictKind.NOT_EQUIVALENT or verdict.equivalent:
        detail = dict(verdict.detail)
        detail.setdefault("case", form.case.value)
        return EquivalenceVerdict(verdict.kind, verdict.A, verdict.a, detail if not verdict.equivalent else {})
    return verdict
