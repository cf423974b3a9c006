"""From a presented rational vector group to a product of 1-solenoids.

A subgroup G of a Q-vector space with basis beta_1..beta_n is presented by
generators lambda_i = sum_j (c_j^i / d_j^i) beta_j.  When the denominators of
every generator are pairwise coprime, G splits as a product of rank-one
groups, and the lcm recursion below produces the diagonal bonding matrices of
the dual solenoid.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod
from typing import Sequence

from .errors import NotRelativelyPrime, RoundtripFailure, SizeMismatch
from .exactnum import IntMatrix, ext_gcd, factorize, lcm, parse_rational
from .supernatural import INF, SupernaturalNumber


@dataclass(frozen=True)
class GroupPresentation:
    """Either finitely many generator rows, or the geometric family c_j / b_j^i."""

    n: int
    generators: tuple[tuple[Fraction, ...], ...] = ()
    numerators: tuple[int, ...] | None = None
    bases: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise SizeMismatch("basis size must be >= 1")
        if self.numerators is not None:
            nums, bases = tuple(int(c) for c in self.numerators), tuple(int(b) for b in self.bases)
            if len(nums) != self.n or len(bases) != self.n:
                raise SizeMismatch("one numerator and one base per basis element")
            if not any(nums):
                raise ValueError("generators must be nonzero")
            for c, b in zip(nums, bases):
                if b < 1:
                    raise ValueError("bases must be >= 1")
                if c and gcd(c, b) != 1:
                    raise ValueError(f"{c}/{b}^i is not in lowest terms")
            object.__setattr__(self, "numerators", nums)
            object.__setattr__(self, "bases", tuple(b if c else 1 for c, b in zip(nums, bases)))
        else:
            rows = tuple(tuple(parse_rational(x) for x in row) for row in self.generators)
            if not rows:
                raise ValueError("need at least one generator")
            for row in rows:
                if len(row) != self.n:
                    raise SizeMismatch("generator rows must have n entries")
                if not any(row):
                    raise ValueError("generators must be nonzero")
            object.__setattr__(self, "generators", rows)

    @classmethod
    def finite(cls, rows: Sequence[Sequence]):
        rows = [list(r) for r in rows]
        return cls(len(rows[0]), tuple(tuple(r) for r in rows))

    @classmethod
    def pattern(cls, numerators: Sequence[int], bases: Sequence[int]):
        return cls(len(numerators), numerators=tuple(numerators), bases=tuple(bases))

    @property
    def is_pattern(self) -> bool:
        return self.numerators is not None

    @property
    def length(self) -> int | None:
        return None if self.is_pattern else len(self.generators)

    def row(self, i: int) -> tuple[Fraction, ...]:
        """Generator lambda_i, 1-based."""
        if self.is_pattern:
            return tuple(Fraction(c, b**i) for c, b in zip(self.numerators, self.bases))
        return self.generators[i - 1]


@dataclass(frozen=True)
class RelativePrimality:
    ok: bool
    generator: int | None = None  # 1-based
    index: int | None = None  # 1-based coordinate j

    def __bool__(self):
        return self.ok


def _first_shared(dens: Sequence[int]) -> int | None:
    d = prod(dens)
    return next((j for j, dj in enumerate(dens) if gcd(dj, d // dj) != 1), None)


def check_relatively_prime(G: GroupPresentation) -> RelativePrimality:
    """gcd(d_j, d / d_j) == 1 for every generator, d the product of its denominators."""
    if G.is_pattern:
        # d_j^i = b_j^i, so one generator decides all of them
        rows = [G.row(1)]
    else:
        rows = G.generators
    for i, row in enumerate(rows, start=1):
        j = _first_shared([x.denominator for x in row])
        if j is not None:
            return RelativePrimality(False, i, j + 1)
    return RelativePrimality(True)


@dataclass(frozen=True)
class DualPresentation:
    matrices: tuple[IntMatrix, ...]  # M_i = diag(Delta_1^i, ..., Delta_n^i)
    coordinates: tuple[SupernaturalNumber, ...]
    deltas: tuple[tuple[int, ...], ...] = field(repr=False, default=())  # delta^i, i = 1..N


def _deltas(G: GroupPresentation, N: int) -> list[tuple[int, ...]]:
    """delta_j^i = lcm(d_j^i, delta_j^(i-1)) with delta^0 = 1; returns delta^0..delta^N."""
    out = [(1,) * G.n]
    for i in range(1, N + 1):
        out.append(tuple(lcm(x.denominator, prev) for x, prev in zip(G.row(i), out[-1])))
    return out


def dual_presentation(G: GroupPresentation, N: int) -> DualPresentation:
    if N < 1:
        raise ValueError("N must be >= 1")
    rp = check_relatively_prime(G)
    if not rp:
        raise NotRelativelyPrime(
            f"generator {rp.generator} shares a prime between coordinate {rp.index} and the others",
            rp.generator,
            rp.index,
        )
    depth = N if G.is_pattern else min(N, G.length)
    deltas = _deltas(G, depth)
    mats = tuple(
        IntMatrix.diagonal([cur // prev for cur, prev in zip(deltas[i], deltas[i - 1])])
        for i in range(1, depth + 1)
    )
    if G.is_pattern:
        # delta_j^i = b_j^i for every i: each prime of b_j recurs forever
        coords = tuple(SupernaturalNumber({p: INF for p in factorize(b)}) for b in G.bases)
    else:
        full = _deltas(G, G.length)[-1]  # card_p = sum_i v_p(Delta^i) = v_p(delta^last)
        coords = tuple(SupernaturalNumber(Counter(factorize(d))) for d in full)
    return DualPresentation(mats, coords, tuple(deltas[1:]))


# --- membership round trip ---------------------------------------------------

@dataclass(frozen=True)
class RoundtripStep:
    """beta_j / delta_j^i written over (lambda_1..lambda_depth, beta_1..beta_n)."""

    generator: int
    coordinate: int
    mu: int
    nu: int
    r: int
    s: int
    coefficients: tuple[int, ...]


@dataclass(frozen=True)
class RoundtripReport:
    ok: bool
    depth: int
    steps: tuple[RoundtripStep, ...] = ()

    def __bool__(self):
        return self.ok


def _value(coeffs: Sequence[int], G: GroupPresentation, depth: int) -> tuple[Fraction, ...]:
    """The element sum coeffs * (lambda's, beta's) as a vector over the basis."""
    out = [Fraction(0)] * G.n
    for i in range(depth):
        if coeffs[i]:
            for j, x in enumerate(G.row(i + 1)):
                out[j] += coeffs[i] * x
    for j in range(G.n):
        out[j] += coeffs[depth + j]
    return tuple(out)


def membership_roundtrip(G: GroupPresentation, depth: int) -> RoundtripReport:
    """Rewrite every beta_j / delta_j^i through the generators and back.

    Forward: with d = d_1 ... d_n for generator i,
    e_j = (d/d_j) lambda_i - sum_{k != j} c_k d/(d_j d_k) beta_k equals
    c_j (d/d_j) beta_j / d_j; a Bezout pair mu c_j d/d_j + nu d_j = 1 gives
    beta_j/d_j = mu e_j + nu beta_j, and a second pair merges it with
    beta_j/delta_j^(i-1).  Backward: lambda_i = sum_j c_j (delta_j^i/d_j^i) beta_j/delta_j^i.
    Raises :class:`RoundtripFailure` when a Bezout pair does not exist.
    """
    if not G.is_pattern:
        depth = min(depth, G.length)
    width = depth + G.n
    unit = [[0] * width for _ in range(G.n)]
    for j in range(G.n):
        unit[j][depth + j] = 1  # beta_j itself
    prev_repr = [row[:] for row in unit]  # representation of beta_j / delta_j^(i-1)
    prev_delta = [1] * G.n
    steps = []
    for i in range(1, depth + 1):
        row = G.row(i)
        dens = [x.denominator for x in row]
        nums = [x.numerator for x in row]
        d = prod(dens)
        for j in range(G.n):
            dj = dens[j]
            if dj == 1:
                mu, nu, rep_d = 0, 1, unit[j][:]
            else:
                e = [0] * width
                e[i - 1] = d // dj
                for k in range(G.n):
                    if k != j and nums[k]:
                        e[depth + k] -= nums[k] * (d // (dj * dens[k]))
                g, mu, nu = ext_gcd(nums[j] * (d // dj), dj)
                if abs(g) != 1:
                    raise RoundtripFailure(f"no Bezout pair for generator {i}, coordinate {j + 1}", index=i)
                mu, nu = mu * g, nu * g
                rep_d = [mu * a + nu * b for a, b in zip(e, unit[j])]
            delta = lcm(dj, prev_delta[j])
            g, r, s = ext_gcd(delta // dj, delta // prev_delta[j])
            if g != 1:
                raise RoundtripFailure(f"lcm step failed at generator {i}", index=i)
            rep = [r * a + s * b for a, b in zip(rep_d, prev_repr[j])]
            want = tuple(Fraction(int(k == j), delta) for k in range(G.n))
            if _value(rep, G, depth) != want:
                raise RoundtripFailure(f"beta_{j + 1}/delta not recovered at generator {i}", index=i)
            steps.append(RoundtripStep(i, j + 1, mu, nu, r, s, tuple(rep)))
            prev_repr[j], prev_delta[j] = rep, delta
        # lambda_i back from the new generators beta_j / delta_j^i
        for j in range(G.n):
            if prev_delta[j] % dens[j]:
                raise RoundtripFailure(f"d_j^i does not divide delta_j^i at generator {i}", index=i)
        back = tuple(
            nums[j] * (prev_delta[j] // dens[j]) * Fraction(1, prev_delta[j]) for j in range(G.n)
        )
        if back != row:
            raise RoundtripFailure(f"generator {i} not recovered", index=i)
    return RoundtripReport(True, depth, tuple(steps))
