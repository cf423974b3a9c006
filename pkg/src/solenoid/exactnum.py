"""Exact integer/rational matrices, Smith normal form and prime utilities.

Rationals are plain :class:`fractions.Fraction` values.  Nothing in this
module touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

from sympy import factorint as _factorint
from sympy import isprime as _isprime
from sympy import prime as _prime
from sympy import primepi as _primepi

from .errors import NonSquare, SingularMatrix, SizeMismatch


# --- rationals and primes -------------------------------------------------

def parse_rational(value) -> Fraction:
    """Read ``"c/d"``, ``"c"``, an int or a Fraction.  Floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}; pass an exact rational string")
    if isinstance(value, str):
        value = value.strip()
    return Fraction(value)


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``|n|`` as ``{prime: exponent}`` (empty for 1)."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    if n == 1:
        return {}
    return {int(p): int(e) for p, e in _factorint(n).items()}


def prime_factors(n: int) -> list[int]:
    """Prime factors of ``|n|`` with multiplicity, in increasing order."""
    return [p for p, e in sorted(factorize(n).items()) for _ in range(e)]


def is_prime(p: int) -> bool:
    return bool(_isprime(p))


def nth_prime(k: int) -> int:
    """The k-th prime, 1-based: nth_prime(1) == 2."""
    if k < 1:
        raise ValueError("prime index starts at 1")
    return int(_prime(k))


def prime_index(p: int) -> int:
    """Inverse of :func:`nth_prime`."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return int(_primepi(p))


def valuation(q: Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    num, den = abs(q.numerator), q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def lcm(*values: int) -> int:
    return reduce(lambda a, b: a * b // gcd(a, b) if a and b else 0, values, 1)


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


# --- matrices -------------------------------------------------------------

class RationalMatrix:
    """Immutable dense matrix with Fraction entries."""

    __slots__ = ("_rows", "_shape")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(self._coerce(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise SizeMismatch("matrix must have at least one row and column")
        width = len(data[0])
        if any(len(row) != width for row in data):
            raise SizeMismatch("ragged rows")
        self._rows = data
        self._shape = (len(data), width)

    @staticmethod
    def _coerce(x):
        return parse_rational(x)

    # construction helpers
    @classmethod
    def identity(cls, n: int):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def diagonal(cls, values: Sequence):
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    # basic accessors
    @property
    def rows(self) -> int:
        return self._shape[0]

    @property
    def cols(self) -> int:
        return self._shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._shape

    @property
    def entries(self) -> tuple:
        """Row-major flat tuple of entries."""
        return tuple(x for row in self._rows for x in row)

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def tolist(self) -> list[list]:
        return [list(row) for row in self._rows]

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def __iter__(self):
        return iter(self._rows)

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self._shape == other._shape and all(
            a == b for a, b in zip(self.entries, other.entries)
        )

    def __hash__(self):
        return hash((self._shape, self.entries))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self._rows)
        return f"{type(self).__name__}([{body}])"

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_integral(self) -> bool:
        return all(Fraction(x).denominator == 1 for x in self.entries)

    def to_int(self) -> "IntMatrix":
        if not self.is_integral():
            raise ValueError("matrix has non-integer entries")
        return IntMatrix([[int(x) for x in row] for row in self._rows])

    def to_rational(self) -> "RationalMatrix":
        return RationalMatrix(self._rows)

    # arithmetic
    def transpose(self):
        return type(self)(list(zip(*self._rows)))

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise SizeMismatch(f"cannot multiply {self.shape} by {other.shape}")
            cols = list(zip(*other._rows))
            out = [[sum((a * b for a, b in zip(row, col)), 0) for col in cols] for row in self._rows]
            return _result_type(self, other)(out)
        if isinstance(other, (list, tuple)):
            if len(other) != self.cols:
                raise SizeMismatch("vector length does not match column count")
            return tuple(sum((a * b for a, b in zip(row, other)), 0) for row in self._rows)
        return NotImplemented

    def __add__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise SizeMismatch("shape mismatch in addition")
        out = [[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)]
        return _result_type(self, other)(out)

    def __neg__(self):
        return type(self)([[-x for x in row] for row in self._rows])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor) -> "RationalMatrix":
        factor = Fraction(factor)
        out = [[factor * x for x in row] for row in self._rows]
        if isinstance(self, IntMatrix) and factor.denominator == 1:
            return IntMatrix([[int(x) for x in row] for row in out])
        return RationalMatrix(out)

    def det(self):
        """Exact determinant (Fraction elimination; Bareiss for integer input)."""
        if not self.is_square:
            raise NonSquare(f"determinant of non-square {self.shape} matrix")
        if isinstance(self, IntMatrix):
            return _bareiss_det([list(r) for r in self._rows])
        a = [list(r) for r in self._rows]
        n = self.rows
        det = Fraction(1)
        for c in range(n):
            piv = next((r for r in range(c, n) if a[r][c] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                det = -det
            det *= a[c][c]
            for r in range(c + 1, n):
                if a[r][c]:
                    f = a[r][c] / a[c][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return det


class IntMatrix(RationalMatrix):
    """Integer matrix; arithmetic between IntMatrix operands stays integral."""

    __slots__ = ()

    @staticmethod
    def _coerce(x):
        if isinstance(x, bool):
            raise TypeError("booleans are not integers")
        q = parse_rational(x)
        if q.denominator != 1:
            raise ValueError(f"non-integer entry {x!r} in IntMatrix")
        return int(q)

    def to_int(self) -> "IntMatrix":
        return self


def _result_type(a, b):
    return IntMatrix if isinstance(a, IntMatrix) and isinstance(b, IntMatrix) else RationalMatrix


def _bareiss_det(a: list[list[int]]) -> int:
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def as_int_matrix(m) -> IntMatrix:
    if isinstance(m, IntMatrix):
        return m
    if isinstance(m, RationalMatrix):
        return m.to_int()
    return IntMatrix(m)


def as_rational_matrix(m) -> RationalMatrix:
    if isinstance(m, RationalMatrix):
        return m
    return RationalMatrix(m)


# --- Smith normal form ----------------------------------------------------

@dataclass(frozen=True)
class SnfDecomposition:
    """``U @ M @ V == D`` with U, V unimodular and D diagonal, d_1 | d_2 | ..."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(self.D.rows))


def snf(m) -> SnfDecomposition:
    """Smith normal form of a square nonsingular integer matrix.

    Pivot selection takes the entry of least nonzero absolute value in the
    active block, ties broken by lowest (row, col).
    """
    M = as_int_matrix(m)
    if not M.is_square:
        raise NonSquare(f"snf needs a square matrix, got {M.shape}")
    if M.det() == 0:
        raise SingularMatrix("snf requires det != 0")
    n = M.rows
    a = M.tolist()
    U = IntMatrix.identity(n).tolist()
    V = IntMatrix.identity(n).tolist()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row dst += k * row src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, k):  # col dst += k * col src
        for row in a:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    for t in range(n):
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, n):
                    x = abs(a[i][j])
                    if x and (best is None or x < best[0]):
                        best = (x, i, j)
            _, pi, pj = best
            if pi != t:
                swap_rows(pi, t)
            if pj != t:
                swap_cols(pj, t)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, n):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
                    dirty |= a[i][t] != 0
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
                    dirty |= a[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, n) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]

    return SnfDecomposition(IntMatrix(U), IntMatrix(a), IntMatrix(V))


def covering_degree(m) -> int:
    """Degree of the torus covering induced by ``m``, i.e. ``|det m|``."""
    M = as_int_matrix(m)
    if not M.is_square:
        raise NonSquare(f"covering degree needs a square matrix, got {M.shape}")
    d = abs(M.det())
    if d == 0:
        raise SingularMatrix("covering degree undefined for det = 0")
    return d


# --- rational linear algebra ---------------------------------------------

def rref(m) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [list(row) for row in as_rational_matrix(m)]
    rows, cols = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rat_kernel_rank(m) -> tuple[int, list[tuple[Fraction, ...]]]:
    """Rank and a basis of the right kernel ``{x : m @ x == 0}``."""
    M = as_rational_matrix(m)
    reduced, pivots = rref(M)
    free = [c for c in range(M.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * M.cols
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -reduced[r][f]
        basis.append(tuple(v))
    return len(pivots), basis


def rat_inverse(m) -> RationalMatrix:
    """Exact inverse via Gauss-Jordan on ``[m | I]``."""
    M = as_rational_matrix(m)
    if not M.is_square:
        raise NonSquare(f"cannot invert non-square {M.shape} matrix")
    n = M.rows
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    reduced, pivots = rref(RationalMatrix(aug))
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular")
    return RationalMatrix([row[n:] for row in reduced[:n]])


def primitive_integer_vector(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a nonzero rational vector to coprime integers, first nonzero entry positive."""
    v = [Fraction(x) for x in v]
    if not any(v):
        raise ValueError("zero vector has no primitive form")
    den = lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = reduce(gcd, (abs(x) for x in ints))
    ints = [x // g for x in ints]
    first = next(x for x in ints if x)
    if first < 0:
        ints = [-x for x in ints]
    return tuple(ints)
