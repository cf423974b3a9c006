from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solenoid.errors import NonSquare, SingularMatrix, SizeMismatch
from solenoid.exactnum import (
    IntMatrix,
    RationalMatrix,
    covering_degree,
    ext_gcd,
    factorize,
    nth_prime,
    parse_rational,
    prime_index,
    primitive_integer_vector,
    rat_inverse,
    rat_kernel_rank,
    snf,
    valuation,
)


def torus_kernel_size(m):
    """Count x in (Q/Z)^2 with m x integral, by scanning the grid (1/D) Z^2 / Z^2."""
    (a, b), (c, d) = m
    D = abs(a * d - b * c)
    count = 0
    for u, v in product(range(D), repeat=2):
        if (a * u + b * v) % D == 0 and (c * u + d * v) % D == 0:
            count += 1
    return count


def test_parse_rational_refuses_floats():
    assert parse_rational("3/6") == F(1, 2)
    assert parse_rational(" -4 ") == -4
    with pytest.raises(TypeError):
        parse_rational(0.5)


def test_primes():
    assert [nth_prime(k) for k in range(1, 7)] == [2, 3, 5, 7, 11, 13]
    assert prime_index(13) == 6
    assert factorize(-90) == {2: 1, 3: 2, 5: 1}
    assert valuation(F(9, 8), 2) == -3
    with pytest.raises(ValueError):
        factorize(0)


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_ext_gcd_bezout(a, b):
    g, x, y = ext_gcd(a, b)
    assert a * x + b * y == g


def test_snf_small_example():
    dec = snf([[2, 1], [0, 2]])
    assert dec.invariant_factors == (1, 4)
    assert dec.U @ IntMatrix([[2, 1], [0, 2]]) @ dec.V == dec.D


def test_snf_identity():
    dec = snf(IntMatrix.identity(3))
    assert dec.D == IntMatrix.identity(3)
    assert dec.U == IntMatrix.identity(3) and dec.V == IntMatrix.identity(3)


def test_snf_errors():
    with pytest.raises(SingularMatrix):
        snf([[1, 2], [2, 4]])
    with pytest.raises(NonSquare):
        snf([[1, 2, 3], [4, 5, 6]])
    with pytest.raises(SizeMismatch):
        RationalMatrix([[1, 2], [3]])


square3 = st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=3, max_size=3)


@settings(max_examples=200)
@given(square3)
def test_snf_properties(rows):
    M = IntMatrix(rows)
    if M.det() == 0:
        return
    dec = snf(M)
    assert dec.U @ M @ dec.V == dec.D
    assert abs(dec.U.det()) == 1 and abs(dec.V.det()) == 1
    f = dec.invariant_factors
    assert all(x > 0 for x in f)
    assert all(f[i + 1] % f[i] == 0 for i in range(len(f) - 1))
    assert all(dec.D[i, j] == 0 for i in range(3) for j in range(3) if i != j)
    assert covering_degree(M) == abs(M.det()) == f[0] * f[1] * f[2]


def test_covering_degree_matches_torus_kernel():
    for m in ([[2, 1], [0, 2]], [[3, 1], [1, 3]], [[0, 2], [-3, 1]]):
        assert covering_degree(m) == torus_kernel_size(m)


@settings(max_examples=100)
@given(st.lists(st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=7), min_size=3, max_size=3), min_size=3, max_size=3))
def test_inverse_roundtrip(rows):
    M = RationalMatrix(rows)
    if M.det() == 0:
        with pytest.raises(SingularMatrix):
            rat_inverse(M)
        return
    assert M @ rat_inverse(M) == RationalMatrix.identity(3)


def test_kernel_and_primitive_vector():
    rank, kernel = rat_kernel_rank([[2, 4]])
    assert rank == 1
    assert primitive_integer_vector(kernel[0]) == (2, -1)
    assert primitive_integer_vector([F(-1, 2), F(3, 4)]) == (2, -3)
