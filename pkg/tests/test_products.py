from fractions import Fraction as F

import pytest

from solenoid.errors import MissingSpecs, NotProperlyArranged, SizeMismatch
from solenoid.exactnum import IntMatrix
from solenoid.products import (
    FormCase,
    ProductSolenoid,
    aut_group_form_2d,
    bonding_matrices,
    is_automorphism,
    product_distances,
    product_isometry_check,
)
from solenoid.supernatural import INF, PrimeSequenceSpec, SupernaturalNumber

DYADIC = SupernaturalNumber({2: INF})
D23 = SupernaturalNumber({2: INF, 3: INF})
TORUS = SupernaturalNumber()
ODD = SupernaturalNumber(classes=[(1, 2, 1)])
EVEN = SupernaturalNumber(classes=[(0, 2, 1)])


def test_bonding_matrices():
    assert bonding_matrices(ProductSolenoid.from_specs([PrimeSequenceSpec.repeat(2)]), 2) == [
        IntMatrix([[2]]),
        IntMatrix([[2]]),
    ]
    two = ProductSolenoid.from_specs([PrimeSequenceSpec.repeat(2), PrimeSequenceSpec()])
    assert bonding_matrices(two, 1) == [IntMatrix([[2, 0], [0, 1]])]
    raw = ProductSolenoid.from_specs([PrimeSequenceSpec((6, 1, -90))])
    assert [m[0, 0] for m in bonding_matrices(raw, 3)] == [6, 1, -90]
    with pytest.raises(MissingSpecs):
        bonding_matrices(ProductSolenoid((DYADIC,)), 1)


def test_automorphism_examples():
    PP = ProductSolenoid.arrange([DYADIC, DYADIC])
    assert is_automorphism([[0, 1], [1, 0]], PP)
    assert is_automorphism([[F(1, 2), 0], [0, 1]], PP)
    v = is_automorphism([[F(1, 2), 0], [0, 1]], ProductSolenoid.arrange([TORUS, TORUS]))
    assert not v and v.failing_entry[:3] == (1, 1, "A")
    v = is_automorphism([[2, 0], [0, 1]], ProductSolenoid.arrange([TORUS, TORUS]))
    assert not v and v.failing_entry[2] == "A_inv"
    assert is_automorphism([[1, 1], [1, 1]], PP).singular


def test_automorphism_preconditions():
    with pytest.raises(NotProperlyArranged):
        is_automorphism([[1]], ProductSolenoid.from_specs([PrimeSequenceSpec.repeat(2)]))
    with pytest.raises(SizeMismatch):
        is_automorphism([[1]], ProductSolenoid.arrange([DYADIC, DYADIC]))


def test_triangular_shape_for_strictly_greater():
    P = ProductSolenoid.arrange([D23, DYADIC])
    assert is_automorphism([[1, 0], [F(1, 3), 1]], P)
    assert not is_automorphism([[1, F(1, 3)], [0, 1]], P)
    assert not is_automorphism([[1, 1], [0, 1]], P)


def test_group_forms():
    f = aut_group_form_2d(DYADIC, DYADIC)
    assert f.case is FormCase.EQUAL and f.shape == "full"
    f = aut_group_form_2d(D23, DYADIC)
    assert f.case is FormCase.STRICTLY_GREATER and f.shape == "lower-triangular"
    assert aut_group_form_2d(DYADIC, D23).shape == "upper-triangular"
    f = aut_group_form_2d(ODD, EVEN)
    assert f.case is FormCase.INCOMPARABLE and f.shape == "diagonal"
    for P in (TORUS, DYADIC, ODD, D23):
        assert aut_group_form_2d(P, P).case is FormCase.EQUAL


def test_isometry():
    assert product_isometry_check(ProductSolenoid.arrange([DYADIC, SupernaturalNumber({3: INF})]), 10)
    single = ProductSolenoid.arrange([DYADIC])
    assert product_isometry_check(single, 8)
    from solenoid.trajectories import TruncatedPoint

    x = TruncatedPoint(((F(1, 4),), (F(1, 8),)))
    assert product_distances(single, x, x) == (0, 0)
