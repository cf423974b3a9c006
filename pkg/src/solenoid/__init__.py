"""Exact classification tools for solenoids and linear flows on them."""

from fractions import Fraction

from .exactnum import (
    IntMatrix,
    RationalMatrix,
    SnfDecomposition,
    covering_degree,
    rat_inverse,
    rat_kernel_rank,
    snf,
)
from .supernatural import (
    INF,
    OrderVerdict,
    PrimeSequenceSpec,
    Relation,
    SupernaturalNumber,
    cardinality,
    compare,
    derived_sequence,
    diagonal_bijection,
    diagonal_inverse,
    divides,
    proper_arrangement,
    to_supernatural,
)
from .multipliers import (
    MultiplierVerdict,
    ScalarMorphism,
    compose,
    continuity_probe,
    is_iso_multiplier,
    is_proper_multiplier,
)
from .products import (
    AutGroupForm2D,
    AutVerdict,
    ProductSolenoid,
    aut_group_form_2d,
    bonding_matrices,
    is_automorphism,
    product_isometry_check,
)
from .flows import (
    EquivalenceVerdict,
    FrequencyVector,
    SymbolicBasis,
    decide_equivalence_2d,
    is_irrational,
    rank,
    transform_frequency,
    verify_equivalence,
)
from .trajectories import DensityReport, TruncatedPoint, density_search, evaluate_pi, metric
from .duality import (
    DualPresentation,
    GroupPresentation,
    check_relatively_prime,
    dual_presentation,
    membership_roundtrip,
)

Rational = Fraction

__version__ = "0.1.0"
