"""Selmer groups of y^2 = x(x^2 + a x + b) under Heegner quadratic twists."""

from .arith import (
    INF,
    LocalClassRep,
    PrimeFactorization,
    SquareClass,
    factor,
    hilbert,
    legendre,
    localize,
    sqrt_hensel,
    square_class,
)
from .curves import (
    IsogenyCurve,
    SignCase,
    isogenous_curve,
    new_curve,
    quadratic_twist,
    sign_case,
)
from .f2 import F2Matrix
from .local import (
    LocalSubgroup,
    TorsorProblem,
    TwistContext,
    kummer_image_fast,
    kummer_image_oracle,
    torsor_solvable,
)
from .selmer import (
    SelmerStructure,
    SelmerSubspace,
    compute_selmer,
    eval_epsilon,
    eval_gamma,
    eval_lambda,
    exact_structure,
    intersect_with_functionals,
    relaxed_structure,
    restricted_matrix,
    selmer_via_master,
)
from .twists import (
    DeltaReport,
    TdPartition,
    TwistMatrices,
    build_matrices,
    delta_formulae,
    enumerate_Q,
    eta_phi,
    f2_rank,
    generate_D,
    partition_Td,
)

__version__ = "1.0.0"

__all__ = [
    "INF",
    "DeltaReport",
    "F2Matrix",
    "IsogenyCurve",
    "LocalClassRep",
    "LocalSubgroup",
    "PrimeFactorization",
    "SelmerStructure",
    "SelmerSubspace",
    "SignCase",
    "SquareClass",
    "TdPartition",
    "TorsorProblem",
    "TwistContext",
    "TwistMatrices",
    "build_matrices",
    "compute_selmer",
    "delta_formulae",
    "enumerate_Q",
    "eta_phi",
    "eval_epsilon",
    "eval_gamma",
    "eval_lambda",
    "exact_structure",
    "f2_rank",
    "factor",
    "generate_D",
    "hilbert",
    "intersect_with_functionals",
    "isogenous_curve",
    "kummer_image_fast",
    "kummer_image_oracle",
    "legendre",
    "localize",
    "new_curve",
    "partition_Td",
    "quadratic_twist",
    "relaxed_structure",
    "restricted_matrix",
    "selmer_via_master",
    "sign_case",
    "sqrt_hensel",
    "square_class",
    "torsor_solvable",
]
