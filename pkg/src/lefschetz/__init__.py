"""Exact rational verification of Lefschetz-type operator identities on
graded Frobenius algebra models of cohomology rings."""

from .frobenius import (
    GradedOperator,
    PoincareModel,
    cup_with,
    kunneth_product,
    lefschetz_operator,
    pairing_adjoint,
    projective_space,
    validate_model,
    with_xi,
)
from .bootstrap import BootstrapPipeline, bootstrap_reports
from .chern import chern_suite, chi_delta
from .core import LefschetzContext, Sl2Decomposition
from .leray import LerayStructure
from .models import blowup_model, builtin_pencils
from .rational_linalg import Matrix, Q, Subspace
from .report import VerificationReport

__all__ = [
    "BootstrapPipeline",
    "GradedOperator",
    "LefschetzContext",
    "LerayStructure",
    "Matrix",
    "PoincareModel",
    "Q",
    "Sl2Decomposition",
    "Subspace",
    "VerificationReport",
    "blowup_model",
    "bootstrap_reports",
    "builtin_pencils",
    "chern_suite",
    "chi_delta",
    "cup_with",
    "kunneth_product",
    "lefschetz_operator",
    "pairing_adjoint",
    "projective_space",
    "validate_model",
    "with_xi",
]
