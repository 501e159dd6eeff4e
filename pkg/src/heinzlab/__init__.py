"""Numerical verification of Heinz-type matrix inequalities."""

__version__ = "0.1.0"

from .checks import CHECK_IDS, InequalityCase, Witness, evaluate, explain_check  # noqa: E402
from .linalg import (  # noqa: E402
    fractional_power,
    hermitian_eig,
    is_psd,
    loewner_leq,
    singular_values,
)
from .norms import NormKind, fan_dominance_leq, norm  # noqa: E402

__all__ = [
    "CHECK_IDS",
    "InequalityCase",
    "NormKind",
    "Witness",
    "evaluate",
    "explain_check",
    "fan_dominance_leq",
    "fractional_power",
    "hermitian_eig",
    "is_psd",
    "loewner_leq",
    "norm",
    "singular_values",
]
