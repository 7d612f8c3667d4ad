"""Orthogonal polynomials for the weight (1-x^2)^alpha exp(-t x^2) on [-1, 1].

Parameters may be given as floats or as decimal strings; strings keep every
digit (``"0.1"`` is exactly one tenth, ``0.1`` is its binary double).
"""

from ._core import (
    ConditioningError,
    DomainError,
    PrecisionError,
    SingularError,
    Table,
    compare_series,
    iterate_beta,
    log_dn0,
    log_dn_asymptotic,
    order_fit,
    riccati,
    series_coefficients,
    table,
    verify,
)

__all__ = [
    "ConditioningError",
    "DomainError",
    "PrecisionError",
    "SingularError",
    "Table",
    "compare_series",
    "iterate_beta",
    "log_dn0",
    "log_dn_asymptotic",
    "order_fit",
    "riccati",
    "series_coefficients",
    "table",
    "verify",
]
__version__ = "0.1.0"
