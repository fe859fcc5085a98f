"""Trace-form Schur multipliers, their factorization search and finite-window dilations."""

from ._schurdil import (
    Algebra,
    ConvergenceError,
    Dilation,
    DimensionError,
    Error,
    IoError,
    Representation,
    ValidationError,
    cp_check,
    norm_bounds,
    omega_representation,
    pairing_closed_form,
    planted_representation,
    schur_apply,
    search,
)

__all__ = [
    "Algebra",
    "ConvergenceError",
    "Dilation",
    "DimensionError",
    "Error",
    "IoError",
    "Representation",
    "ValidationError",
    "cp_check",
    "norm_bounds",
    "omega_representation",
    "pairing_closed_form",
    "planted_representation",
    "schur_apply",
    "search",
]
