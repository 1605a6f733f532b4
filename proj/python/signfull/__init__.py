"""Sign-quantized random projections with full-precision queries."""

from ._core import (
    ConfigError,
    ContractError,
    DegenerateInputError,
    DomainError,
    Error,
    FormatError,
    FullSketch,
    ShapeError,
    SignSketch,
    cosine,
    estimate,
    estimate_signs,
    estimators,
    fisher_vm,
    mle_sign_full,
    project,
    sample_pair,
    simulate,
    variance_factor,
)

__all__ = [
    "ConfigError",
    "ContractError",
    "DegenerateInputError",
    "DomainError",
    "Error",
    "FormatError",
    "FullSketch",
    "ShapeError",
    "SignSketch",
    "cosine",
    "estimate",
    "estimate_signs",
    "estimators",
    "fisher_vm",
    "mle_sign_full",
    "project",
    "sample_pair",
    "simulate",
    "variance_factor",
]
