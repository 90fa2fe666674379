"""Orthogonality regularizers and diagnostics for weight matrices."""

from ._core import (
    OrthoReport,
    RegOutput,
    lambda_at,
    mutual_coherence,
    power_iter_sigma,
    regularize,
    report,
    rip_constant,
    singular_values,
    weight_decay_at,
)

__all__ = [
    "OrthoReport",
    "RegOutput",
    "lambda_at",
    "mutual_coherence",
    "power_iter_sigma",
    "regularize",
    "report",
    "rip_constant",
    "singular_values",
    "weight_decay_at",
]
