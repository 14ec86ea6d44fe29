"""Anisotropic-norm, rearrangement and Hardy-estimate verification toolkit."""

from .norms import (
    NormSpec,
    euclidean,
    power,
    scaled_axes,
    sampled_support,
    eval_norm,
    eval_polar,
    grad_norm,
    wulff_volume,
    linear_bounds,
    duality_residuals,
)

__all__ = [
    "NormSpec",
    "euclidean",
    "power",
    "scaled_axes",
    "sampled_support",
    "eval_norm",
    "eval_polar",
    "grad_norm",
    "wulff_volume",
    "linear_bounds",
    "duality_residuals",
]

__version__ = "0.1.0"
