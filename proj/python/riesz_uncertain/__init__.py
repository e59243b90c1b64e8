"""Riesz-type summability diagnostics for sequences of uncertain variables."""

from ._core import (
    InputError,
    OrliczSpec,
    UncertaintySpace,
    WeightSequence,
    classify,
    classify_scenario,
    inverse_riesz_transform,
    is_regular,
    markov_check,
    riesz_transform,
    run_cli,
    tauberian_profile,
)

__all__ = [
    "InputError",
    "OrliczSpec",
    "UncertaintySpace",
    "WeightSequence",
    "classify",
    "classify_scenario",
    "inverse_riesz_transform",
    "is_regular",
    "markov_check",
    "riesz_transform",
    "run_cli",
    "tauberian_profile",
]
