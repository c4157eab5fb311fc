# Copyright 2026 The costlab Authors.
# SPDX-License-Identifier: Apache-2.0
"""Static cost analysis of neural networks for microcontrollers."""

from ._core import (
    CoverageError,
    DegenerateFitError,
    Error,
    EstimateError,
    Model,
    ParseError,
    Profile,
    ValidationError,
    builtin_profiles,
    count_model,
    estimate,
    fit_check,
    fit_line,
    fixtures,
    footprint,
    generate,
    lint_model,
    load_model,
    pareto_front,
    parse_model,
    resolve_profile,
    speedup,
)

__version__ = "0.1.0"

__all__ = [
    "CoverageError",
    "DegenerateFitError",
    "Error",
    "EstimateError",
    "Model",
    "ParseError",
    "Profile",
    "ValidationError",
    "builtin_profiles",
    "count_model",
    "estimate",
    "fit_check",
    "fit_line",
    "fixtures",
    "footprint",
    "generate",
    "lint_model",
    "load_model",
    "pareto_front",
    "parse_model",
    "resolve_profile",
    "speedup",
]
