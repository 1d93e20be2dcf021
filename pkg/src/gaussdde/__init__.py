"""Gaussian-series solution of the delay equation X'(t) + a t X(t) = b X(t - tau)."""

__version__ = "0.1.0"

from .classify import (
    CharacteristicRoot,
    Status,
    StabilityVerdict,
    characteristic_roots,
    fourier_transformable,
    stability_verdict,
)
from .core import DdeParams, DerivedParams, EvalGrid, Regime, SolutionTrace, classify_regime, derive_params
from .envelope import MaxEstimate, PeakIndex, eval_E, eval_G, max_estimate, n_star
from .errors import (
    BranchPointSingularity,
    DdeError,
    DegenerateParams,
    DivergenceDetected,
    InvalidDelay,
    NoConvergence,
    OutOfHistory,
    SeriesOverflow,
    ToleranceNotMet,
)
from .quadrature import QuadratureSpec, eval_integral
from .series import TruncationPolicy, choose_truncation, eval_f, eval_series, series_term
from .specfn import lambert_w, log_factorial, reciprocal_gamma
from .stepper import InitialFunction, StepperConfig, integrate_dde

__all__ = [
    "__version__",
    "CharacteristicRoot",
    "Status",
    "StabilityVerdict",
    "characteristic_roots",
    "fourier_transformable",
    "stability_verdict",
    "DdeParams",
    "DerivedParams",
    "EvalGrid",
    "Regime",
    "SolutionTrace",
    "classify_regime",
    "derive_params",
    "MaxEstimate",
    "PeakIndex",
    "eval_E",
    "eval_G",
    "max_estimate",
    "n_star",
    "BranchPointSingularity",
    "DdeError",
    "DegenerateParams",
    "DivergenceDetected",
    "InvalidDelay",
    "NoConvergence",
    "OutOfHistory",
    "SeriesOverflow",
    "ToleranceNotMet",
    "QuadratureSpec",
    "eval_integral",
    "TruncationPolicy",
    "choose_truncation",
    "eval_f",
    "eval_series",
    "series_term",
    "lambert_w",
    "log_factorial",
    "reciprocal_gamma",
    "InitialFunction",
    "StepperConfig",
    "integrate_dde",
]
