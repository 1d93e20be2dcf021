"""Parameter records, regime classification and the trace exchange format.

The equation under study is

    X'(t) + a t X(t) = b X(t - tau)

with an arbitrary amplitude constant ``c`` scaling the Gaussian-series
solution.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import DegenerateParams


@dataclass(frozen=True)
class DdeParams:
    a: float
    b: float
    tau: float
    c: float = 1.0

    def __post_init__(self):
        for name in ("a", "b", "tau", "c"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DegenerateParams(f"parameter {name}={value!r} is not finite")
            object.__setattr__(self, name, value)

    @property
    def r(self) -> float:
        """Peak-height ratio b/(a tau); only defined off the degenerate set."""
        return self.b / (self.a * self.tau)

    def mirrored(self) -> "DdeParams":
        """Parameters of the reflected problem (b, tau) -> (-b, -tau)."""
        return DdeParams(self.a, -self.b, -self.tau, self.c)


@dataclass(frozen=True)
class DerivedParams:
    r: float
    alpha: float
    beta: float
    # ln(alpha) = -a tau^2, kept separately because alpha underflows for long delays
    log_alpha: float

    @property
    def log_sqrt_alpha(self) -> float:
        return 0.5 * self.log_alpha


class Regime(enum.Enum):
    SERIES = "series"
    NO_DELAY = "no_delay"
    HAYES = "hayes"
    PURE_EXPONENTIAL = "pure_exponential"
    DIVERGENT = "divergent"


def classify_regime(p: DdeParams) -> Regime:
    """Map (a, tau) onto the solution regime.

    a = 0 with tau < 0 (an advance equation) is grouped with the Hayes regime
    since its modes are also W_k(b tau)/tau.
    """
    if p.tau == 0.0:
        return Regime.PURE_EXPONENTIAL if p.a == 0.0 else Regime.NO_DELAY
    if p.a > 0.0:
        return Regime.SERIES
    if p.a == 0.0:
        return Regime.HAYES
    return Regime.DIVERGENT


def derive_params(p: DdeParams) -> DerivedParams:
    if p.a == 0.0 or p.tau == 0.0:
        raise DegenerateParams("derived parameters need a != 0 and tau != 0")
    r = p.b / (p.a * p.tau)
    log_alpha = -p.a * p.tau * p.tau
    return DerivedParams(
        r=r,
        alpha=math.exp(log_alpha),
        beta=r * math.exp(0.5 * log_alpha),
        log_alpha=log_alpha,
    )


def require_series_regime(p: DdeParams) -> None:
    if not (p.a > 0.0 and p.tau != 0.0):
        raise DegenerateParams(
            f"Gaussian series needs a > 0 and tau != 0 (got a={p.a}, tau={p.tau}; "
            f"regime {classify_regime(p).value})"
        )


@dataclass(frozen=True)
class EvalGrid:
    t_min: float
    t_max: float
    count: int

    def __post_init__(self):
        if not (math.isfinite(self.t_min) and math.isfinite(self.t_max)):
            raise ValueError("grid bounds must be finite")
        if not self.t_min < self.t_max:
            raise ValueError(f"need t_min < t_max, got {self.t_min} >= {self.t_max}")
        if int(self.count) != self.count or self.count < 2:
            raise ValueError(f"grid count must be an integer >= 2, got {self.count}")
        object.__setattr__(self, "count", int(self.count))

    @property
    def step(self) -> float:
        return (self.t_max - self.t_min) / (self.count - 1)

    def nodes(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.count)


TRACE_METHODS = ("series", "integral", "steps", "envelopeG", "envelopeE")


@dataclass(frozen=True)
class SolutionTrace:
    grid: EvalGrid
    values: np.ndarray
    method: str
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.count,):
            raise ValueError(f"trace has {values.size} values for {self.grid.count} nodes")
        if not np.all(np.isfinite(values)):
            raise ValueError("trace values must be finite")
        if self.method not in TRACE_METHODS:
            raise ValueError(f"unknown trace method {self.method!r}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def times(self) -> np.ndarray:
        return self.grid.nodes()
