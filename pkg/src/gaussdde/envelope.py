"""Enclosing curve G(t), continuous envelope E(t), and the peak estimate.

G(t) is the signed value of whichever Gaussian X_n dominates at t; E(t)
interpolates the peak heights X_n(n tau) = c r^n / n! through
n -> t/tau with the reciprocal gamma function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DdeParams, DerivedParams, EvalGrid, SolutionTrace, derive_params, require_series_regime
from .errors import DegenerateParams, SeriesOverflow
from .series import DEFAULT_POLICY, TruncationPolicy, _peak_heights, choose_truncation, eval_series
from .specfn import reciprocal_gamma

_LOG_DBL_MAX = math.log(np.finfo(float).max)
AMBIGUITY_RATIO = 0.99


@dataclass(frozen=True)
class PeakIndex:
    indices: tuple
    peak_log_amp: float

    def __post_init__(self):
        if not 1 <= len(self.indices) <= 2:
            raise ValueError("a peak index holds one index, or two when tied")

    @property
    def first(self) -> int:
        return self.indices[0]


@dataclass(frozen=True)
class MaxEstimate:
    t_star: float
    amp: float
    peak: PeakIndex
    runner_up_ratio: float
    ambiguous: bool


def n_star(d: DerivedParams, cap: int = 500) -> PeakIndex:
    """Index maximising the peak heights |r|^n / n! over n in [0, cap].

    When |r| is a positive integer the heights at |r|-1 and |r| coincide
    and both are returned.
    """
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    abs_r = abs(d.r)
    _, logs = _peak_heights(abs_r, cap)
    best = int(np.argmax(logs))
    k = round(abs_r)
    # b/(a tau) picks up a few ulps of rounding; treat that as an exact tie
    if 1 <= k <= cap and abs(abs_r - k) <= 8 * np.finfo(float).eps * k:
        return PeakIndex((k - 1, k), float(max(logs[k - 1], logs[k])))
    return PeakIndex((best,), float(logs[best]))


def _log_gaussians(p, t, n_last):
    signs, heights = _peak_heights(p.r, n_last)
    centres = np.arange(n_last + 1) * p.tau
    offset = t[None, :] - centres[:, None]
    logs = math.log(abs(p.c)) + heights[:, None] - 0.5 * p.a * offset * offset
    return math.copysign(1.0, p.c) * signs, logs


def eval_G(p: DdeParams, t, pol: TruncationPolicy = DEFAULT_POLICY):
    """Signed value of the pointwise-dominant Gaussian (ties go to smaller n)."""
    require_series_regime(p)
    t_arr = np.atleast_1d(np.asarray(t, dtype=float)).ravel()
    if p.c == 0.0:
        out = np.zeros_like(t_arr)
    else:
        signs, logs = _log_gaussians(p, t_arr, choose_truncation(p, pol))
        winner = np.argmax(logs, axis=0)
        top = logs[winner, np.arange(t_arr.size)]
        if np.any(top > _LOG_DBL_MAX):
            raise SeriesOverflow("dominant Gaussian exceeds double range")
        out = signs[winner] * np.exp(top)
    return float(out[0]) if np.ndim(t) == 0 else out.reshape(np.shape(t))


def _envelope_magnitude(abs_r, x):
    if x > 150.0:
        # reciprocal gamma underflows before |r|^x overflows; go through logs
        return math.exp(x * math.log(abs_r) - math.lgamma(x + 1.0))
    return reciprocal_gamma(x + 1.0) * abs_r**x


def eval_E(p: DdeParams, t):
    """Envelope branches (plus, minus).

    For b/tau > 0 both equal c |r|^(t/tau) / Gamma(t/tau + 1); for b/tau < 0
    they are the +/- pair. Zero where t/tau + 1 hits a pole of Gamma.
    """
    require_series_regime(p)
    if p.b == 0.0:
        raise DegenerateParams("envelope undefined for b = 0 (single Gaussian)")
    abs_r = abs(p.r)
    t_arr = np.atleast_1d(np.asarray(t, dtype=float)).ravel()
    plus = np.array([p.c * _envelope_magnitude(abs_r, ti / p.tau) for ti in t_arr])
    minus = plus.copy() if p.r > 0 else -plus
    if np.ndim(t) == 0:
        return float(plus[0]), float(minus[0])
    return plus.reshape(np.shape(t)), minus.reshape(np.shape(t))


def max_estimate(p: DdeParams, pol: TruncationPolicy = DEFAULT_POLICY) -> MaxEstimate:
    """Peak location n* tau and the amplitude |X(n* tau)| there.

    Flagged ambiguous when the peak index is tied or the runner-up peak
    height is within 1% of the largest.
    """
    require_series_regime(p)
    d = derive_params(p)
    cap = max(choose_truncation(p, pol), 1)
    peak = n_star(d, cap)
    t_star = peak.first * p.tau
    amp = abs(eval_series(p, t_star, pol))
    _, logs = _peak_heights(abs(p.r), cap)
    others = np.delete(logs, peak.first)
    runner_up = float(np.exp(np.max(others) - logs[peak.first])) if others.size else 0.0
    ambiguous = len(peak.indices) == 2 or runner_up >= AMBIGUITY_RATIO
    return MaxEstimate(t_star, amp, peak, runner_up, ambiguous)


def envelope_traces(p: DdeParams, grid: EvalGrid, pol: TruncationPolicy = DEFAULT_POLICY):
    """G and E(+/-) traces on a grid; E is omitted when b = 0."""
    t = grid.nodes()
    traces = {"g_env": SolutionTrace(grid, eval_G(p, t, pol), "envelopeG")}
    if p.b != 0.0:
        plus, minus = eval_E(p, t)
        traces["e_env_plus"] = SolutionTrace(grid, plus, "envelopeE", {"branch": "+"})
        traces["e_env_minus"] = SolutionTrace(grid, minus, "envelopeE", {"branch": "-"})
    return traces
