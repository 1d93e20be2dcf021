"""Gaussian-series solution of X'(t) + a t X(t) = b X(t - tau).

For a > 0 and tau != 0 the solution is

    X(t) = c * sum_n  r^n / n!  exp(-a (t - n tau)^2 / 2),   r = b / (a tau),

a train of Gaussians centred at t = n tau. Peak heights r^n/n! reach
about e^|r| before decaying, and alternate in sign when r < 0, so every
term is carried as (sign, log|term|) and the sum is rescaled by its
largest term before a compensated accumulation.

Compensation removes summation error but not the rounding already in each
term. When r < 0 is large the terms can exceed the sum by many orders of
magnitude, so each column also gets an a-posteriori error estimate, and
columns that miss ``EXTENDED_RTOL`` are recomputed in extended precision.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .core import DdeParams, DerivedParams, EvalGrid, SolutionTrace, require_series_regime
from .errors import DegenerateParams, SeriesOverflow
from .specfn import log_factorial, log_factorials

log = logging.getLogger(__name__)

_LOG_DBL_MAX = math.log(np.finfo(float).max)
_LOG_DBL_TINY = math.log(np.finfo(float).tiny)
_EPS = np.finfo(float).eps
_CHUNK = 4096

EXTENDED_RTOL = 1e-12  # estimated relative error that triggers the extended-precision path
MAX_DPS = 4000


@dataclass(frozen=True)
class LogTerm:
    sign: int
    log_mag: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign}")
        if (self.sign == 0) != (self.log_mag == -math.inf):
            raise ValueError("sign is 0 exactly when log_mag is -inf")

    @property
    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_mag)


@dataclass(frozen=True)
class TruncationPolicy:
    """How many Gaussians to keep.

    ``fixed`` always sums n = 0..n_max. ``adaptive`` stops once the peak
    height |r|^n/n! has fallen below ``epsilon`` times the largest one,
    capped at ``n_max``.
    """

    mode: str = "adaptive"
    n_max: int = 500
    epsilon: float = 1e-15

    def __post_init__(self):
        if self.mode not in ("fixed", "adaptive"):
            raise ValueError(f"truncation mode must be 'fixed' or 'adaptive', got {self.mode!r}")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValueError(f"n_max must be a positive integer, got {self.n_max}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")

    @classmethod
    def fixed(cls, n_max: int = 500) -> "TruncationPolicy":
        return cls("fixed", n_max)

    @classmethod
    def adaptive(cls, epsilon: float = 1e-15, n_max: int = 500) -> "TruncationPolicy":
        return cls("adaptive", n_max, epsilon)


DEFAULT_POLICY = TruncationPolicy()


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


def series_term(p: DdeParams, n: int, t: float) -> LogTerm:
    """The n-th Gaussian X_n(t) = c r^n/n! exp(-a (t - n tau)^2 / 2)."""
    require_series_regime(p)
    if int(n) != n or n < 0:
        raise ValueError(f"term index must be a nonnegative integer, got {n}")
    n = int(n)
    r = p.r
    sign = _sign(p.c) * (_sign(r) ** n)
    if sign == 0:
        return LogTerm(0, -math.inf)
    log_r = math.log(abs(r)) if n else 0.0
    d = t - n * p.tau
    log_mag = math.log(abs(p.c)) + n * log_r - log_factorial(n) - 0.5 * p.a * d * d
    return LogTerm(sign, log_mag)


def _peak_heights(r: float, n_max: int):
    """Signs and ln|r^n/n!| for n = 0..n_max (c excluded)."""
    n = np.arange(n_max + 1)
    logs = -log_factorials(n_max)
    if r == 0.0:
        signs = np.zeros(n_max + 1)
        signs[0] = 1.0
        logs[1:] = -np.inf
        return signs, logs
    logs += n * math.log(abs(r))
    signs = np.where((r < 0) & (n % 2 == 1), -1.0, 1.0)
    return signs, logs


def truncation_for_ratio(r: float, pol: TruncationPolicy = DEFAULT_POLICY) -> int:
    if pol.mode == "fixed":
        return int(pol.n_max)
    if r == 0.0:
        return 0
    abs_r = abs(r)
    log_r = math.log(abs_r)
    # peak heights grow while n < |r| and decay afterwards
    peak = int(math.floor(abs_r))
    if peak >= pol.n_max:
        log.warning("adaptive truncation capped at n_max=%d for |r|=%g", pol.n_max, abs_r)
        return int(pol.n_max)
    threshold = math.log(pol.epsilon) + peak * log_r - log_factorial(peak)
    n = peak
    while n < pol.n_max:
        if (n + 1) * log_r - log_factorial(n + 1) < threshold:
            return n
        n += 1
    log.warning("adaptive truncation capped at n_max=%d for |r|=%g", pol.n_max, abs_r)
    return int(pol.n_max)


def choose_truncation(p: DdeParams, pol: TruncationPolicy = DEFAULT_POLICY) -> int:
    """Number of the last retained term N (terms 0..N are summed)."""
    require_series_regime(p)
    return truncation_for_ratio(p.r, pol)


def _compensated_rows(rows):
    """Column sums of an iterable of equal-length rows (Neumaier)."""
    total = None
    for row in rows:
        if total is None:
            total = row.astype(float, copy=True)
            comp = np.zeros_like(total)
            continue
        nxt = total + row
        comp += np.where(np.abs(total) >= np.abs(row), (total - nxt) + row, (row - nxt) + total)
        total = nxt
    return total + comp


def _rescale(scaled_sum, log_scale):
    out = np.zeros_like(scaled_sum)
    nonzero = scaled_sum != 0.0
    with np.errstate(divide="ignore"):
        log_abs = np.log(np.abs(scaled_sum)) + log_scale
    if np.any(log_abs[nonzero] > _LOG_DBL_MAX):
        raise SeriesOverflow(
            f"series value exceeds double range (log|X| = {np.max(log_abs[nonzero]):.1f})"
        )
    small = nonzero & (log_scale < 700.0)
    out[small] = scaled_sum[small] * np.exp(log_scale[small])
    big = nonzero & ~small
    out[big] = np.sign(scaled_sum[big]) * np.exp(log_abs[big])
    return out


def _column_sums(signs, logs, extra=None, magnitudes=None):
    """Rescaled compensated column sums of signs * exp(logs) (* extra).

    Returns (scaled total, log scale, needs_extended). The error estimate
    charges every term eps * (4 + |magnitude of its log components|), i.e.
    the rounding carried into exp, and flags columns whose estimated
    relative error exceeds EXTENDED_RTOL while the sum is still above the
    underflow threshold.
    """
    scale = logs.max(axis=0)
    mags = np.exp(logs - scale)
    if extra is not None:
        mags = mags * np.abs(extra)
        weights = signs[:, None] * np.exp(logs - scale) * extra
    else:
        weights = signs[:, None] * mags
    total = _compensated_rows(weights)
    if magnitudes is None:
        magnitudes = np.abs(logs)
    err = _EPS * np.sum(mags * (4.0 + magnitudes), axis=0)
    with np.errstate(divide="ignore"):
        visible = np.log(np.maximum(err, np.abs(total))) + scale > _LOG_DBL_TINY
    return total, scale, visible & (err > EXTENDED_RTOL * np.abs(total))


def _mp_recurrence_sum(setup, n_last, rtol=EXTENDED_RTOL):
    """c * sum_n w_n T_n with T_0 = exp(lead_log), T_n = T_{n-1} (r/n) q alpha^(n-1/2).

    Both the Gaussian series and the generating function are of this form.
    ``setup()`` returns (c, lead_log, r, log_alpha, log_q, weight) built at
    the working precision; ``weight`` is None or a callable n -> w_n.
    Precision starts at 30 digits and grows until the sum is resolved to
    ``rtol`` despite cancellation. Returns an mpf.
    """
    import mpmath

    dps = 30
    while True:
        with mpmath.workdps(dps):
            c, lead_log, r, log_alpha, log_q, weight = setup()
            alpha = mpmath.exp(log_alpha)
            step = mpmath.exp(log_q) / mpmath.sqrt(alpha)
            term = mpmath.exp(lead_log)
            total = term * weight(0) if weight else term
            mass = abs(total)
            for n in range(1, n_last + 1):
                step *= alpha
                term *= r / n * step
                w = term * weight(n) if weight else term
                total += w
                mass += abs(w)
            if mass == 0:
                return mpmath.mpf(0)
            lost = int(mpmath.log10(mass / abs(total))) + 1 if total != 0 else dps
            if lost + 6 - math.log10(rtol) < dps:
                return c * total
            if dps >= MAX_DPS:
                log.warning("extended-precision sum unresolved at %d digits", dps)
                return c * total
            dps = min(MAX_DPS, max(2 * dps, lost + 30))


def _mp_to_float(value):
    import mpmath

    if value == 0:
        return 0.0
    if mpmath.log(abs(value)) > _LOG_DBL_MAX:
        raise SeriesOverflow(f"series value exceeds double range (log|X| = {float(mpmath.log(abs(value))):.1f})")
    return float(value)


def _extended_series_point(p: DdeParams, t: float, n_last: int, derivative: bool) -> float:
    import mpmath

    def setup():
        a, b, tau, tt = (mpmath.mpf(v) for v in (p.a, p.b, p.tau, t))
        weight = (lambda n: -a * (tt - n * tau)) if derivative else None
        return mpmath.mpf(p.c), -a * tt * tt / 2, b / (a * tau), -a * tau * tau, a * tau * tt, weight

    return _mp_to_float(_mp_recurrence_sum(setup, n_last))


def _sum_gaussians(p: DdeParams, t: np.ndarray, n_last: int, derivative: bool) -> np.ndarray:
    signs, heights = _peak_heights(p.r, n_last)
    keep = np.isfinite(heights)
    signs, heights = signs[keep], heights[keep]
    centres = np.arange(n_last + 1)[keep] * p.tau
    log_c = math.log(abs(p.c))
    out = np.empty_like(t)
    for lo in range(0, t.size, _CHUNK):
        tc = t[lo : lo + _CHUNK]
        offset = tc[None, :] - centres[:, None]
        gauss = 0.5 * p.a * offset * offset
        logs = log_c + heights[:, None] - gauss
        extra = -p.a * offset if derivative else None
        magnitudes = abs(log_c) + np.abs(heights)[:, None] + gauss
        total, scale, redo = _column_sums(signs, logs, extra, magnitudes)
        block = math.copysign(1.0, p.c) * _rescale(total, scale)
        for i in np.flatnonzero(redo):
            block[i] = _extended_series_point(p, float(tc[i]), n_last, derivative)
        out[lo : lo + _CHUNK] = block
    return out


def _evaluate(p, t, pol, derivative):
    require_series_regime(p)
    t_arr = np.asarray(t, dtype=float)
    if p.c == 0.0:
        result = np.zeros_like(t_arr)
    else:
        n_last = choose_truncation(p, pol)
        result = _sum_gaussians(p, np.atleast_1d(t_arr).ravel(), n_last, derivative)
        result = result.reshape(t_arr.shape)
    return float(result) if np.ndim(t) == 0 else result


def eval_series(p: DdeParams, t, pol: TruncationPolicy = DEFAULT_POLICY):
    """X(t) for scalar or array ``t``."""
    return _evaluate(p, t, pol, derivative=False)


def eval_series_derivative(p: DdeParams, t, pol: TruncationPolicy = DEFAULT_POLICY):
    """X'(t) from the termwise derivative X_n'(t) = -a (t - n tau) X_n(t)."""
    return _evaluate(p, t, pol, derivative=True)


def series_trace(p: DdeParams, grid: EvalGrid, pol: TruncationPolicy = DEFAULT_POLICY) -> SolutionTrace:
    values = eval_series(p, grid.nodes(), pol)
    meta = {"truncation": pol.mode, "n_last": choose_truncation(p, pol), "epsilon": pol.epsilon}
    return SolutionTrace(grid, values, "series", meta)


def f_coefficient(d: DerivedParams, n: int) -> LogTerm:
    """Taylor coefficient gamma_n = r^n alpha^(n^2/2) / n! of the generating function f."""
    if int(n) != n or n < 0:
        raise ValueError(f"coefficient index must be a nonnegative integer, got {n}")
    n = int(n)
    sign = _sign(d.r) ** n
    if sign == 0:
        return LogTerm(0, -math.inf)
    log_r = math.log(abs(d.r)) if n else 0.0
    return LogTerm(sign, n * log_r + n * n * d.log_sqrt_alpha - log_factorial(n))


def _f_setup(d: DerivedParams, x: float):
    import mpmath

    def setup():
        return 1, 0, mpmath.mpf(d.r), mpmath.mpf(d.log_alpha), mpmath.log(mpmath.mpf(x)), None

    return setup


def eval_f(d: DerivedParams, x, pol: TruncationPolicy = DEFAULT_POLICY, c: float = 1.0):
    """Generating function f(x) = c sum_n gamma_n x^n, x >= 0.

    Satisfies f'(x) = beta f(alpha x) and X(t) = exp(-a t^2/2) f(exp(a tau t)).
    """
    if not (d.log_alpha < 0.0 and math.isfinite(d.r)):
        raise DegenerateParams("generating function needs a > 0 and tau != 0")
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0):
        raise ValueError("eval_f is defined here for x >= 0")
    flat = np.atleast_1d(x_arr).ravel()
    out = np.zeros_like(flat)
    if c != 0.0:
        n_last = truncation_for_ratio(d.r, pol)
        signs, heights = _peak_heights(d.r, n_last)
        n = np.arange(n_last + 1)
        coeff = heights + n * n * d.log_sqrt_alpha
        positive = flat > 0
        out[~positive] = 1.0
        if np.any(positive):
            x_pos = flat[positive]
            log_x = np.log(x_pos)
            keep = np.isfinite(coeff)
            logs = coeff[keep][:, None] + n[keep][:, None] * log_x[None, :]
            magnitudes = np.abs(coeff[keep])[:, None] + np.abs(n[keep][:, None] * log_x[None, :])
            total, scale, redo = _column_sums(signs[keep], logs, magnitudes=magnitudes)
            vals = _rescale(total, scale)
            for i in np.flatnonzero(redo):
                vals[i] = _mp_to_float(_mp_recurrence_sum(_f_setup(d, float(x_pos[i])), n_last))
            out[positive] = vals
        out *= c
    out = out.reshape(x_arr.shape)
    return float(out) if np.ndim(x) == 0 else out


def closed_form_no_delay(p: DdeParams, t):
    """tau = 0 solution: a Gaussian c exp(-a t^2/2 + b t) centred at t = b/a."""
    if p.tau != 0.0:
        raise DegenerateParams("closed form applies only to tau = 0")
    if not p.a > 0.0:
        raise DegenerateParams("closed form evaluated here for a > 0 only")
    t_arr = np.asarray(t, dtype=float)
    with np.errstate(over="raise"):
        try:
            out = p.c * np.exp(-0.5 * p.a * t_arr * t_arr + p.b * t_arr)
        except FloatingPointError as exc:
            raise SeriesOverflow("closed-form Gaussian exceeds double range") from exc
    return float(out) if np.ndim(t) == 0 else out
