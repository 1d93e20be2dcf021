"""Method-of-steps integration of X'(t) = -a t X(t) + b X(t - tau).

Classical RK4 on a grid with h = tau/m, so every delayed read at a step
node lands exactly on a stored node; only the half-step stages need the
cubic Hermite dense output built from stored (t, X, X') triples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import DdeParams, EvalGrid, SolutionTrace
from .errors import DivergenceDetected, InvalidDelay, OutOfHistory

DIVERGENCE_GUARD = 1e300
MIN_STEPS_PER_DELAY = 10


@dataclass(frozen=True)
class InitialFunction:
    """Initial data phi on [-tau, 0].

    ``kind`` is ``"series"`` (seed from the Gaussian series), ``"constant"``
    or ``"table"`` (sampled values, interpolated by a cubic spline).
    """

    kind: str = "series"
    value: float = 0.0
    times: tuple = ()
    values: tuple = ()

    def __post_init__(self):
        if self.kind not in ("series", "constant", "table"):
            raise ValueError(f"unknown initial function kind {self.kind!r}")
        if self.kind == "table":
            times = np.asarray(self.times, dtype=float)
            if times.ndim != 1 or times.size < 2 or times.size != len(self.values):
                raise ValueError("table needs matching time/value columns with at least 2 rows")
            if np.any(np.diff(times) <= 0):
                raise ValueError("table times must be strictly increasing")
            if not (np.all(np.isfinite(times)) and np.all(np.isfinite(self.values))):
                raise ValueError("table entries must be finite")

    @classmethod
    def from_series(cls) -> "InitialFunction":
        return cls("series")

    @classmethod
    def constant(cls, value: float) -> "InitialFunction":
        return cls("constant", value=float(value))

    @classmethod
    def table(cls, times, values) -> "InitialFunction":
        return cls("table", times=tuple(map(float, times)), values=tuple(map(float, values)))

    @classmethod
    def from_file(cls, path) -> "InitialFunction":
        """Read a two-column (time, value) text table; '#' starts a comment, commas allowed."""
        text = Path(path).read_text().replace(",", " ")
        data = np.loadtxt(text.splitlines(), ndmin=2)
        if data.shape[1] != 2:
            raise ValueError(f"{path}: expected two columns, found {data.shape[1]}")
        return cls.table(data[:, 0], data[:, 1])

    def sample(self, p: DdeParams, t: np.ndarray):
        """Values and derivatives of phi at ``t``."""
        if self.kind == "constant":
            return np.full_like(t, self.value), np.zeros_like(t)
        if self.kind == "series":
            from .series import eval_series, eval_series_derivative

            return eval_series(p, t), eval_series_derivative(p, t)
        from scipy.interpolate import CubicSpline

        times = np.asarray(self.times)
        slack = 1e-12 * max(1.0, abs(p.tau))
        if times[0] > -p.tau + slack or times[-1] < -slack:
            raise ValueError(
                f"table spans [{times[0]}, {times[-1]}], must cover [-tau, 0] = [{-p.tau}, 0]"
            )
        spline = CubicSpline(times, np.asarray(self.values))
        return spline(t), spline(t, 1)


@dataclass(frozen=True)
class StepperConfig:
    h: float
    t_end: float
    interpolation: str = "cubic_hermite"

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError(f"step h must be positive, got {self.h}")
        if not self.t_end > 0:
            raise ValueError(f"t_end must be positive, got {self.t_end}")
        if self.interpolation != "cubic_hermite":
            raise ValueError("only cubic Hermite dense output is supported")


def _hermite(theta, h, y0, y1, d0, d1):
    t2 = theta * theta
    t3 = t2 * theta
    return (
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + theta) * h * d0
        + (3.0 * t2 - 2.0 * t3) * y1
        + (t3 - t2) * h * d1
    )


class History:
    """Uniform node record (t_j, X_j, X'_j), t_j = t0 + j h.

    Node ``origin`` is t = 0. Its derivative in ``dx`` is the right-hand one
    from the equation; ``origin_left_dx`` keeps phi'(0) for the last
    interval of the initial segment.
    """

    def __init__(self, t0, h, origin, x, dx, origin_left_dx):
        self.t0 = float(t0)
        self.h = float(h)
        self.origin = int(origin)
        self.x = np.asarray(x, dtype=float)
        self.dx = np.asarray(dx, dtype=float)
        self.origin_left_dx = float(origin_left_dx)

    @property
    def t_last(self) -> float:
        return self.time(len(self.x) - 1)

    def time(self, j):
        return (j - self.origin) * self.h

    def times(self) -> np.ndarray:
        return (np.arange(len(self.x)) - self.origin) * self.h

    def _right_dx(self, j):
        return self.origin_left_dx if j + 1 == self.origin else self.dx[j + 1]

    def sample(self, t: float) -> float:
        last = len(self.x) - 1
        u = t / self.h + self.origin
        slack = 1e-9
        if u < -slack:
            raise OutOfHistory(f"t={t} precedes the initial segment starting at {self.time(0)}")
        if u > last + slack:
            raise OutOfHistory(f"t={t} is beyond the integrated range ending at {self.t_last}")
        j = min(max(int(math.floor(u)), 0), last)
        theta = u - j
        if j == last or theta == 0.0:
            return float(self.x[j])
        return float(_hermite(theta, self.h, self.x[j], self.x[j + 1], self.dx[j], self._right_dx(j)))


def history_sample(history: History, t):
    """Dense-output value of the history at scalar or array ``t``."""
    if np.ndim(t) == 0:
        return history.sample(float(t))
    return np.array([history.sample(float(ti)) for ti in np.asarray(t, dtype=float).ravel()]).reshape(
        np.shape(t)
    )


def snapped_steps(tau: float, h: float) -> int:
    """Smallest m >= 10 with tau/m <= h."""
    return max(MIN_STEPS_PER_DELAY, math.ceil(tau / h - 1e-9))


def integrate_history(p: DdeParams, phi: InitialFunction, cfg: StepperConfig) -> History:
    if not p.tau > 0.0:
        raise InvalidDelay(f"method of steps needs tau > 0, got {p.tau}")
    m = snapped_steps(p.tau, cfg.h)
    h = p.tau / m
    n_steps = math.ceil(cfg.t_end / h - 1e-9)
    a, b = p.a, p.b

    seg_t = (np.arange(m + 1) - m) * h
    seg_x, seg_dx = phi.sample(p, seg_t)
    x = [0.0] * (m + n_steps + 1)
    dx = [0.0] * (m + n_steps + 1)
    x[: m + 1] = [float(v) for v in seg_x]
    dx[: m + 1] = [float(v) for v in seg_dx]
    left_dx0 = dx[m]
    dx[m] = b * x[0]  # a*t*X vanishes at t = 0

    half = 0.5 * h
    for i in range(m, m + n_steps):
        t = (i - m) * h
        xi = x[i]
        j = i - m
        lag0 = x[j]
        lag1 = x[j + 1]
        right = left_dx0 if j + 1 == m else dx[j + 1]
        lag_mid = 0.5 * (lag0 + lag1) + 0.125 * h * (dx[j] - right)
        tm = t + half
        k1 = dx[i]
        k2 = -a * tm * (xi + half * k1) + b * lag_mid
        k3 = -a * tm * (xi + half * k2) + b * lag_mid
        x4 = xi + h * k3
        k4 = -a * (t + h) * x4 + b * lag1
        xn = xi + h / 6.0 * (k1 + 2.0 * (k2 + k3) + k4)
        if not abs(xn) <= DIVERGENCE_GUARD:
            raise DivergenceDetected(
                f"|X| exceeded {DIVERGENCE_GUARD:g} at t={t + h:.6g}", escape_time=t + h
            )
        x[i + 1] = xn
        dx[i + 1] = -a * (t + h) * xn + b * lag1
    return History(-p.tau, h, m, x, dx, left_dx0)


def integrate_dde(p: DdeParams, phi: InitialFunction, cfg: StepperConfig) -> SolutionTrace:
    """RK4 trace of the delay equation on the node grid 0, h, ..., >= t_end."""
    hist = integrate_history(p, phi, cfg)
    values = hist.x[hist.origin :]
    grid = EvalGrid(0.0, hist.t_last, len(values))
    meta = {"h": hist.h, "steps_per_delay": hist.origin, "initial": phi.kind}
    return SolutionTrace(grid, values, "steps", meta)


def residual(p: DdeParams, x_of, t: float, dx_of=None) -> float:
    """X'(t) + a t X(t) - b X(t - tau) for an evaluation callable ``x_of``.

    Without ``dx_of`` the derivative is a central difference with step
    1e-6 max(1, |t|).
    """
    if dx_of is not None:
        deriv = dx_of(t)
    else:
        step = 1e-6 * max(1.0, abs(t))
        deriv = (x_of(t + step) - x_of(t - step)) / (2.0 * step)
    return deriv + p.a * t * x_of(t) - p.b * x_of(t - p.tau)
