"""Special functions: multi-branch Lambert W, reciprocal gamma, log-factorial.

Pure-Python implementations with no numerical dependencies beyond
:mod:`math` and :mod:`cmath`.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import BranchPointSingularity, NoConvergence

MAX_BRANCH = 64
MAX_ITER = 100
W_RESIDUAL_TOL = 1e-12

_INV_E = math.exp(-1.0)
_TWO_PI = 2.0 * math.pi


def _w_residual(w, z):
    return abs(w * cmath.exp(w) - z)


def _branch_point_guess(z, sheet):
    # expansion of W about -1/e in p = sqrt(2(e z + 1)); sheet=+1 for the
    # branch meeting -1/e as -1 + p, sheet=-1 for -1 - p
    p = sheet * cmath.sqrt(2.0 * (math.e * z + 1.0))
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p


def _asymptotic_guess(z, k):
    l1 = cmath.log(z) + _TWO_PI * k * 1j
    l2 = cmath.log(l1)
    return l1 - l2 + l2 / l1


def _initial_guess(z, k):
    near_branch_point = abs(z + _INV_E) < 0.3
    if k == 0:
        if near_branch_point:
            return _branch_point_guess(z, +1)
        if abs(z) < _INV_E:
            return z * (1.0 + z * (-1.0 + z * (1.5 + z * (-8.0 / 3.0))))
        # wedge around the origin, clear of the cut, where log(1+z) starts well
        if abs(z) < 3.0 and z.real > -2.5 * abs(z.imag) - 0.2:
            return cmath.log(1.0 + z)
        return _asymptotic_guess(z, k)
    # W_{-1} meets the branch point from the upper half plane (real axis
    # included), W_{1} from the lower half plane
    if near_branch_point and ((k == -1 and z.imag >= 0.0) or (k == 1 and z.imag < 0.0)):
        return _branch_point_guess(z, -1)
    return _asymptotic_guess(z, k)


def lambert_w(k: int, z: complex) -> complex:
    """Branch ``k`` of the Lambert W function, i.e. a root of ``w*exp(w) = z``.

    Branches follow the usual convention: ``k=0`` is principal, branch cuts
    lie along the negative real axis and values on the cuts are taken from
    above. The iterate is accepted once ``|w e^w - z| <= 1e-12 max(1, |z|)``
    and is then polished by one more Halley step.
    """
    k = int(k)
    if abs(k) > MAX_BRANCH:
        raise ValueError(f"branch index |k| <= {MAX_BRANCH} required, got {k}")
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"lambert_w needs a finite argument, got {z}")
    # signed zero would flip the side of the cut picked by cmath.log/sqrt
    z = complex(z.real + 0.0, z.imag + 0.0)
    if z == 0:
        if k == 0:
            return 0j
        raise ValueError(f"W_{k}(0) is -infinity")

    tol = W_RESIDUAL_TOL * max(1.0, abs(z))
    w = _initial_guess(z, k)
    for _ in range(MAX_ITER):
        ew = cmath.exp(w)
        f = w * ew - z
        if abs(f) <= tol:
            return _halley_polish(w, z, tol)
        wp1 = w + 1.0
        if wp1 == 0:
            # sitting exactly on the branch point: nudge off the double root
            w += 1e-8
            continue
        w = w - f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        if not (math.isfinite(w.real) and math.isfinite(w.imag)):
            break
    if abs(z + _INV_E) <= 1e-12 and abs(k) >= 2:
        raise BranchPointSingularity(f"W_{k} stalled at the branch point z={z}")
    raise NoConvergence(f"W_{k}({z}) did not converge in {MAX_ITER} iterations")


def _halley_polish(w, z, tol):
    ew = cmath.exp(w)
    f = w * ew - z
    wp1 = w + 1.0
    if wp1 == 0:
        return w
    denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
    if denom == 0:
        return w
    polished = w - f / denom
    if _w_residual(polished, z) <= max(abs(f), tol):
        return polished
    return w


# Lanczos approximation, g = 7, n = 9; relative error ~2e-15 on [1, 2]
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _gamma_reduced(x):
    """Gamma(x) for x in [1, 2)."""
    z = x - 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _SQRT_2PI * t ** (z + 0.5) * math.exp(-t) * acc


def reciprocal_gamma(x: float) -> float:
    """1/Gamma(x), evaluated as an entire function.

    The argument is shifted into [1, 2) with the functional recurrence, so
    the result is exactly zero at the poles x = 0, -1, -2, ... and never
    passes through an infinity. Raises OverflowError when the true value is
    beyond double range (x below about -171).
    """
    x = float(x)
    if math.isnan(x):
        return math.nan
    if x == math.inf:
        return 0.0
    if x <= 0.0 and x == math.floor(x):
        return 0.0
    if x == math.floor(x) and x <= 171.0:
        # exact factorial, correctly rounded by int/int true division
        return 1 / math.factorial(int(x) - 1)
    if x < -200.0:
        raise OverflowError(f"1/Gamma({x}) exceeds double range")

    y = x
    scale = 1.0
    # shift up: 1/Gamma(y) = y (y+1) ... (y+m-1) / Gamma(y+m)
    while y < 1.0:
        scale *= y
        y += 1.0
    # shift down: 1/Gamma(y) = 1/Gamma(y-1) / (y-1)
    while y >= 2.0:
        y -= 1.0
        scale /= y
        if scale == 0.0:
            return 0.0
    result = scale / _gamma_reduced(y)
    if math.isinf(result):
        raise OverflowError(f"1/Gamma({x}) exceeds double range")
    return result


def reciprocal_gamma_array(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    flat_in, flat_out = x.ravel(), out.ravel()
    for i, xi in enumerate(flat_in):
        flat_out[i] = reciprocal_gamma(xi)
    return out


_LOG_FACTORIAL_TABLE = tuple(math.log(math.factorial(n)) for n in range(21))
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _stirling_log_factorial(n):
    x = np.asarray(n, dtype=float)
    inv = 1.0 / x
    inv2 = inv * inv
    correction = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
    return x * np.log(x) - x + 0.5 * np.log(x) + _HALF_LOG_2PI + correction


def log_factorial(n: int) -> float:
    """ln(n!) -- exact table for n <= 20, Stirling series above."""
    if int(n) != n or n < 0:
        raise ValueError(f"log_factorial needs a nonnegative integer, got {n}")
    n = int(n)
    if n <= 20:
        return _LOG_FACTORIAL_TABLE[n]
    return float(_stirling_log_factorial(n))


def log_factorials(n_max: int) -> np.ndarray:
    """Array of ln(n!) for n = 0..n_max."""
    out = np.empty(n_max + 1)
    head = min(n_max, 20) + 1
    out[:head] = _LOG_FACTORIAL_TABLE[:head]
    if n_max > 20:
        out[21:] = _stirling_log_factorial(np.arange(21, n_max + 1))
    return out
