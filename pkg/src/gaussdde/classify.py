"""Stability verdicts, characteristic roots for a = 0, Fourier transformability.

The verdict is read off the case table (a > 0 stable, a < 0 unstable,
a = 0 stable iff -pi/(2 tau) < b < 0). Characteristic roots are computed
independently so the two can be cross-checked.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

from .core import DdeParams, Regime, classify_regime
from .errors import DegenerateParams, InvalidDelay
from .specfn import lambert_w

DOMINANT_SEARCH = 5


class Status(enum.Enum):
    GLOBALLY_ASYMPTOTICALLY_STABLE = "globally_asymptotically_stable"
    UNSTABLE = "unstable"
    TRIVIAL_ONLY = "trivial_only"


@dataclass(frozen=True)
class StabilityVerdict:
    regime: Regime
    status: Status
    boundary: float | None = None
    dominant_root: complex | None = None

    @property
    def stable(self) -> bool | None:
        if self.status is Status.TRIVIAL_ONLY:
            return None
        return self.status is Status.GLOBALLY_ASYMPTOTICALLY_STABLE

    def to_dict(self) -> dict:
        root = self.dominant_root
        return {
            "regime": self.regime.value,
            "status": self.status.value,
            "stable": self.stable,
            "boundary": self.boundary,
            "dominant_root": None if root is None else {"re": root.real, "im": root.imag},
        }


class CharacteristicRoot(NamedTuple):
    k: int
    value: complex


class Transformability(NamedTuple):
    transformable: bool
    reason: str


def _roots(b, tau, ks):
    z = b * tau
    return [CharacteristicRoot(k, lambert_w(k, z) / tau) for k in ks]


def _ordered(roots):
    # descending real part; conjugate pairs keep the lower |k| first
    return sorted(roots, key=lambda root: (-root.value.real, abs(root.k), root.k))


def characteristic_roots(b: float, tau: float, k_range=(-10, 10)) -> list[CharacteristicRoot]:
    """Roots lambda_k = W_k(b tau) / tau of lambda = b exp(-lambda tau), k in the closed range."""
    if not tau > 0:
        raise InvalidDelay(f"characteristic roots need tau > 0, got {tau}")
    if b == 0:
        raise DegenerateParams("b = 0 leaves only the trivial root lambda = 0")
    k_lo, k_hi = k_range
    return _ordered(_roots(b, tau, range(int(k_lo), int(k_hi) + 1)))


def characteristic_residual(b: float, tau: float, lam: complex) -> float:
    return abs(lam - b * cmath.exp(-lam * tau))


def _dominant_root(b, tau):
    if b == 0:
        return 0j
    return _ordered(_roots(b, tau, range(-DOMINANT_SEARCH, DOMINANT_SEARCH + 1)))[0].value


def stability_verdict(p: DdeParams) -> StabilityVerdict:
    regime = classify_regime(p)
    boundary = -math.pi / (2.0 * p.tau) if (p.a == 0.0 and p.tau > 0.0) else None
    root = _dominant_root(p.b, p.tau) if regime is Regime.HAYES else None

    if p.a > 0.0:
        stable = True
    elif p.a < 0.0:
        stable = False
    elif p.tau == 0.0:
        stable = p.b < 0.0
    elif p.tau > 0.0:
        stable = boundary < p.b < 0.0
    else:
        # advance equation: the window -pi/(2 tau) < b < 0 is empty for tau < 0
        stable = False

    if p.c == 0.0:
        status = Status.TRIVIAL_ONLY
    elif stable:
        status = Status.GLOBALLY_ASYMPTOTICALLY_STABLE
    else:
        status = Status.UNSTABLE
    return StabilityVerdict(regime, status, boundary, root)


def fourier_transformable(p: DdeParams) -> Transformability:
    if p.a > 0.0:
        return Transformability(True, "gaussian_decay")
    if p.a < 0.0:
        return Transformability(False, "divergence")
    if p.tau != 0.0:
        return Transformability(False, "lambert_modes")
    return Transformability(False, "exponential")
