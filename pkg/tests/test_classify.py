import math

import pytest

from gaussdde import DdeParams
from gaussdde.classify import (
    Status,
    characteristic_residual,
    characteristic_roots,
    fourier_transformable,
    stability_verdict,
)
from gaussdde.errors import DegenerateParams, InvalidDelay


@pytest.mark.parametrize(
    "a, b, tau, status",
    [
        (0.2, 100, 7, Status.GLOBALLY_ASYMPTOTICALLY_STABLE),
        (0, -0.5, 2, Status.GLOBALLY_ASYMPTOTICALLY_STABLE),
        (0, 0.1, 2, Status.UNSTABLE),
        (0, -1.0, 2, Status.UNSTABLE),
        (-0.1, -1, 2, Status.UNSTABLE),
        (0, -1, 0, Status.GLOBALLY_ASYMPTOTICALLY_STABLE),
        (0, 0, 0, Status.UNSTABLE),
        (0, 0, 2, Status.UNSTABLE),
        (0, -0.1, -2, Status.UNSTABLE),
    ],
)
def test_verdict_table(a, b, tau, status):
    assert stability_verdict(DdeParams(a, b, tau)).status is status


def test_verdict_fields():
    v = stability_verdict(DdeParams(0, -0.5, 2))
    assert v.boundary == pytest.approx(-math.pi / 4)
    assert v.dominant_root.real < 0
    assert v.stable is True
    v = stability_verdict(DdeParams(0.15, 6, 3))
    assert v.boundary is None and v.dominant_root is None
    assert stability_verdict(DdeParams(0, -1, 0)).boundary is None
    trivial = stability_verdict(DdeParams(0.15, 6, 3, c=0.0))
    assert trivial.status is Status.TRIVIAL_ONLY and trivial.stable is None
    d = v.to_dict()
    assert d["regime"] == "series" and d["status"] == "globally_asymptotically_stable"


def test_roots_examples():
    lam = characteristic_roots(-math.pi / 2, 1.0, (0, 0))[0].value
    assert abs(lam - 1j * math.pi / 2) < 1e-12
    assert characteristic_roots(1.0, 1.0, (0, 0))[0].value == pytest.approx(0.5671432904097838, abs=1e-15)
    assert characteristic_roots(-0.5, 2.0)[0].value.real < 0
    with pytest.raises(InvalidDelay):
        characteristic_roots(1.0, 0.0)
    with pytest.raises(DegenerateParams):
        characteristic_roots(0.0, 1.0)


@pytest.mark.parametrize("bt", [-5, -2, -math.pi / 2, -1, -0.3, 0.2, 1, 5])
@pytest.mark.parametrize("tau", [0.5, 2.0])
def test_roots_residual_and_order(bt, tau):
    b = bt / tau
    roots = characteristic_roots(b, tau, (-20, 20))
    assert all(characteristic_residual(b, tau, r.value) <= 1e-10 * max(1, abs(b)) for r in roots)
    re = [r.value.real for r in roots]
    assert re == sorted(re, reverse=True)
    principal = [r for r in roots if r.k == 0][0]
    assert principal.value.real >= max(re) - 1e-12


def test_boundary_consistency(rng):
    checked = 0
    while checked < 100:
        tau = rng.uniform(0.2, 5)
        b = rng.uniform(-3, 1) / tau
        if min(abs(b + math.pi / (2 * tau)), abs(b)) < 1e-6:
            continue
        top = characteristic_roots(b, tau, (-20, 20))[0].value.real
        verdict = stability_verdict(DdeParams(0.0, b, tau))
        assert verdict.stable == (top < 0)
        checked += 1


@pytest.mark.parametrize(
    "a, tau, expected",
    [(0.15, 3, (True, "gaussian_decay")), (0, 3, (False, "lambert_modes")), (-1, 3, (False, "divergence")), (0, 0, (False, "exponential"))],
)
def test_fourier(a, tau, expected):
    assert tuple(fourier_transformable(DdeParams(a, 1.0, tau))) == expected
