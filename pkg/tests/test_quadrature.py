import math

import numpy as np
import pytest

from gaussdde import DdeParams
from gaussdde.errors import DegenerateParams, ToleranceNotMet
from gaussdde.quadrature import QuadratureSpec, eval_integral, integrand, omega_max, plan_quadrature, raw_integral
from gaussdde.series import eval_series
from conftest import fig_params


def test_integrand_examples():
    p = fig_params(6, 3)
    r = 6 / 0.45
    assert integrand(p, 0.0, 17.0) == pytest.approx(math.exp(r), rel=1e-14)
    expected = math.exp(-1 / 0.3 + r * math.cos(3)) * math.cos(r * math.sin(3))
    assert integrand(p, 1.0, 0.0) == pytest.approx(expected, rel=1e-13)
    q = DdeParams(0.7, 0.0, 2.0)
    w, t = 1.3, 2.1
    assert integrand(q, w, t) == pytest.approx(math.exp(-w * w / 1.4) * math.cos(w * t), rel=1e-14)
    with pytest.raises(DegenerateParams):
        integrand(DdeParams(0.0, 1.0, 1.0), 1.0, 0.0)


def test_omega_max_examples():
    assert omega_max(DdeParams(1, 0, 1), 1e-12) == pytest.approx(math.sqrt(2 * (math.log(1e12) + 10)), rel=1e-14)
    assert omega_max(fig_params(6, 3), 1e-12) == pytest.approx(math.sqrt(0.3 * (6 / 0.45 + math.log(1e12) + 10)), rel=1e-14)
    assert math.isfinite(omega_max(fig_params(6, 3), 1.0))


def test_tail_bound():
    p = fig_params(6, 3)
    tol = 1e-10
    w = omega_max(p, tol)
    tail = np.linspace(w, 3 * w, 500)
    assert np.all(np.abs(integrand(p, tail, 0.0)) <= tol * math.exp(-10) * (1 + 1e-12))


def test_plan_minimum_panels():
    plan = plan_quadrature(DdeParams(1, 0, 1), 0.0)
    assert plan.panels >= 8 and plan.omega_max > 0


@pytest.mark.parametrize("t", [-5.0, 0.0, 0.7, 4.0])
def test_gaussian_pair(t):
    p = DdeParams(0.4, 0.0, 2.0)
    assert eval_integral(p, t) == pytest.approx(math.exp(-0.2 * t * t), abs=1e-8)


def test_series_examples():
    p = fig_params(6, 3)
    assert eval_integral(p, 0.0) == pytest.approx(eval_series(p, 0.0), rel=1e-8)
    p = fig_params(-6, 8)
    scale = np.max(np.abs(eval_series(p, np.linspace(-10, 80, 2000))))
    assert abs(eval_integral(p, 16.0) - eval_series(p, 16.0)) <= 1e-8 * scale


def test_mirror_evenness():
    p, q = fig_params(6, 5), fig_params(-6, -5)
    t = np.linspace(-10, 40, 51)
    spec = QuadratureSpec(1e-8)
    assert np.max(np.abs(eval_integral(p, t, spec) - eval_integral(q, -t, spec))) <= 2 * spec.tol


def test_panel_doubling_consistency():
    p = fig_params(-6, 6)
    value, change, _ = raw_integral(p, np.linspace(-10, 48, 30))
    assert np.all(change <= 1e-8)
    assert np.all(np.isfinite(value))


def test_tolerance_not_met():
    with pytest.raises(ToleranceNotMet):
        eval_integral(fig_params(6, 3), 20.0, QuadratureSpec(tol=1e-8, panels=8))
