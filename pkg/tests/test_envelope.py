import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaussdde import DdeParams, EvalGrid, derive_params
from gaussdde.envelope import envelope_traces, eval_E, eval_G, max_estimate, n_star
from gaussdde.errors import DegenerateParams
from gaussdde.series import eval_series, series_term
from conftest import FIG_TAUS, fig_params


def _derived_for_ratio(r):
    return derive_params(DdeParams(1.0, r, 1.0))


@pytest.mark.parametrize("r, expected", [(0.5, (0,)), (1.0, (0, 1)), (-1.0, (0, 1)), (40 / 3, (13,)), (8.0, (7, 8))])
def test_n_star_examples(r, expected):
    assert n_star(_derived_for_ratio(r)).indices == expected


def test_n_star_integer_ratio_from_figure_params():
    # 6 / (0.15 * 5) is 8 up to rounding
    assert n_star(derive_params(fig_params(6, 5))).indices == (7, 8)


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-3, 100).filter(lambda r: abs(r - round(r)) > 1e-9))
def test_n_star_brute_force(r):
    logs = [n * math.log(r) - math.lgamma(n + 1) for n in range(501)]
    assert n_star(_derived_for_ratio(r)).indices == (int(np.argmax(logs)),)


def test_G_examples():
    p = DdeParams(0.15, 0.0, 3.0)
    t = np.linspace(-10, 10, 41)
    assert np.allclose(eval_G(p, t), np.exp(-0.075 * t * t), rtol=1e-15)
    # r = 6 / (0.15 * 20) = 2; the neighbours at t = 20 are damped by exp(-0.075 * 400)
    assert eval_G(fig_params(6, 20), 20.0) == pytest.approx(2.0, rel=1e-14)
    assert eval_G(fig_params(-6, 20), 20.0) == pytest.approx(-2.0, rel=1e-14)


@pytest.mark.parametrize("b", [6.0, -6.0])
def test_G_is_dominant_term(b):
    p = fig_params(b, 8)
    for t in np.linspace(-10, 80, 61):
        mags = [series_term(p, n, t) for n in range(40)]
        best = max(range(40), key=lambda n: (mags[n].log_mag, -n))
        total = sum(abs(m.value) for m in mags)
        g = eval_G(p, t)
        assert g == pytest.approx(mags[best].value, rel=1e-13)
        assert abs(g) <= total


def test_E_examples():
    p = fig_params(6, 3)
    assert eval_E(p, 0.0) == (1.0, 1.0)
    assert eval_E(fig_params(-6, 3), 0.0) == (1.0, -1.0)
    mpmath.mp.dps = 30
    ref = float(mpmath.rgamma(2.5) * (mpmath.mpf(6) / mpmath.mpf(0.45)) ** 1.5)
    assert eval_E(p, 4.5)[0] == pytest.approx(ref, rel=1e-13)
    assert eval_E(p, -3.0) == (0.0, 0.0)
    with pytest.raises(DegenerateParams):
        eval_E(DdeParams(0.15, 0.0, 3.0), 1.0)


@pytest.mark.parametrize("b", [6.0, -6.0])
@pytest.mark.parametrize("tau", FIG_TAUS)
def test_E_interpolates_peaks(b, tau):
    p = fig_params(b, tau)
    for n in range(31):
        peak = series_term(p, n, n * tau).value
        plus, minus = eval_E(p, n * tau)
        branch = plus if n % 2 == 0 or b > 0 else minus
        assert branch == pytest.approx(peak, rel=1e-12)


def test_E_large_argument_log_form():
    p = fig_params(6, 0.1)
    x = 400.0
    plus, _ = eval_E(p, x * 0.1)
    expected = math.exp(x * math.log(abs(p.r)) - math.lgamma(x + 1))
    assert plus == pytest.approx(expected, rel=1e-10)


def test_max_estimate_examples():
    est = max_estimate(DdeParams(0.15, 0.0, 3.0, c=2.0))
    assert (est.t_star, est.amp) == (0.0, 2.0)
    p = fig_params(6, 20)
    est = max_estimate(p)
    # r = 2 ties n = 1 and n = 2; the smaller index wins
    assert est.t_star == 20.0 and est.ambiguous
    t = np.arange(-20, 320.005, 0.01)
    grid_max = np.max(np.abs(eval_series(p, t)))
    assert est.amp == pytest.approx(grid_max, rel=0.05)


def test_max_estimate_unambiguous():
    est = max_estimate(fig_params(6, 3))
    assert est.peak.indices == (13,) and est.t_star == pytest.approx(39.0)
    assert not est.ambiguous


def test_max_estimate_flags_ties():
    est = max_estimate(fig_params(6, 5))
    assert est.ambiguous and est.peak.indices == (7, 8) and est.t_star == 35.0


def test_G_gap_shrinks_with_delay():
    for b in (6.0, -6.0):
        gaps = []
        for tau in FIG_TAUS:
            p = fig_params(b, tau)
            t = np.linspace(-10, max(60, 10 * tau), 4000)
            x = eval_series(p, t)
            gaps.append(np.max(np.abs(x - eval_G(p, t))) / np.max(np.abs(x)))
        assert all(u >= v for u, v in zip(gaps, gaps[1:])), gaps


def test_envelope_traces_columns():
    grid = EvalGrid(-10, 60, 50)
    assert set(envelope_traces(fig_params(-6, 3), grid)) == {"g_env", "e_env_plus", "e_env_minus"}
    assert set(envelope_traces(DdeParams(0.15, 0, 3), grid)) == {"g_env"}
