import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gaussdde import DdeParams, EvalGrid, Regime, SolutionTrace, classify_regime, derive_params
from gaussdde.errors import DegenerateParams

finite = st.floats(-50, 50, allow_nan=False)


@pytest.mark.parametrize(
    "a, b, tau, regime",
    [
        (0.15, 6, 3, Regime.SERIES),
        (0.15, 6, -3, Regime.SERIES),
        (0, -1, 0, Regime.PURE_EXPONENTIAL),
        (-0.1, 1, 2, Regime.DIVERGENT),
        (0, 1, 2, Regime.HAYES),
        (1, 2, 0, Regime.NO_DELAY),
        (-1, 2, 0, Regime.NO_DELAY),
    ],
)
def test_classify_examples(a, b, tau, regime):
    assert classify_regime(DdeParams(a, b, tau)) is regime


@given(finite, finite, finite)
def test_classification_is_total(a, b, tau):
    assert isinstance(classify_regime(DdeParams(a, b, tau)), Regime)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_nonfinite_rejected(bad):
    with pytest.raises(DegenerateParams):
        DdeParams(bad, 1.0, 1.0)
    with pytest.raises(DegenerateParams):
        DdeParams(1.0, 1.0, 1.0, bad)


def test_derive_examples():
    d = derive_params(DdeParams(0.15, 6, 3))
    assert d.r == pytest.approx(6 / 0.45, rel=1e-15)
    d = derive_params(DdeParams(1, 0, 1))
    assert d.r == 0 and d.beta == 0
    assert d.alpha == pytest.approx(math.exp(-1), rel=1e-15)
    assert derive_params(DdeParams(0.15, -6, 8)).r == pytest.approx(-5.0, rel=1e-15)


@pytest.mark.parametrize("a, tau", [(0.0, 1.0), (1.0, 0.0)])
def test_derive_degenerate(a, tau):
    with pytest.raises(DegenerateParams):
        derive_params(DdeParams(a, 1.0, tau))


@given(st.floats(0.01, 2), st.floats(-10, 10), st.floats(0.1, 5).flatmap(lambda v: st.sampled_from([v, -v])))
def test_derived_invariants(a, b, tau):
    d = derive_params(DdeParams(a, b, tau))
    assert 0 < d.alpha < 1
    assert d.beta**2 == pytest.approx(d.r**2 * d.alpha, rel=1e-14, abs=1e-300)


def test_grid_and_trace():
    g = EvalGrid(-1.0, 1.0, 5)
    assert np.allclose(np.diff(g.nodes()), g.step)
    tr = SolutionTrace(g, np.zeros(5), "series")
    with pytest.raises(ValueError):
        tr.values[0] = 1.0
    with pytest.raises(ValueError):
        SolutionTrace(g, np.zeros(4), "series")
    with pytest.raises(ValueError):
        SolutionTrace(g, np.array([0, 0, np.nan, 0, 0]), "series")
    for bad in [(1.0, 1.0, 3), (0.0, 1.0, 1)]:
        with pytest.raises(ValueError):
            EvalGrid(*bad)
