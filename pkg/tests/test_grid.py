import json
import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from haarlab.dyadic import expectation_operator, indicator, lp_norm
from haarlab.grid import GridFunction
from haarlab.haar import haar_atom
from haarlab.splines import bspline, hat

N2 = bspline(2).f

grid_values = st.lists(st.floats(-4, 4, allow_nan=False), min_size=1, max_size=24)


def test_hat_samples_are_exact():
    g = GridFunction.from_exact(N2, 3)
    assert g.integrate() == pytest.approx(1.0, abs=1e-15)
    assert g.inner(g) == pytest.approx(2 / 3, abs=1e-15)
    assert g.inner(haar_atom(0, 0)) == pytest.approx(float(N2.inner(haar_atom(0, 0))), abs=1e-15)


def test_constant_mode_matches_step_function():
    f = indicator(F(1, 4), F(3, 4), 3)
    g = GridFunction.from_exact(f, 3, mode="constant")
    assert g.lp_norm(1) == pytest.approx(1.5)
    assert g.lp_norm(math.inf) == 3
    assert g.inner(haar_atom(1, 0)) == pytest.approx(float(f.inner(haar_atom(1, 0))))


def test_rejects_nonfinite_and_bad_mode():
    with pytest.raises(ValueError):
        GridFunction(2, 0, [1.0, np.nan])
    with pytest.raises(ValueError):
        GridFunction(2, 0, [1.0], mode="cubic")


@given(grid_values, st.integers(-5, 5))
def test_refine_is_exact(vals, off):
    g = GridFunction(3, off, vals)
    r = g.refine(2)
    x = np.linspace(-2, 2, 97)
    assert np.allclose(g(x), r(x), atol=1e-12)
    assert r.integrate() == pytest.approx(g.integrate(), abs=1e-12)


@given(grid_values, st.integers(-5, 5))
def test_reflect(vals, off):
    g = GridFunction(3, off, vals)
    x = np.linspace(-2, 2, 41)
    assert np.allclose(g.reflect()(x), g(-x))


@given(grid_values, st.sampled_from([1, 2, 3, 4]))
def test_second_difference_matches_pointwise(vals, k):
    g = GridFunction(3, 0, vals)
    d = F(k, 8)
    s = g.second_difference(d)
    x = np.linspace(-1.5, 3.5, 81)
    dd = float(d)
    assert np.allclose(s(x), g(x + 2 * dd) - 2 * g(x + dd) + g(x), atol=1e-12)


def test_second_difference_of_sampled_hat_agrees_with_exact():
    f = hat(1, 1)
    g = GridFunction.from_exact(f, 4)
    for d in (F(1, 16), F(1, 4), F(3, 8)):
        for p in (1, 2, math.inf):
            assert g.second_difference(d).lp_norm(p) == pytest.approx(
                lp_norm(f.second_difference(d), p), rel=1e-12)


def test_lp_norm_general_p_with_error():
    g = GridFunction.from_exact(N2, 6)
    val, err = g.lp_norm(1.5, with_error=True)
    assert val == pytest.approx((2 / 2.5) ** (1 / 1.5), rel=1e-6)
    assert err < 1e-6


def test_expectation_matches_exact():
    g = GridFunction.from_exact(N2, 4)
    e = g.expectation(1)
    want = expectation_operator(N2, 1)
    x = np.linspace(-0.5, 2.5, 25)
    assert np.allclose(e(x), want.evaluate(x))


def test_complex_values_and_json():
    g = GridFunction(4, -3, np.array([1 + 1j, 2 - 0.5j, 0.25j]))
    assert g.is_complex
    h = GridFunction.from_json(json.loads(json.dumps(g.to_json())))
    assert h.level == g.level and h.offset == g.offset
    assert np.array_equal(h.values, g.values)
    assert g.lp_norm(2) ** 2 == pytest.approx(g.inner(g).real)


def test_linear_restriction_is_refused():
    g = GridFunction.from_exact(N2, 3)
    with pytest.raises(NotImplementedError):
        g.lp_norm(1, domain=(0, 1))
