import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from haarlab import _kernels
from haarlab._kernels import _pykernels as py
from haarlab.grid import G6_NODES, G6_WEIGHTS

try:
    from haarlab._kernels import _ckernels as cy
except ImportError:  # pragma: no cover
    cy = None

needs_cy = pytest.mark.skipif(cy is None, reason="compiled kernels not built")
floats = arrays(np.float64, st.integers(1, 64), elements=st.floats(-1e3, 1e3))
exps = st.sampled_from([0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, np.inf])


def _both(name, *args):
    return getattr(py, name)(*args), getattr(cy, name)(*args)


@needs_cy
@given(floats, st.booleans())
def test_linear_cell_integrals(v, cplx):
    if cplx:
        v = v + 1j * v[::-1]
    a, b = _both("linear_cell_integrals", v, 0.125)
    assert np.allclose(a, b, rtol=1e-14, atol=1e-12)


@needs_cy
@given(st.integers(1, 8), st.booleans(), st.data())
def test_pyramid(m, cplx, data):
    v = data.draw(arrays(np.float64, 1 << (m + 1), elements=st.floats(-10, 10)))
    if cplx:
        v = v + 0.5j * v
    a, b = _both("haar_pyramid", v, m)
    for (s1, e1, o1), (s2, e2, o2) in zip(a, b):
        assert np.allclose(s1, s2)
        if e1 is not None:
            assert np.allclose(e1, e2) and np.allclose(o1, o2)


@needs_cy
@given(floats, st.integers(1, 5))
def test_second_difference(v, k):
    a, b = _both("second_difference", v, k)
    assert np.array_equal(a, b)


@needs_cy
@given(floats, exps, st.booleans())
def test_lp_powers(v, p, cplx):
    if cplx:
        v = v - 2j * v
    nodes, weights = np.asarray(G6_NODES, float), np.asarray(G6_WEIGHTS, float)
    a, b = _both("lp_power_linear", v, 0.25, p, nodes, weights)
    assert b == pytest.approx(a, rel=1e-12, abs=1e-300)
    a, b = _both("lp_power_constant", v, 0.25, p)
    assert b == pytest.approx(a, rel=1e-12, abs=1e-300)


@needs_cy
@given(st.sampled_from([0.5, 1.0, 2.0, 3.0, np.inf]), st.floats(-1, 1))
def test_tl_integrand(q, s):
    rng = np.random.default_rng(0)
    blocks = [(j, 0, np.abs(rng.standard_normal(1 << max(j, 0)))) for j in range(-1, 6)]
    a, b = _both("tl_integrand", blocks, 6, 0, 64, s, q)
    assert np.allclose(a, b, rtol=1e-13)


def test_selected_backend():
    assert _kernels.BACKEND in ("cython", "python")
    if cy is not None:
        assert _kernels.BACKEND == "cython"


def test_pure_python_switch():
    env = dict(os.environ, HAARLAB_PURE_PYTHON="1")
    code = ("import haarlab; from haarlab.families import staircase; from haarlab.norms import dyadic_besov_norm;"
            "print(haarlab.BACKEND, dyadic_besov_norm(staircase(5), {'s': 1, 'p': 1, 'q': 'inf'}, 6).value)")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "1.0"]
