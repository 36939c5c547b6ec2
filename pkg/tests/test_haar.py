import json
from fractions import Fraction as F

import numpy as np
import pytest
from conftest import coeff_entries, step_functions
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from haarlab.coeffs import CoeffArray
from haarlab.dyadic import ExactPiecewise, indicator, polynomial_piece
from haarlab.experiments import frame_dominates, gram_box
from haarlab.families import staircase
from haarlab.grid import GridFunction
from haarlab.haar import (HaarIndex, analyze, analyze_shifted, frame_coeffs, haar_atom,
                          shifted_haar_atom, synthesize)
from haarlab.splines import bspline, hat

N2 = bspline(2).f


def _quad_haar(fn, a, b, j, shift):
    # <fn 1_[a,b), h(2^j x - shift)> by adaptive quadrature on each half of the atom
    h = 2.0 ** -(j + 1)
    left = shift * 2.0 ** -j
    pos = quad(fn, max(a, left), min(b, left + h))[0] if left < b and left + h > a else 0.0
    neg = quad(fn, max(a, left + h), min(b, left + 2 * h))[0] if left + h < b and left + 2 * h > a else 0.0
    return pos - neg


def test_atoms():
    h = haar_atom(2, 1)
    assert h.support == (F(1, 4), F(1, 2))
    assert h(F(5, 16)) == 1 and h(F(7, 16)) == -1
    assert haar_atom(-1, 3) == indicator(3, 4)
    assert shifted_haar_atom(1, 3) == haar_atom(1, 1, parity=1)
    assert shifted_haar_atom(1, 3).support == (F(3, 4), F(5, 4))
    assert HaarIndex(2, 3, 1).nu == 7
    with pytest.raises(ValueError):
        HaarIndex(-1, 0, 1)
    with pytest.raises(ValueError):
        HaarIndex(-2, 0)


def test_analyze_examples():
    c = analyze(haar_atom(3, 5), 4)
    assert c[3, 5] == F(1, 8)
    assert c.nnz() == 1
    f2 = staircase(2)
    c = analyze(f2, 4)
    assert c[0, 0] == 1 and c[1, 0] == F(1, 2)


def test_analyze_shifted_examples():
    assert analyze_shifted(indicator(0, 1), 2)[0, 0] == F(1, 2)
    x_on_02 = polynomial_piece([0, 1], 0, 2)
    assert analyze_shifted(x_on_02, 2)[0, 0] == F(-1, 4)


def test_shifted_against_quadrature():
    # x^2 on [0, 3/2]
    f = polynomial_piece([0, 0, 1], 0, F(3, 2))
    c = analyze_shifted(f, 3)
    for j in range(4):
        for mu in range(-1, 3 << j):
            want = _quad_haar(lambda x: x * x, 0.0, 1.5, j, mu + 0.5)
            assert float(c[j, mu]) == pytest.approx(want, abs=1e-13)


def test_frame_coefficient_of_hat_is_a_quarter():
    # independent oracle by quadrature of the two atom pairings
    hatfn = lambda x: x if x < 1 else 2 - x  # noqa: E731
    want = abs(_quad_haar(hatfn, 0, 2, 0, 0)) + abs(_quad_haar(hatfn, 0, 2, 0, 0.5))
    assert want == pytest.approx(0.25, abs=1e-14)
    assert frame_coeffs(N2, 3)[0, 0] == F(1, 4)


def test_frame_of_indicator():
    fc = frame_coeffs(indicator(0, 4), 3)
    assert [fc[-1, m] for m in range(-1, 5)] == [0, 1, 1, 1, 1, 0]
    # interior atoms see a constant; only the shifted atom over the right edge is non-zero
    for j in range(4):
        for mu in range(0, 4 << j):
            want = F(1, 2) if mu == (4 << j) - 1 else 0
            assert fc[j, mu] == want


@given(step_functions())
def test_fast_equals_direct(f):
    assert analyze(f, 5) == analyze(f, 5, method="direct")
    assert analyze_shifted(f, 5) == analyze_shifted(f, 5, method="direct")


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=5), st.integers(0, 3))
def test_fast_equals_direct_on_hats(ws, j):
    f = ExactPiecewise()
    for i, w in enumerate(ws):
        f = f + hat(j, i) * w
    assert analyze(f, 5) == analyze(f, 5, method="direct")
    assert analyze_shifted(f, 4) == analyze_shifted(f, 4, method="direct")


@given(step_functions(max_level=4))
def test_synthesis_round_trip(f):
    # step functions at level L are reproduced exactly by levels -1..L-1
    assert synthesize(analyze(f, 3).scaled_by_2j()) == f


@given(coeff_entries())
def test_analysis_inverts_synthesis(entries):
    beta = CoeffArray.from_dict(entries)
    f = synthesize(beta)
    back = analyze(f, max(j for j, _ in entries)).scaled_by_2j()
    assert back == beta


@given(step_functions())
def test_frame_dominates_haar(f):
    assert frame_dominates(f, 5)


@given(step_functions(), st.integers(-4, 4))
def test_frame_shift_covariance(f, k):
    a, b = frame_coeffs(f, 4), frame_coeffs(f.shift(k), 4)
    for j, mu, v in a.items():
        assert b[j, mu + (k << max(j, 0))] == v
    assert a.nnz() == b.nnz()


def test_gram_diagonal_and_orthogonality():
    idx, G = gram_box(4)
    for r, (j, _) in enumerate(idx):
        for c in range(len(idx)):
            want = (F(1, 1 << j) if j >= 0 else 1) if r == c else 0
            assert G[r][c] == want


def test_grid_agrees_with_exact():
    f = hat(1, 1) * 3 - N2.shift(F(1, 8))
    g = GridFunction.from_exact(f, 10)
    for fn in (analyze, analyze_shifted, frame_coeffs):
        ex_, gr = fn(f, 6), fn(g, 6)
        for j, mu, v in ex_.items(nonzero=False):
            assert gr[j, mu] == pytest.approx(float(v), abs=1e-14)


def test_grid_too_coarse():
    with pytest.raises(ValueError):
        analyze(GridFunction.from_exact(N2, 3), 3)


def test_complex_grid_is_linear():
    g1 = GridFunction.from_exact(N2, 6)
    g2 = GridFunction.from_exact(hat(2, 1), 6)
    gz = GridFunction(6, g1.offset, g1.values + 0j)
    a = analyze(gz + g2 * 1j, 4)
    b1, b2 = analyze(g1, 4), analyze(g2, 4)
    for j, mu, v in a.items(nonzero=False):
        assert v == pytest.approx(b1[j, mu] + 1j * b2[j, mu], abs=1e-14)


def test_csv_and_json_round_trip():
    c = frame_coeffs(N2, 4)
    assert CoeffArray.from_csv(c.to_csv()) == c
    d = CoeffArray.from_json(json.loads(c.dumps()))
    assert d == c and d.scaled and d.parity == "frame"
    g = analyze(GridFunction.from_exact(N2, 8), 4)
    back = CoeffArray.from_json(json.loads(g.dumps()))
    for j, mu, v in g.items():
        assert back[j, mu] == pytest.approx(v, rel=1e-15)


def test_coefficients_are_exact_fractions():
    c = analyze(bspline(4).f, 5)
    assert c.exact
    assert all(isinstance(v, F) for _, _, v in c.items())
    assert np.isclose(float(c[-1, 1]), quad(lambda x: float(bspline(4).f(F(x))), 1, 2)[0])
