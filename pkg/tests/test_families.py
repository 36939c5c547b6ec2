import json
import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from haarlab.dyadic import ExactPiecewise, indicator, lp_norm
from haarlab.families import (CHIRP_PROFILE, COHERENT_PROFILE, BumpProfile, SignVector, _wave_haar,
                              chirp_eval, chirp_family, chirp_indices, chirp_interior_cells, chirp_windows,
                              coherent_sum, frequency_set, geometric_staircase, khintchine_prediction,
                              make_function, odd_extension, plateau_cells, plateau_level_terms,
                              rademacher_components, rademacher_family, smooth_glue, staircase,
                              taylor_prediction)
from haarlab.grid import GridFunction
from haarlab.haar import analyze, haar_atom
from haarlab.norms import dyadic_besov_norm


def test_staircase():
    assert staircase(1) == haar_atom(0, 0)
    for N in (1, 4, 9):
        f = staircase(N)
        assert f(F(1, 2 << N)) == N
        c = analyze(f, N + 2)
        nz = [(j, mu, v) for j, mu, v in c.items() if j >= 0]
        assert nz == [(j, 0, F(1, 1 << j)) for j in range(N)]
        for p in (1, 2):
            assert dyadic_besov_norm(f, {"s": 1 / p, "p": p, "q": "inf"}, N + 2).exact == 1
    with pytest.raises(ValueError):
        staircase(0)


@pytest.mark.parametrize("N", [0, 1, 5, 12])
def test_geometric_staircase(N):
    d = geometric_staircase(N)
    assert (d - geometric_staircase(N, "synthesis")).is_zero()
    assert lp_norm(d, 1) == 1
    if N == 0:
        assert d == indicator(0, 1)


def test_odd_extension():
    g = odd_extension(indicator(0, 1))
    assert g == indicator(0, 1) - indicator(-1, 0)
    f = staircase(4)
    g = odd_extension(f)
    xs = [F(k, 37) for k in range(-32, 32)]
    assert all(g(-x) == -g(x) for x in xs if x != 0 and f.breakpoints.count(abs(x)) == 0)
    for p in (1, 2):
        sp = {"s": 1 / p, "p": p, "q": 2}
        assert dyadic_besov_norm(g, sp, 7).value >= dyadic_besov_norm(f, sp, 7).value
    with pytest.raises(ValueError):
        odd_extension(indicator(-1, 1))
    gg = odd_extension(GridFunction.from_exact(indicator(0, 1), 4, "constant"))
    assert np.allclose(gg(np.array([-0.3, 0.3])), [-1, 1])


def test_bump_profile():
    u = CHIRP_PROFILE
    x = np.linspace(-0.5, 1.5, 2001)
    v = u(x)
    assert np.all((v >= 0) & (v <= 1))
    assert np.all(v[(x >= 0.25) & (x <= 0.75)] == 1)
    assert np.all(v[(x <= 0.125) | (x >= 0.875)] == 0)
    # derivative against central differences
    h = 1e-6
    xs = np.linspace(0.13, 0.87, 50)
    assert np.allclose(u.derivative(xs), (u(xs + h) - u(xs - h)) / (2 * h), atol=1e-5)
    assert smooth_glue(0.0) == 0 and smooth_glue(1.0) == 1
    assert smooth_glue(0.5) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        BumpProfile((0.2, 0.9), (0.3, 0.8))


def test_chirp_windows_and_plateau():
    for N in (8, 12, 16, 20):
        win = chirp_windows(N)
        assert len(win) == len([j for j in range(N + 1) if N / 4 <= j <= N / 2])
        assert all(b0 <= a1 for (_, b0), (a1, _) in zip(win, win[1:]))
    N = 12
    for j in chirp_indices(N):
        x = np.linspace(2 * j / N + 1 / (4 * N), 2 * j / N + 3 / (4 * N), 33)
        assert np.allclose(chirp_eval(N, x), 2.0 ** -j * np.exp(2j * np.pi * 2.0 ** j * x), rtol=0, atol=1e-15)
    f = chirp_family(N)
    assert f.lp_norm(math.inf) <= 2 * 2 ** (-N / 4)
    with pytest.raises(ValueError):
        chirp_family(N, L=N + 3)


@pytest.mark.parametrize("N, tol", [(12, 5e-4), (16, 3e-5)])
def test_chirp_taylor_oracle(N, tol):
    f = chirp_family(N)
    c = analyze(f, N)
    worst = 0.0
    for j, mus in chirp_interior_cells(N).items():
        mu = np.array(mus)
        got = np.array([c[N, m] for m in mus])
        pred = taylor_prediction(lambda x: chirp_eval(N, x, derivative=True), N, mu)
        worst = max(worst, float(np.max(np.abs(got - pred) / np.abs(pred))))
        # leading magnitude 2 pi 2^{-2N-2} with error of order 2^{j-N}
        lead = 2 * np.pi * 2.0 ** (-2 * N - 2)
        assert np.max(np.abs(np.abs(got) / lead - 1)) < 4 * 2.0 ** (j - N)
    assert worst < tol


def test_rademacher_linearity_and_errors():
    N = 12
    n = len(frequency_set(N))
    s = SignVector.random(n, 3)
    neg = SignVector(tuple(-v for v in s.signs))
    a, b = rademacher_family(N, s), rademacher_family(N, neg)
    assert np.array_equal(a.values, -b.values)
    comps = rademacher_components(N)
    total = sum((c * r for c, r in zip(comps[1:], s.signs[1:])), comps[0] * s.signs[0])
    assert np.allclose(total.values, a.values, atol=1e-15)
    with pytest.raises(ValueError):
        rademacher_family(N, SignVector.ones(n + 1))
    with pytest.raises(ValueError):
        SignVector((1, 0))


def test_coherent_central_coefficient():
    # closed form on the plateau: 2^{2N} <f, h_{N,0}> = -2 pi i |Z_N| / 4 + O(2^{-N/2});
    # the sign comes from h being +1 on the left half
    for N in (12, 16, 24):
        Z = frequency_set(N)
        val = sum(_wave_haar(N, j, np.array([0.0]))[0] for j in Z) * 4.0 ** N
        assert abs(val + 2j * np.pi * len(Z) / 4) < 8 * 2.0 ** (-N / 2)
        assert abs(abs(val) - 2 * np.pi * len(Z) / 4) < 8 * 2.0 ** (-N / 2)
    # grid analysis agrees with the closed form
    N = 12
    c = analyze(coherent_sum(N), N)
    want = sum(_wave_haar(N, j, np.array([0.0]))[0] for j in frequency_set(N))
    assert abs(c[N, 0] - want) < 1e-6 * abs(want)


def test_plateau_closed_form_matches_grid():
    N = 12
    n = len(frequency_set(N))
    signs = [SignVector.random(n, k) for k in range(3)]
    mu0, mu1 = plateau_cells(N)
    for p in (1, 2):
        closed = plateau_level_terms(N, signs, p)
        for s, cf in zip(signs, closed):
            c = analyze(rademacher_family(N, s), N)
            vals = np.array([abs(c[N, m]) * 2.0 ** N for m in range(mu0, mu1)])
            grid = 2.0 ** (N * (1 - 1 / p)) * (vals ** p).sum() ** (1 / p)
            assert cf == pytest.approx(grid, rel=1e-6)


@pytest.mark.parametrize("N, p", [(16, 1), (24, 1), (32, 1), (16, 2), (24, 2)])
def test_khintchine_band(N, p):
    n = len(frequency_set(N))
    signs = [SignVector.random(n, 1000 + k) for k in range(64)]
    terms = plateau_level_terms(N, signs, p)
    ratio = np.mean(terms ** p) ** (1 / p) / khintchine_prediction(N, p)
    assert 0.5 <= ratio <= 2.0


def test_khintchine_growth_is_sqrt():
    pred = [khintchine_prediction(N, 2) for N in (16, 24, 32)]
    sizes = [len(frequency_set(N)) for N in (16, 24, 32)]
    assert np.allclose(np.array(pred) / np.sqrt(sizes), pred[0] / math.sqrt(sizes[0]))


def test_make_function():
    assert make_function({"family": "staircase", "N": 3}) == staircase(3)
    assert make_function({"family": "indicator", "a": "1/4", "b": 1}) == indicator(F(1, 4), 1)
    f = staircase(2)
    assert make_function(json.loads(json.dumps(f.to_json()))) == f
    g = make_function({"family": "bump", "plateau": [0.25, 0.75], "support": [0, 1], "level": 8})
    assert make_function(g.to_json()).values.tolist() == g.values.tolist()
    for bad in ({"family": "nope"}, {"family": "staircase"}, {"family": "staircase", "N": 2, "x": 1}):
        with pytest.raises(ValueError):
            make_function(bad)


@given(st.sampled_from(["staircase", "coherent_sum", "rademacher", "chirp"]), st.integers(0, 3))
def test_generators_deterministic(name, seed):
    spec = {"family": name, "N": 8}
    if name == "rademacher":
        spec["seed"] = seed
    a = json.dumps(make_function(spec).to_json(), sort_keys=True)
    b = json.dumps(make_function(spec).to_json(), sort_keys=True)
    assert a == b


def test_coherent_profile_centred():
    assert COHERENT_PROFILE(0.0) == 1
    assert COHERENT_PROFILE(0.5) == 0 and COHERENT_PROFILE(-0.5) == 0
    assert isinstance(ExactPiecewise.zero(), ExactPiecewise)
