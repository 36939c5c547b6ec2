"""Acceptance criteria 1-8; run with ``pytest tests/test_acceptance.py`` for the PASS/FAIL summary."""
import math
import time
from fractions import Fraction as F

import numpy as np
import pytest

from haarlab import experiments as ex
from haarlab.dyadic import ExactPiecewise, indicator
from haarlab.norms import BootstrapParams, bootstrap_constant, frame_sobolev_norm, w1p_norm
from haarlab.splines import chui_wang_b, chui_wang_mother

_runs: dict = {}


def run(name, params=None, seed=0):
    key = (name, repr(sorted((params or {}).items())), seed)
    if key not in _runs:
        t = time.perf_counter()
        res = ex.run_experiment(name, params or {}, seed)
        _runs[key] = (res, time.perf_counter() - t)
    return _runs[key]


@pytest.mark.criterion(1, "staircase: dyadic norm 1 exactly, reference >= 0.9 N, slope of reference vs N in [0.9, 1.5], < 10 s")
def test_criterion_1_staircase_growth():
    res, secs = run("thm-neg-growth", {"N_min": 4, "N_max": 14, "p": [1.0, 2.0]})
    print(f"slopes: {res.summary}; runtime {secs:.1f} s")
    assert secs < 10
    for p in ("1", "2"):
        assert res.checks[f"dyadic_exact_one[p={p}]"]
        assert res.checks[f"ref_ge_cN[p={p}]"]
    for row in res.rows:
        assert row["dyadic_exact"] == 1 and row["ref"] >= 0.9 * row["N"]
    for p in ("1", "2"):
        slope = res.summary[f"slope[p={p}]"]
        assert 0.9 <= slope <= 1.5, f"p={p}: slope {slope:.4f} outside [0.9, 1.5]"


@pytest.mark.criterion(2, "exact refinement, derivative identity and Haar Gram identities, zero tolerance")
def test_criterion_2_exact_identities():
    res, _ = run("refinement-exact", {"count": 50, "levels": 4})
    assert res.checks == {"refinement": True, "derivative_identity": True, "gram_diagonal": True}
    assert res.summary["violations"] == 0
    for kind in ("refinement", "derivative"):
        rows = [r for r in res.rows if r["check"] == kind]
        assert len(rows) == 50 and all(r["ok"] for r in rows)
    assert all(r["lhs"] == r["rhs"] for r in res.rows if r["check"] == "derivative")


@pytest.mark.criterion(3, "Chui-Wang b exact, vanishing moments, dual residual < 1e-8 with K <= 100, monotone decay")
def test_criterion_3_chui_wang():
    assert chui_wang_b() == (F(1, 12), F(-1, 2), F(5, 6), F(-1, 2), F(1, 12))
    s = chui_wang_mother(1e-10)
    assert s.psi.integrate() == 0
    assert s.psi.inner(ExactPiecewise([-1, 4], [(0, 1)])) == 0
    assert s.residual < 1e-8 and s.K <= 100
    mags = np.abs(s.a)
    right = mags[s.K + 3:]
    left = mags[:s.K - 2][::-1]
    assert np.all(np.diff(right) < 0) and np.all(np.diff(left) < 0)
    res, _ = run("biorthogonality")
    assert res.passed, res.failed_checks()


@pytest.mark.criterion(4, "frame Sobolev / W^1_p ratios in [1/50, 50] with spread <= 50; BV variant finite on 1_[0,1], W^1_1 rejects it")
def test_criterion_4_sobolev_band():
    res, _ = run("w1p-frame", {"p": [2.0, "inf"], "corpus_size": 20})
    ratios = [r["ratio"] for r in res.rows]
    assert len({r["function"] for r in res.rows}) == 20
    assert all(1 / 50 <= x <= 50 for x in ratios)
    assert max(ratios) / min(ratios) <= 50
    ind = indicator(0, 1)
    assert math.isfinite(frame_sobolev_norm(ind, 1, 12).value)
    with pytest.raises(ValueError):
        w1p_norm(ind, 1)
    assert res.passed, res.failed_checks()


@pytest.mark.criterion(5, "frame Besov / reference ratio spread <= 100 on 18 parameter triples; exact frame >= dyadic domination")
def test_criterion_5_besov_bands():
    res, _ = run("frame-equivalence-sweep")
    assert len({(r["s"], r["p"], r["q"]) for r in res.rows}) == 18
    assert all(r["in_region"] for r in res.rows)
    assert all(v <= 100 for v in res.summary["spread"].values())
    assert res.summary["spread_overall"] <= 100
    assert all(res.summary["domination"].values())


@pytest.mark.criterion(6, "bootstrap: 200 seeded sequences per case, ratio <= C, zero violations")
def test_criterion_6_bootstrap():
    res, _ = run("bootstrap-demo", {"samples": 200})
    assert res.summary["violations"] == 0
    for (s, p) in ((1, 2), (0.8, 2), (1, 4)):
        case = res.summary["cases"][f"s={s:g},p={p:g}"]
        C = bootstrap_constant(BootstrapParams((F(1, 2), 1, F(1, 2)), s, p))
        assert case["C"] == pytest.approx(C)
        assert case["worst_ratio"] <= C
    assert sum(1 for r in res.rows) == 600


@pytest.mark.criterion(7, "chirp Taylor agreement within 10% and level term >= 0.8 prediction at N = 12; coherent central coefficient >= 0.5 2pi|Z_N|/4 at N = 16; < 60 s")
def test_criterion_7_lower_bounds():
    chirp, t1 = run("chirp-lowerbound", {"N": [12]})
    coh, t2 = run("coherent-p-infty", {"N": [16]})
    print(f"runtime {t1 + t2:.1f} s")
    assert t1 + t2 < 60
    for r in chirp.rows:
        assert r["taylor_max_rel"] <= 0.1
        assert r["level_term"] >= 0.8 * r["predicted"]
    (row,) = coh.rows
    assert row["central"] >= 0.5 * 2 * math.pi * row["Z_N"] / 4
    assert chirp.passed and coh.passed


@pytest.mark.criterion(8, "every experiment rerun with the same parameters and seed is byte-identical")
def test_criterion_8_determinism():
    for name, _ in ex.list_experiments():
        first, _ = run(name)
        again = ex.run_experiment(name, {}, 0)
        assert first.dumps() == again.dumps(), name
        assert first.to_csv() == again.to_csv(), name
        assert first.plot == again.plot, name


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
