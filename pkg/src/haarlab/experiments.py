"""Registered experiments: each returns a table, named checks and a summary."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from . import families as fam
from .dyadic import ExactPiecewise, lp_norm
from .haar import analyze, frame_coeffs, haar_atom
from .norms import (INF, BootstrapParams, BootstrapViolation, SmoothnessParams, b_norm,
                    bootstrap_constant, bootstrap_sample, bootstrap_verify, bv_norm,
                    dyadic_besov_norm, frame_besov_norm, frame_sobolev_norm, ref_besov_norm,
                    w1p_norm)
from .splines import (bspline, chui_wang_b, chui_wang_mother, derivative_identity_check,
                      refine_hat)
from .svg import line_plot


class ParameterError(ValueError):
    """Unknown experiment or parameter, or a value of the wrong type."""


@dataclass
class ExperimentResult:
    name: str
    theorem: str
    params: dict
    seed: int
    J: object
    columns: list
    rows: list
    checks: dict
    summary: dict = field(default_factory=dict)
    plot: str | None = None

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def failed_checks(self) -> list:
        return sorted(k for k, v in self.checks.items() if not v)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["seed"] + self.columns)
        for r in self.rows:
            w.writerow([self.seed] + [_cell(r.get(c)) for c in self.columns])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "experiment": self.name,
            "theorem": self.theorem,
            "params": self.params,
            "seed": self.seed,
            "J": self.J,
            "passed": self.passed,
            "checks": self.checks,
            "failed": self.failed_checks(),
            "summary": _jsonable(self.summary),
            "rows": len(self.rows),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    def write(self, outdir, plot: bool = False) -> list:
        """Write ``<name>.csv`` and ``<name>.json`` (and ``<name>.svg``); returns the paths."""
        out = Path(outdir)
        out.mkdir(parents=True, exist_ok=True)
        paths = [out / f"{self.name}.csv", out / f"{self.name}.json"]
        paths[0].write_text(self.to_csv(), encoding="utf-8")
        paths[1].write_text(self.dumps(), encoding="utf-8")
        if plot and self.plot is not None:
            p = out / f"{self.name}.svg"
            p.write_text(self.plot, encoding="utf-8")
            paths.append(p)
        return paths


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, (float, np.floating)):
        return "inf" if math.isinf(v) else repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, Fraction):
        return _cell(v)
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return "inf" if math.isinf(v) else float(v)
    return v


def _q(v) -> float:
    return INF if v in ("inf", INF) else float(v)


def _qs(v) -> str:
    return "inf" if math.isinf(v) else repr(float(v))


def _spread(xs) -> float:
    xs = [x for x in xs if x > 0]
    return max(xs) / min(xs) if xs else INF


@dataclass(frozen=True)
class Experiment:
    name: str
    description: str
    theorem: str
    defaults: dict
    fn: Callable

    def resolve(self, params: dict | None) -> dict:
        """Merge ``params`` into the defaults, checking names and types."""
        out = dict(self.defaults)
        for k, v in (params or {}).items():
            if k not in self.defaults:
                raise ParameterError(f"{self.name}: unknown parameter {k!r} "
                                     f"(known: {', '.join(sorted(self.defaults))})")
            out[k] = _coerce(self.name, k, v, self.defaults[k])
        return out


def _coerce(name, key, v, default):
    def scalar(x, like):
        if isinstance(like, bool):
            if isinstance(x, bool):
                return x
            raise ParameterError(f"{name}: {key} must be true or false")
        if isinstance(like, int) and not isinstance(like, bool):
            if isinstance(x, bool) or not isinstance(x, (int, float)) or int(x) != x:
                raise ParameterError(f"{name}: {key} must be an integer")
            return int(x)
        if isinstance(like, float) or like == "inf":
            if x == "inf":
                return "inf"
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise ParameterError(f"{name}: {key} must be a number or \"inf\"")
            return float(x) if isinstance(like, float) else x
        if isinstance(like, list):
            if not isinstance(x, list):
                raise ParameterError(f"{name}: {key} entries must be lists")
            return x
        return x

    if isinstance(default, list):
        items = v if isinstance(v, list) else [v]
        like = default[0] if default else None
        if like is None:
            return items
        return [scalar(x, like if not isinstance(like, (int, float)) or x != "inf" else "inf")
                for x in items]
    return scalar(v, default)


REGISTRY: dict = {}


def register(name, description, theorem, **defaults):
    def deco(fn):
        REGISTRY[name] = Experiment(name, description, theorem, defaults, fn)
        return fn
    return deco


def list_experiments() -> list:
    return [(e.name, e.description) for e in REGISTRY.values()]


def run_experiment(name: str, params: dict | None = None, seed: int = 0) -> ExperimentResult:
    if name not in REGISTRY:
        raise ParameterError(f"unknown experiment {name!r}; known: {', '.join(REGISTRY)}")
    exp = REGISTRY[name]
    p = exp.resolve(params)
    res = exp.fn(p, int(seed))
    res.name, res.theorem, res.params, res.seed = exp.name, exp.theorem, _jsonable(p), int(seed)
    return res


def _result(columns, rows, checks, summary=None, J=None, plot=None) -> ExperimentResult:
    return ExperimentResult("", "", {}, 0, J, columns, rows,
                            {k: bool(v) for k, v in checks.items()}, summary or {}, plot)


# -- staircase growth ------------------------------------------------------------------------

def staircase_growth(N_values, p: float, subdivisions: int = 8) -> list:
    """Rows (N, dyadic exact value, dyadic float value, reference value, single-delta bound)
    at ``s = 1/p``, ``q = inf``, J = N.  The bound is ``2^{N/p} ||Delta^2_{2^-N} f_N||_p``."""
    out = []
    params = SmoothnessParams(1.0 / p, p, INF)
    for N in N_values:
        f = fam.staircase(N)
        d = dyadic_besov_norm(f, params, N)
        r = ref_besov_norm(f, params, N, subdivisions)
        lb = 2.0 ** (N / p) * lp_norm(f.second_difference(Fraction(1, 1 << N)), p)
        out.append((N, d.exact, d.value, r.value, lb))
    return out


@register("thm-neg-growth", "staircase: dyadic norm stays 1 while the difference norm grows like N",
          "staircase-gap", N_min=4, N_max=14, p=[1.0, 2.0], subdivisions=8, c=0.9,
          slope_band=[0.9, 1.5])
def _thm_neg_growth(P, seed):
    rows, checks, summary, series = [], {}, {}, {}
    Ns = list(range(P["N_min"], P["N_max"] + 1))
    for p in (float(v) for v in P["p"]):
        data = staircase_growth(Ns, p, P["subdivisions"])
        for N, ex, dv, rv, lb in data:
            rows.append({"p": p, "s": 1 / p, "N": N, "dyadic": dv, "dyadic_exact": ex,
                         "ref": rv, "lower_bound_deltaN": lb, "ref_over_N": rv / N})
        slope = float(np.polyfit([d[0] for d in data], [d[3] for d in data], 1)[0])
        tag = f"p={p:g}"
        checks[f"dyadic_exact_one[{tag}]"] = all(ex == 1 for _, ex, _, _, _ in data)
        checks[f"ref_ge_cN[{tag}]"] = all(rv >= lb >= P["c"] * N for N, _, _, rv, lb in data)
        lo, hi = P["slope_band"]
        checks[f"slope_in_band[{tag}]"] = lo <= slope <= hi
        summary[f"slope[{tag}]"] = slope
        summary[f"lower_bound_slope[{tag}]"] = float(np.polyfit(Ns, [d[4] for d in data], 1)[0])
        series[f"ref {tag}"] = ([d[0] for d in data], [d[3] for d in data])
    cols = ["p", "s", "N", "dyadic", "dyadic_exact", "ref", "lower_bound_deltaN", "ref_over_N"]
    plot = line_plot(series, title="reference norm of the staircase", xlabel="N", ylabel="norm",
                     logx=True, logy=True)
    return _result(cols, rows, checks, summary, J="N", plot=plot)


# -- frame equivalence -----------------------------------------------------------------------

def corpus(seed: int, size: int = 20, bump_level: int = 12, bumps: bool = True) -> list:
    out = [("pl", i, f) for i, f in enumerate(fam.pl_corpus(seed, size))]
    if bumps:
        out += [("bump", i, f) for i, f in enumerate(fam.bump_corpus(bump_level))]
    return out


def frame_dominates(f, J: int) -> bool:
    """Entrywise ``c_{j,mu} >= 2^j |<f, h_{j,mu}>|`` (levels j >= 0) and equality at level -1."""
    fc = frame_coeffs(f, J)
    hc = analyze(f, J).scaled_by_2j()
    for j in hc.levels:
        start, vals = hc.level(j)
        for i, v in enumerate(vals):
            c = fc[j, start + i]
            if (abs(v) > c) or (j < 0 and abs(v) != c):
                return False
    return True


@register("frame-equivalence-sweep", "frame Besov norm against the second-difference norm over a corpus",
          "frame-besov-characterization", s=[0.3, 0.5, 0.7], p=[1.0, 2.0], q=[1.0, 2.0, "inf"], J=8,
          corpus_size=20, bump_level=12, spread_max=100.0)
def _frame_sweep(P, seed):
    rows = []
    items = corpus(seed, P["corpus_size"], P["bump_level"])
    J = P["J"]
    dom = {f"{k}{i}": frame_dominates(f, J) for k, i, f in items}
    spreads = {}
    for s in P["s"]:
        for p in P["p"]:
            for q in P["q"]:
                params = SmoothnessParams(float(s), float(p), _q(q))
                ratios = []
                for kind, i, f in items:
                    fr = frame_besov_norm(f, params, J)
                    rf = ref_besov_norm(f, params, J)
                    ratio = fr.value / rf.value
                    ratios.append(ratio)
                    rows.append({"function": f"{kind}{i}", "s": float(s), "p": float(p), "q": _qs(params.q),
                                 "frame": fr.value, "ref": rf.value, "ratio": ratio,
                                 "in_region": params.frame_B})
                spreads[f"s={float(s):g},p={float(p):g},q={_qs(params.q)}"] = _spread(ratios)
    allr = [r["ratio"] for r in rows]
    checks = {"domination_exact": all(dom.values()),
              "spread_per_params": all(v <= P["spread_max"] for v in spreads.values()),
              "spread_overall": _spread(allr) <= P["spread_max"],
              "all_in_region": all(r["in_region"] for r in rows)}
    summary = {"spread": spreads, "spread_overall": _spread(allr), "ratio_min": min(allr),
               "ratio_max": max(allr), "domination": dom, "corpus": len(items)}
    cols = ["function", "s", "p", "q", "frame", "ref", "ratio", "in_region"]
    return _result(cols, rows, checks, summary, J=J)


# -- Sobolev characterisation ----------------------------------------------------------------

@register("w1p-frame", "frame sup-norm against the W^1_p norm, plus the BV example 1_[0,1]",
          "sobolev-frame-characterization", p=[2.0, "inf"], J=10, corpus_size=20, band=[0.02, 50.0], spread_max=50.0)
def _w1p_frame(P, seed):
    rows = []
    items = fam.pl_corpus(seed, P["corpus_size"])
    J = P["J"]
    by_p = {}
    for p in P["p"]:
        pv = _q(p)
        for i, f in enumerate(items):
            fr = frame_sobolev_norm(f, pv, J).value
            w = w1p_norm(f, pv).value
            rows.append({"function": f"pl{i}", "p": _qs(pv), "frame": fr, "w1p": w, "ratio": fr / w})
            by_p.setdefault(_qs(pv), []).append(fr / w)
    lo, hi = P["band"]
    ind = haar_atom(-1, 0)
    bv_frame = frame_sobolev_norm(ind, 1, J).value
    try:
        w1p_norm(ind, 1)
        rejected = False
    except ValueError:
        rejected = True
    allr = [r["ratio"] for r in rows]
    checks = {"ratio_band": all(lo <= x <= hi for x in allr),
              "spread_overall": _spread(allr) <= P["spread_max"],
              "spread_per_p": all(_spread(v) <= P["spread_max"] for v in by_p.values()),
              "bv_finite": math.isfinite(bv_frame),
              "w1p_rejects_indicator": rejected}
    summary = {"spread_overall": _spread(allr), "spread": {k: _spread(v) for k, v in by_p.items()},
               "ratio_min": min(allr), "ratio_max": max(allr), "indicator_frame_bv": bv_frame,
               "indicator_bv_norm": bv_norm(ind).exact, "indicator_w1p_rejected": rejected}
    return _result(["function", "p", "frame", "w1p", "ratio"], rows, checks, summary, J=J)


@register("besov-equiv", "dyadic Besov norm against the second-difference norm for 1/p < s < 1",
          "dyadic-besov-equivalence", s=[0.6, 0.75, 0.9], p=[2.0, "inf"], q=[1.0, 2.0, "inf"], J=8,
          corpus_size=20, bump_level=12, spread_max=100.0)
def _besov_equiv(P, seed):
    rows, spreads = [], {}
    items = corpus(seed, P["corpus_size"], P["bump_level"])
    J = P["J"]
    for s in P["s"]:
        for p in P["p"]:
            for q in P["q"]:
                params = SmoothnessParams(float(s), _q(p), _q(q))
                ratios = []
                for kind, i, f in items:
                    d = dyadic_besov_norm(f, params, J)
                    r = ref_besov_norm(f, params, J)
                    ratios.append(d.value / r.value)
                    rows.append({"function": f"{kind}{i}", "s": float(s), "p": _qs(params.p),
                                 "q": _qs(params.q), "dyadic": d.value, "ref": r.value,
                                 "ratio": d.value / r.value, "in_region": params.equiv_B})
                spreads[f"s={float(s):g},p={_qs(params.p)},q={_qs(params.q)}"] = _spread(ratios)
    allr = [r["ratio"] for r in rows]
    checks = {"spread_per_params": all(v <= P["spread_max"] for v in spreads.values()),
              "spread_overall": _spread(allr) <= P["spread_max"],
              "all_in_region": all(r["in_region"] for r in rows)}
    summary = {"spread": spreads, "spread_overall": _spread(allr), "ratio_min": min(allr),
               "ratio_max": max(allr)}
    cols = ["function", "s", "p", "q", "dyadic", "ref", "ratio", "in_region"]
    return _result(cols, rows, checks, summary, J=J)


# -- oscillatory lower bounds ----------------------------------------------------------------

def chirp_measurements(N: int, L: int | None = None) -> dict:
    """Level-N Haar data of the chirp: Taylor agreement and plateau level terms."""
    f = fam.chirp_family(N, L=L)
    c = analyze(f, N)
    cells = fam.chirp_interior_cells(N)
    mus = np.array([m for ms in cells.values() for m in ms])
    meas = np.array([c[N, int(m)] for m in mus])
    pred = fam.taylor_prediction(lambda x: fam.chirp_eval(N, x, derivative=True), N, mus)
    rel = np.abs(meas - pred) / np.abs(pred)
    return {"f": f, "coeffs": c, "mus": mus, "measured": meas, "predicted": pred,
            "taylor_max_rel": float(rel.max()), "cells": len(mus)}


def level_term(vals: np.ndarray, N: int, p: float) -> float:
    """``2^{N(1-1/p)} (sum |2^N v|^p)^{1/p}`` for level-N coefficients v."""
    a = np.abs(vals) * 2.0 ** N
    if math.isinf(p):
        return float(2.0 ** N * a.max())
    return float(2.0 ** (N * (1 - 1 / p)) * np.sum(a ** p) ** (1 / p))


@register("chirp-lowerbound", "chirp family: level-N Haar data against the Taylor oracle",
          "chirp-lower-bound", N=[12, 16], p=[1.0, 2.0], c=0.8, taylor_tol=0.1, L_extra=4)
def _chirp(P, seed):
    rows, checks, summary = [], {}, {}
    for N in P["N"]:
        m = chirp_measurements(N, N + P["L_extra"])
        summary[f"taylor_max_rel[N={N}]"] = m["taylor_max_rel"]
        checks[f"taylor[N={N}]"] = m["taylor_max_rel"] <= P["taylor_tol"]
        for p in (float(v) for v in P["p"]):
            t = level_term(m["measured"], N, p)
            pred = 2 * math.pi / 4 * (m["cells"] * 2.0 ** -N) ** (1 / p)
            full = b_norm(m["coeffs"].scaled_by_2j(), SmoothnessParams(1.0, p, INF)).value
            rows.append({"N": N, "p": p, "cells": m["cells"], "level_term": t, "predicted": pred,
                         "ratio": t / pred, "dyadic_norm": full, "taylor_max_rel": m["taylor_max_rel"]})
            checks[f"lower_bound[N={N},p={p:g}]"] = t >= P["c"] * pred
    cols = ["N", "p", "cells", "level_term", "predicted", "ratio", "dyadic_norm", "taylor_max_rel"]
    return _result(cols, rows, checks, summary, J="N")


def central_coefficient(N: int, L: int | None = None) -> float:
    """``2^N |<f, 2^N h_{N,0}>|`` for the coherent sum."""
    f = fam.coherent_sum(N, L=L)
    return float(2.0 ** (2 * N) * abs(analyze(f, N)[N, 0]))


@register("coherent-p-infty", "coherent sum: central Haar coefficient grows like N",
          "coherent-sum-growth", N=[8, 12, 16], c=0.5, L_extra=4)
def _coherent(P, seed):
    rows = []
    for N in P["N"]:
        z = len(fam.frequency_set(N))
        cc = central_coefficient(N, N + P["L_extra"])
        pred = 2 * math.pi * z / 4
        rows.append({"N": N, "Z_N": z, "central": cc, "predicted": pred, "ratio": cc / pred})
    checks = {f"central[N={r['N']}]": r["central"] >= P["c"] * r["predicted"] for r in rows}
    plot = line_plot({"central": ([r["N"] for r in rows], [r["central"] for r in rows]),
                      "predicted": ([r["N"] for r in rows], [r["predicted"] for r in rows])},
                     title="coherent sum", xlabel="N", ylabel="2^N |<f, 2^N h_N0>|", logx=True, logy=True)
    return _result(["N", "Z_N", "central", "predicted", "ratio"], rows, checks, J="N", plot=plot)


# -- Chui-Wang ------------------------------------------------------------------------------

@register("biorthogonality", "Chui-Wang dual coefficients, residual and vanishing moments",
          "chui-wang-duality", tol=1e-10, K_max=100, residual_max=1e-8, level=8, shifts=3)
def _biorth(P, seed):
    sysm = chui_wang_mother(P["tol"])
    b = chui_wang_b()
    psi = sysm.psi
    x = ExactPiecewise([-10, 10], [(0, 1)])
    moments = (psi.integrate(), psi.inner(x))
    ks = np.arange(-sysm.K, sysm.K + 1)
    mags = np.abs(sysm.a)
    tail = [(k, mags[k + sysm.K]) for k in ks if abs(k) >= 3]
    right = [m for k, m in tail if k > 0]
    left = [m for k, m in sorted(tail, key=lambda t: -t[0]) if k < 0]
    monotone = all(u > v for u, v in zip(right, right[1:])) and all(u > v for u, v in zip(left, left[1:]))
    dual = sysm.dual_wavelet(P["level"])
    biorth = max(abs(dual.inner(psi.shift(k)) - (1.0 if k == 0 else 0.0))
                 for k in range(-P["shifts"], P["shifts"] + 1))
    rows = [{"k": int(k), "a_k": float(sysm.a[i])} for i, k in enumerate(ks)]
    checks = {"b_exact": b == (Fraction(1, 12), Fraction(-1, 2), Fraction(5, 6), Fraction(-1, 2), Fraction(1, 12)),
              "moments_zero": moments == (0, 0),
              "residual": sysm.residual < P["residual_max"],
              "K_bound": sysm.K <= P["K_max"],
              "monotone_decay": monotone,
              "biorthogonal": biorth < 1e-9}
    summary = {"b": [str(v) for v in b], "K": sysm.K, "residual": sysm.residual,
               "gram": {str(k): str(v) for k, v in sorted(sysm.gram.items())},
               "biorthogonality_error": biorth,
               "decay_ratio": float(mags[sysm.K + 6] / mags[sysm.K + 5])}
    return _result(["k", "a_k"], rows, checks, summary)


# -- bootstrap ------------------------------------------------------------------------------

@register("bootstrap-demo", "random sequences meeting the odd-entry bound against the constant C",
          "odd-entry-bootstrap", lam=[0.5, 1.0, 0.5], cases=[[1.0, 2.0], [0.8, 2.0], [1.0, 4.0]], q="inf",
          samples=200, J=6, width=4)
def _bootstrap(P, seed):
    rng = np.random.default_rng(seed)
    rows, worst, violations = [], {}, 0
    for s, p in P["cases"]:
        bp = BootstrapParams(tuple(P["lam"]), float(s), float(p), _q(P["q"]))
        C = bootstrap_constant(bp)
        w = 0.0
        for k in range(P["samples"]):
            a = bootstrap_sample(rng, bp, P["J"], P["width"])
            try:
                rep = bootstrap_verify(a, bp)
            except BootstrapViolation:
                violations += 1
                continue
            violations += not rep.holds
            w = max(w, rep.ratio)
            rows.append({"s": float(s), "p": float(p), "sample": k, "norm": rep.norm,
                         "norm_even": rep.norm_even, "ratio": rep.ratio, "C": C})
        worst[f"s={float(s):g},p={float(p):g}"] = {"worst_ratio": w, "C": C}
    checks = {"no_violations": violations == 0,
              "worst_le_C": all(v["worst_ratio"] <= v["C"] * (1 + 1e-12) for v in worst.values())}
    summary = {"cases": worst, "violations": violations}
    return _result(["s", "p", "sample", "norm", "norm_even", "ratio", "C"], rows, checks, summary, J=P["J"])


# -- exact identities -----------------------------------------------------------------------

def random_smooth_piecewise(rng: np.random.Generator, terms: int = 3) -> ExactPiecewise:
    """Continuous piecewise polynomial: a rational combination of dilated B-splines of order 2..4."""
    f = ExactPiecewise()
    while f.is_zero():
        for _ in range(terms):
            m = int(rng.integers(2, 5))
            j = int(rng.integers(0, 4))
            mu = int(rng.integers(-4, 4))
            w = Fraction(int(rng.integers(-8, 9)), int(rng.integers(1, 5)))
            f = f + bspline(m).f.dilate(j, mu).scale(w)
    return f


def gram_box(levels: int = 4):
    """Atoms ``h_{j,mu}`` for j = -1..levels-2 with supports meeting [0, 1), and their exact Gram matrix."""
    idx = [(-1, 0)] + [(j, mu) for j in range(levels - 1) for mu in range(1 << j)]
    atoms = [haar_atom(j, mu) for j, mu in idx]
    G = [[a.inner(b) for b in atoms] for a in atoms]
    return idx, G


@register("refinement-exact", "two-scale hat identity, derivative identity and Haar orthogonality",
          "two-scale-and-derivative-identities", count=50, levels=4)
def _refinement(P, seed):
    rng = np.random.default_rng(seed)
    rows = []
    bad_ref = bad_der = 0
    for k in range(P["count"]):
        j, mu = int(rng.integers(0, 7)), int(rng.integers(-20, 21))
        r = refine_hat(j, mu)
        bad_ref += not r.exact
        rows.append({"check": "refinement", "case": k, "index": f"{j},{mu}", "lhs": "", "rhs": "",
                     "ok": r.exact})
    for k in range(P["count"]):
        f = random_smooth_piecewise(rng)
        j = int(rng.integers(0, 5))
        a, b = f.support
        nu = int(rng.integers(math.floor(a * 2 ** j) - 1, math.ceil(b * 2 ** j) + 1))
        lhs, rhs = derivative_identity_check(f, j, nu)
        bad_der += lhs != rhs
        rows.append({"check": "derivative", "case": k, "index": f"{j},{nu}", "lhs": lhs, "rhs": rhs,
                     "ok": lhs == rhs})
    idx, G = gram_box(P["levels"])
    bad_gram = 0
    for a, (ja, ma) in enumerate(idx):
        for b, _ in enumerate(idx):
            want = Fraction(1, 1 << max(ja, 0)) if a == b else Fraction(0)
            bad_gram += G[a][b] != want
    rows.append({"check": "gram", "case": 0, "index": f"{len(idx)}x{len(idx)}", "lhs": "", "rhs": "",
                 "ok": bad_gram == 0})
    violations = bad_ref + bad_der + bad_gram
    checks = {"refinement": bad_ref == 0, "derivative_identity": bad_der == 0, "gram_diagonal": bad_gram == 0}
    summary = {"violations": violations, "refinement_violations": bad_ref,
               "derivative_violations": bad_der, "gram_violations": bad_gram, "gram_size": len(idx)}
    return _result(["check", "case", "index", "lhs", "rhs", "ok"], rows, checks, summary)


# -- non-completeness -----------------------------------------------------------------------

@register("noncomplete-demo", "Cauchy sequence in the dyadic norm whose sup norm explodes",
          "dyadic-noncompleteness", N_max=12, s=-0.5, p=1.0, q=1.0)
def _noncomplete(P, seed):
    params = SmoothnessParams(P["s"], P["p"], _q(P["q"]))
    if not params.s < params.ip - 1:
        raise ParameterError("noncomplete-demo needs s < 1/p - 1")
    e = params.s + 1 - params.ip
    Nm = P["N_max"]
    fs = {N: fam.geometric_staircase(N) for N in range(0, Nm + 1)}
    rows = []
    ok_formula = ok_l1 = True
    for N in range(1, Nm):
        d_next = dyadic_besov_norm(fs[N + 1] - fs[N], params, N + 1).value
        d_tail = dyadic_besov_norm(fs[Nm] - fs[N], params, Nm).value
        terms = [2.0 ** (j * e) for j in range(N, Nm)]
        if math.isinf(params.q):
            formula = max(terms)
        else:
            formula = sum(t ** params.q for t in terms) ** (1 / params.q)
        ok_formula &= math.isclose(d_tail, formula, rel_tol=1e-12)
        l1 = lp_norm(fs[N], 1)
        ok_l1 &= l1 == 1
        rows.append({"N": N, "dist_next": d_next, "dist_to_Nmax": d_tail, "formula": formula,
                     "sup_norm": 1 << N, "l1": l1})
    dist = [r["dist_next"] for r in rows]
    checks = {"formula": ok_formula, "l1_one": ok_l1,
              "distances_decrease": all(u > v for u, v in zip(dist, dist[1:])),
              "routes_agree": all(fam.geometric_staircase(N, "synthesis") == fs[N] for N in fs)}
    summary = {"exponent": e, "last_distance": dist[-1], "last_sup": rows[-1]["sup_norm"]}
    plot = line_plot({"dist_next": ([r["N"] for r in rows], dist),
                      "sup_norm": ([r["N"] for r in rows], [float(r["sup_norm"]) for r in rows])},
                     title="Cauchy in the dyadic norm", xlabel="N", ylabel="value", logy=True)
    return _result(["N", "dist_next", "dist_to_Nmax", "formula", "sup_norm", "l1"], rows, checks,
                   summary, J="N_max", plot=plot)
