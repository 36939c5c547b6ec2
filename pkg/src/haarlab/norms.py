"""Sequence and function-space quasi-norms, parameter regions and the odd-entry bootstrap bound."""
from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .coeffs import CoeffArray
from .dyadic import ExactPiecewise, as_fraction, is_dyadic, l1_exact, lp_norm, total_variation
from .grid import GridFunction
from .haar import analyze, frame_coeffs

INF = math.inf


def _exponent(v, name: str) -> float:
    if isinstance(v, str):
        v = INF if v.strip().lower() in ("inf", "infinity", "oo") else float(Fraction(v))
    v = float(v)
    if not v > 0:
        raise ValueError(f"{name} must be positive, got {v}")
    return v


def _fmt_exp(v: float):
    return "inf" if math.isinf(v) else v


@dataclass(frozen=True)
class SmoothnessParams:
    """Smoothness ``s`` with integrability ``p`` and fine index ``q`` (both in (0, inf])."""

    s: float
    p: float
    q: float = INF

    def __post_init__(self):
        object.__setattr__(self, "s", float(Fraction(self.s)) if isinstance(self.s, str) else float(self.s))
        object.__setattr__(self, "p", _exponent(self.p, "p"))
        object.__setattr__(self, "q", _exponent(self.q, "q"))

    @property
    def ip(self) -> float:
        return 0.0 if math.isinf(self.p) else 1.0 / self.p

    @property
    def iq(self) -> float:
        return 0.0 if math.isinf(self.q) else 1.0 / self.q

    # parameter regions
    @property
    def unconditional_F(self) -> bool:
        return max(self.ip - 1, self.iq - 1) < self.s < min(self.ip, self.iq, 1.0)

    @property
    def schauder(self) -> bool:
        return self.ip - 1 < self.s < min(self.ip, 1.0)

    @property
    def frame_F(self) -> bool:
        return (0.5 < self.p < INF and self.q > 0.5
                and max(self.ip - 1, self.iq - 1) < self.s < 1)

    @property
    def frame_B(self) -> bool:
        return self.p > 0.5 and self.ip - 1 < self.s < 1

    @property
    def synthesis_F(self) -> bool:
        return (not math.isinf(self.p)
                and max(self.ip, self.iq, 1.0) - 2 < self.s < min(self.ip, self.iq))

    @property
    def synthesis_B(self) -> bool:
        return max(self.ip, 1.0) - 2 < self.s < self.ip

    @property
    def equiv_B(self) -> bool:
        return self.p > 1 and self.ip < self.s < 1

    def to_json(self) -> dict:
        return {"s": self.s, "p": _fmt_exp(self.p), "q": _fmt_exp(self.q)}


def as_params(params=None, **kw) -> SmoothnessParams:
    if isinstance(params, SmoothnessParams):
        return params
    if isinstance(params, dict):
        kw = {**params, **kw}
    return SmoothnessParams(kw["s"], kw["p"], kw.get("q", INF))


@dataclass(frozen=True)
class NormReport:
    """A computed quasi-norm with its truncation data.

    ``tail_flag`` marks possible truncation bias: for q = inf the supremum is
    attained at the finest level J, otherwise level J carries more than 1% of
    the q-th power of the value.  ``exact`` holds the rational value when the
    computation stayed in exact arithmetic.
    """

    value: float
    J: int | None
    tail_flag: bool
    method: str
    params: dict
    exact: Fraction | None = None
    in_region: bool | None = None
    details: dict = field(default_factory=dict)

    def __float__(self):
        return self.value

    def to_json(self) -> dict:
        out = {"value": self.value, "J": self.J, "tail_flag": self.tail_flag,
               "method": self.method, "params": self.params}
        if self.exact is not None:
            out["exact"] = str(self.exact)
        if self.in_region is not None:
            out["in_region"] = self.in_region
        if self.details:
            out["details"] = self.details
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


# -- exact helpers ----------------------------------------------------------------

def _int_root(n: int, k: int):
    if n < 0:
        return None
    r = round(n ** (1.0 / k)) if n < 2 ** 1000 else None
    if r is None:
        return None
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** k == n:
            return c
    return None


def _exact_root(x: Fraction, k: int):
    """k-th root of a non-negative rational if it is rational, else None."""
    if k == 1:
        return x
    a, b = _int_root(x.numerator, k), _int_root(x.denominator, k)
    return None if a is None or b is None else Fraction(a, b)


def _exact_pow2(e: Fraction):
    return Fraction(2) ** int(e) if e.denominator == 1 else None


def _as_int_exponent(v: float):
    if math.isinf(v) or v != int(v):
        return None
    return int(v)


# -- sequence norms -----------------------------------------------------------------

def _level_terms(beta: CoeffArray, params: SmoothnessParams, min_level: int = -1):
    """Per level: (j, float term, exact term or None) with term = 2^{j(s-1/p)} ||beta_j||_p."""
    p, sigma = params.p, params.s - params.ip
    pint = _as_int_exponent(p)
    sig_exact = None
    if is_dyadic(params.s) and (math.isinf(p) or pint):
        sig_exact = as_fraction(params.s) - (0 if math.isinf(p) else Fraction(1, pint))
    out = []
    for j in beta.levels:
        if j < min_level:
            continue
        _, vals = beta.level(j)
        if vals.dtype == object:
            mags = [abs(v) for v in vals]
            fl = np.array([float(m) for m in mags])
        else:
            mags = None
            fl = np.abs(vals).astype(float)
        if math.isinf(p):
            inner = float(fl.max()) if fl.size else 0.0
        else:
            inner = math.fsum(fl ** p) ** (1.0 / p) if fl.size else 0.0
        term = 2.0 ** (j * sigma) * inner
        ex = None
        if mags is not None and sig_exact is not None:
            w = _exact_pow2(j * sig_exact)
            if math.isinf(p):
                ex_inner = max(mags, default=Fraction(0))
            else:
                ex_inner = _exact_root(sum((m ** pint for m in mags), Fraction(0)), pint)
            if w is not None and ex_inner is not None:
                ex = w * ex_inner
        out.append((j, term, ex))
    return out


def _combine_q(terms, q: float):
    """(value, exact or None, argmax level, share of the finest level)."""
    if not terms:
        return 0.0, Fraction(0), None, 0.0
    vals = [t for _, t, _ in terms]
    exacts = [e for _, _, e in terms]
    jmax = max(j for j, _, _ in terms)
    if math.isinf(q):
        value = max(vals)
        # the finest level attaining the supremum, so ties at level J are flagged
        i = max(k for k, v in enumerate(vals) if v >= value * (1 - 1e-12))
        ex = max(exacts) if all(e is not None for e in exacts) else None
        return value, ex, terms[i][0], None
    powers = [t ** q for t in vals]
    total = math.fsum(powers)
    value = total ** (1.0 / q)
    share = (powers[[j for j, _, _ in terms].index(jmax)] / total) if total > 0 else 0.0
    ex = None
    qi = _as_int_exponent(q)
    if qi and all(e is not None for e in exacts):
        ex = _exact_root(sum((e ** qi for e in exacts), Fraction(0)), qi)
    return value, ex, None, share


def _tail(terms, q, argmax, share, J) -> bool:
    if not terms:
        return False
    if math.isinf(q):
        return argmax == J and terms[[j for j, _, _ in terms].index(argmax)][1] > 0
    return share > 0.01


def b_norm(beta: CoeffArray, params, *, min_level: int = -1, method: str = "b") -> NormReport:
    """``(sum_j [2^{j(s-1/p)} (sum_mu |beta_{j,mu}|^p)^{1/p}]^q)^{1/q}``, j >= min_level.

    Exact (``report.exact``) for rational entries when the level weights are
    powers of two and the p-th and q-th roots stay rational.
    """
    params = as_params(params)
    terms = _level_terms(beta, params, min_level)
    value, ex, argmax, share = _combine_q(terms, params.q)
    if ex is not None:
        value = float(ex)
    J = beta.max_level
    return NormReport(value, J, _tail(terms, params.q, argmax, share, J), method,
                      params.to_json(), exact=ex)


def f_norm(beta: CoeffArray, params, *, method: str = "f") -> NormReport:
    """``|| (sum_j |2^{js} sum_mu beta_{j,mu} 1_{I_{j,mu}}|^q)^{1/q} ||_p`` with p < inf.

    Level -1 lives on unit cells.  The integrand is constant on the cells of
    the finest level and is summed cell by cell.
    """
    params = as_params(params)
    if math.isinf(params.p):
        raise ValueError("the f-norm needs p < inf")
    blocks = []
    for j in beta.levels:
        start, vals = beta.level(j)
        if len(vals):
            mags = (np.array([float(abs(v)) for v in vals]) if vals.dtype == object
                    else np.abs(vals).astype(float))
            blocks.append((j, start, mags))
    J = beta.max_level
    if not blocks:
        return NormReport(0.0, J, False, method, params.to_json(), exact=Fraction(0))
    finest = max(max(j for j, _, _ in blocks), 0)
    lo = min(start << (finest - max(j, 0)) for j, start, _ in blocks)
    hi = max((start + len(v)) << (finest - max(j, 0)) for j, start, v in blocks)
    g = _kernels.tl_integrand([(j, s, np.ascontiguousarray(v, dtype=float)) for j, s, v in blocks],
                              finest, lo, hi, params.s, params.q)
    p = params.p
    value = (math.fsum(g ** p) * 2.0 ** -finest) ** (1.0 / p)
    # tail share: the finest level's own contribution relative to the whole
    top = [(j, s, v) for j, s, v in blocks if j == J]
    share = 0.0
    if top and value > 0:
        gt = _kernels.tl_integrand([(j, s, np.ascontiguousarray(v, dtype=float)) for j, s, v in top],
                                   finest, lo, hi, params.s, params.q)
        share = (math.fsum(gt ** p) * 2.0 ** -finest) ** (1.0 / p) / value
    tail = share > 0.01 if not math.isinf(params.q) else bool(top) and share > 0.99
    return NormReport(float(value), J, tail, method, params.to_json())


# -- function norms -------------------------------------------------------------------

def dyadic_besov_norm(f, params, J: int) -> NormReport:
    """b-norm of ``{2^j <f, h_{j,mu}>}`` (level -1 entries are ``<f, 1_[mu,mu+1)>``)."""
    params = as_params(params)
    r = b_norm(analyze(f, J).scaled_by_2j(), params, method="dyadic")
    return _with(r, in_region=params.equiv_B)


def frame_besov_norm(f, params, J: int) -> NormReport:
    params = as_params(params)
    r = b_norm(frame_coeffs(f, J), params, method="frame-besov")
    return _with(r, in_region=params.frame_B)


def frame_tl_norm(f, params, J: int) -> NormReport:
    params = as_params(params)
    r = f_norm(frame_coeffs(f, J), params, method="frame-tl")
    return _with(r, in_region=params.frame_F)


def wavelet_besov_norm(f, params, J: int, system=None) -> NormReport:
    """b-norm of the Chui-Wang data ``2^j <f, psi_{j,mu}>``."""
    from .splines import cw_analyze

    params = as_params(params)
    return b_norm(cw_analyze(f, J, system), params, method="wavelet-besov")


def wavelet_tl_norm(f, params, J: int, system=None) -> NormReport:
    from .splines import cw_analyze

    params = as_params(params)
    return f_norm(cw_analyze(f, J, system), params, method="wavelet-tl")


def _with(r: NormReport, **kw) -> NormReport:
    d = dict(r.__dict__)
    d.update(kw)
    return NormReport(**d)


def _step_diff_norm(f: ExactPiecewise, delta: Fraction, p: float) -> float:
    # piecewise constants: the second difference is constant between the
    # points b, b - delta, b - 2 delta (b a breakpoint); dyadic points are exact floats
    bps = np.array([float(b) for b in f.breakpoints])
    vals = np.array([float(q[0]) if q else 0.0 for q in f.pieces])
    d = float(delta)
    pts = np.unique(np.concatenate((bps, bps - d, bps - 2 * d)))
    left = pts[:-1]

    def ev(x):
        i = np.searchsorted(bps, x, side="right") - 1
        ok = (i >= 0) & (i < len(vals))
        out = np.zeros_like(x)
        out[ok] = vals[i[ok]]
        return out

    diff = np.abs(ev(left + 2 * d) - 2 * ev(left + d) + ev(left))
    if math.isinf(p):
        return float(diff.max()) if diff.size else 0.0
    return math.fsum(diff ** p * np.diff(pts)) ** (1.0 / p)


@functools.lru_cache(maxsize=4096)
def _diff_norm_exact(f: ExactPiecewise, delta: Fraction, p: float) -> float:
    if f.is_piecewise_constant():
        return _step_diff_norm(f, delta, p)
    return lp_norm(f.second_difference(delta), p)


def _diff_norm(f, delta: Fraction, p: float) -> float:
    if isinstance(f, ExactPiecewise):
        return _diff_norm_exact(f, delta, p)
    return f.second_difference(delta).lp_norm(p)


def modulus2(f, t, p, subdivisions: int = 8) -> float:
    """``max_{i=1..n} ||Delta^2_{t i / n} f||_p``, a grid surrogate for omega_2(f, t)_p."""
    t = as_fraction(t)
    p = _exponent(p, "p")
    best = 0.0
    for i in range(1, subdivisions + 1):
        d = t * i / subdivisions
        if not is_dyadic(d):
            raise ValueError("the subdivision must keep delta dyadic (use a power of two)")
        best = max(best, _diff_norm(f, d, p))
    return best


def ref_besov_norm(f, params, J: int, subdivisions: int = 8) -> NormReport:
    """``||f||_p + (sum_{j=0..J} [2^{js} omega_2(f, 2^-j)_p]^q)^{1/q}`` by second differences."""
    params = as_params(params)
    if not 0 < params.s < 2:
        raise ValueError("second differences only characterize 0 < s < 2")
    base = lp_norm(f, params.p) if isinstance(f, ExactPiecewise) else f.lp_norm(params.p)
    terms = []
    for j in range(0, J + 1):
        w = modulus2(f, Fraction(1, 1 << j), params.p, subdivisions)
        terms.append((j, 2.0 ** (j * params.s) * w, None))
    semi, _, argmax, share = _combine_q(terms, params.q)
    return NormReport(float(base + semi), J, _tail(terms, params.q, argmax, share, J), "ref-besov",
                      params.to_json(), details={"lp": base, "seminorm": semi,
                                                 "subdivisions": subdivisions})


def _grid_derivative(f: GridFunction) -> GridFunction:
    if f.mode != "linear":
        raise ValueError("piecewise-constant grids jump at every cell")
    v = np.concatenate(([0], f.values, [0]))
    return GridFunction(f.level, f.offset - 1, np.diff(v) / f.h, "constant")


def w1p_norm(f, p) -> NormReport:
    """``||f||_p + ||f'||_p``; rejects functions with jumps."""
    p = _exponent(p, "p")
    if isinstance(f, GridFunction):
        d = _grid_derivative(f)
        value = f.lp_norm(p) + d.lp_norm(p)
        return NormReport(float(value), None, False, "w1p", {"p": _fmt_exp(p)})
    ac, jumps = f.derivative()
    if len(jumps):
        raise ValueError(f"f has a jump at {jumps.atoms[0][0]} and is not in W^1_p")
    value = lp_norm(f, p) + lp_norm(ac, p)
    ex = l1_exact(f) + l1_exact(ac) if p == 1.0 else None
    return NormReport(float(value), None, False, "w1p", {"p": _fmt_exp(p)}, exact=ex)


def bv_norm(f: ExactPiecewise) -> NormReport:
    """``||f||_1 + |f'|(R)`` (total variation of the distributional derivative)."""
    if not isinstance(f, ExactPiecewise):
        raise TypeError("bv_norm needs a real exact function")
    ex = l1_exact(f) + total_variation(f)
    return NormReport(float(ex), None, False, "bv", {"p": 1.0}, exact=ex)


def frame_sobolev_norm(f, p, J: int) -> NormReport:
    """``sup_{j>=-1} 2^{j(1-1/p)} (sum_mu c_{j,mu}^p)^{1/p}``; p = 1 is the BV variant."""
    p = _exponent(p, "p")
    params = SmoothnessParams(1.0, p, INF)
    r = b_norm(frame_coeffs(f, J), params, method="frame-bv" if p == 1 else "frame-sobolev")
    return _with(r, in_region=p >= 1)


# -- bootstrapping ------------------------------------------------------------------

@dataclass(frozen=True)
class BootstrapParams:
    """Weights ``lam = (l0, l1, l2)`` with smoothness parameters; ``rho = min(1, p, q)``."""

    lam: tuple
    s: float
    p: float
    q: float = INF

    def __post_init__(self):
        if len(self.lam) != 3:
            raise ValueError("lambda needs three entries")
        object.__setattr__(self, "lam", tuple(as_fraction(l) if not isinstance(l, complex) else l
                                              for l in self.lam))
        object.__setattr__(self, "p", _exponent(self.p, "p"))
        object.__setattr__(self, "q", _exponent(self.q, "q"))

    @property
    def rho(self) -> float:
        return min(1.0, self.p, self.q)

    @property
    def sigma(self) -> float:
        return self.s - (0.0 if math.isinf(self.p) else 1.0 / self.p)

    @property
    def admissible(self) -> bool:
        return abs(self.lam[1]) < 2.0 ** self.sigma

    @property
    def smoothness(self) -> SmoothnessParams:
        return SmoothnessParams(self.s, self.p, self.q)


def bootstrap_constant(bp: BootstrapParams) -> float:
    """``((|l0|^r + |l2|^r) / (2^{sigma r} - |l1|^r) + 1)^{1/r}``."""
    if not bp.admissible:
        raise ValueError("need |lambda_1| < 2^(s - 1/p)")
    r = bp.rho
    l0, l1, l2 = (float(abs(l)) for l in bp.lam)
    return ((l0 ** r + l2 ** r) / (2.0 ** (bp.sigma * r) - l1 ** r) + 1.0) ** (1.0 / r)


class BootstrapViolation(ValueError):
    def __init__(self, j: int, nu: int, lhs, rhs):
        super().__init__(f"|a[{j},{2 * nu + 1}]| = {lhs} exceeds the bound {rhs} (j={j}, nu={nu})")
        self.j, self.nu, self.lhs, self.rhs = j, nu, lhs, rhs


@dataclass(frozen=True)
class BootstrapReport:
    norm: float
    norm_even: float
    ratio: float
    C: float
    holds: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _odd_bound(a: CoeffArray, lam, j: int, nu: int):
    return sum(abs(l) * abs(a[j + 1, 4 * nu + 2 + i]) for i, l in enumerate(lam))


def bootstrap_check(a: CoeffArray, bp: BootstrapParams):
    """First (j, nu) where the odd-entry bound fails, or None."""
    for j in a.levels:
        if j < 0:
            continue
        start, vals = a.level(j)
        for i, v in enumerate(vals):
            mu = start + i
            if mu % 2 == 0:
                continue
            nu = (mu - 1) // 2
            rhs = _odd_bound(a, bp.lam, j, nu)
            if abs(v) > rhs:
                return j, nu, abs(v), rhs
    return None


def even_part(a: CoeffArray) -> CoeffArray:
    entries = {(j, mu): v for j, mu, v in a.items() if mu % 2 == 0}
    if not entries:
        return CoeffArray({}, a.max_level, parity="none")
    return CoeffArray.from_dict(entries, a.max_level, parity="none")


def bootstrap_verify(a: CoeffArray, bp: BootstrapParams) -> BootstrapReport:
    """Check the odd-entry hypothesis, then compare ``||a||`` with ``C ||a_even||`` (levels j >= 0)."""
    bad = bootstrap_check(a, bp)
    if bad is not None:
        raise BootstrapViolation(*bad)
    C = bootstrap_constant(bp)
    sp = bp.smoothness
    n = b_norm(a, sp, min_level=0).value
    ne = b_norm(even_part(a), sp, min_level=0).value
    ratio = n / ne if ne > 0 else (1.0 if n == 0 else INF)
    return BootstrapReport(n, ne, ratio, C, n <= C * ne * (1 + 1e-12))


def bootstrap_sample(rng: np.random.Generator, bp: BootstrapParams, J: int = 6,
                     width: int = 4, denominator: int = 64) -> CoeffArray:
    """Random sequence on levels 0..J meeting the hypothesis with equality at every odd entry.

    Even entries are random rationals on ``2^j width`` positions, scaled by
    about ``2^{-j sigma}`` so that all levels compete for the supremum, and
    zeroed with a random sparsity.  Odd entries at the finest level are 0 and
    each coarser odd entry is set to its upper bound.
    """
    entries: dict = {}
    sparsity = float(rng.choice([0.0, 0.5, 0.9]))
    for j in range(J, -1, -1):
        n = width << j
        scale = Fraction(max(1, round(denominator * 2.0 ** (-j * bp.sigma))), denominator)
        evens = rng.integers(-denominator, denominator + 1, size=n)
        keep = rng.random(n) >= sparsity
        for k in range(n):
            entries[(j, 2 * k)] = Fraction(int(evens[k]) * int(keep[k]), denominator) * scale
        for nu in range(n):
            if j == J:
                entries[(j, 2 * nu + 1)] = Fraction(0)
            else:
                entries[(j, 2 * nu + 1)] = sum(
                    (abs(l) * abs(entries.get((j + 1, 4 * nu + 2 + i), Fraction(0)))
                     for i, l in enumerate(bp.lam)), Fraction(0))
    return CoeffArray.from_dict(entries, J, parity="none")
