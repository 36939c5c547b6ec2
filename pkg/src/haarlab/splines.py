"""B-splines, hat functions, the Chui-Wang wavelet and its dual coefficients."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np
from scipy.linalg import solve_banded

from .coeffs import CoeffArray
from .dyadic import ExactPiecewise, indicator
from .grid import GridFunction
from .haar import haar_atom, shifted_haar_atom


@dataclass(frozen=True)
class BSpline:
    """Cardinal B-spline ``N_m`` of order m (support [0, m], degree m - 1)."""

    m: int
    f: ExactPiecewise

    def __call__(self, x):
        return self.f(x)

    def translate(self, k) -> ExactPiecewise:
        return self.f.shift(k)


def _convolve_box(f: ExactPiecewise, top) -> ExactPiecewise:
    # (f * 1_[0,1))(x) = F(x) - F(x - 1), F the antiderivative (constant beyond the support)
    F = f.antiderivative() + indicator(top, top + 2, f.integrate())
    return (F - F.shift(1)).restrict(0, top + 1)


def bspline(m: int) -> BSpline:
    """``N_1 = 1_[0,1)``, ``N_m = N_{m-1} * 1_[0,1)`` by exact convolution."""
    if not 1 <= m <= 4:
        raise ValueError("B-spline order must be in 1..4")
    f = indicator(0, 1)
    for k in range(2, m + 1):
        f = _convolve_box(f, k - 1)
    return BSpline(m, f)


def hat(j: int, mu: int) -> ExactPiecewise:
    """``N_{2;j,mu}(x) = N_2(2^j x - mu)``, supported on ``[2^-j mu, 2^-j (mu + 2)]``."""
    return bspline(2).f.dilate(j, mu)


@dataclass(frozen=True)
class Refinement:
    """Two-scale expansion of a hat: ``terms`` are (weight, level, index)."""

    j: int
    mu: int
    terms: tuple
    expansion: ExactPiecewise
    residual: ExactPiecewise

    @property
    def exact(self) -> bool:
        return self.residual.is_zero()


def refine_hat(j: int, mu: int) -> Refinement:
    """``N_{j,mu} = 1/2 N_{j+1,2mu} + N_{j+1,2mu+1} + 1/2 N_{j+1,2mu+2}`` with its residual."""
    terms = ((Fraction(1, 2), j + 1, 2 * mu), (Fraction(1), j + 1, 2 * mu + 1),
             (Fraction(1, 2), j + 1, 2 * mu + 2))
    rhs = ExactPiecewise()
    for w, lev, n in terms:
        rhs = rhs + hat(lev, n).scale(w)
    return Refinement(j, mu, terms, rhs, hat(j, mu) - rhs)


def refine_hat_weights(depth: int) -> list:
    """Weights of ``N_{0,0}`` in level-``depth`` hats, by repeating the two-scale rule."""
    w = {0: Fraction(1)}
    for _ in range(depth):
        nxt: dict = {}
        for n, c in w.items():
            for a, k in ((Fraction(1, 2), 2 * n), (Fraction(1), 2 * n + 1), (Fraction(1, 2), 2 * n + 2)):
                nxt[k] = nxt.get(k, 0) + a * c
        w = nxt
    lo = min(w)
    return [w[k] for k in range(lo, max(w) + 1)]


# -- Chui-Wang ---------------------------------------------------------------------

def chui_wang_b() -> tuple:
    """Coefficients of psi in the half-scale hats, from the N_4'' expansion."""
    n4 = bspline(4).f
    b = [Fraction(0)] * 5
    for l in range(3):
        w = (-1) ** l * n4(l + 1) / 2
        for j in range(3):
            b[j + l] += w * (-1) ** j * comb(2, j)
    return tuple(b)


def _psi_from_b(b) -> ExactPiecewise:
    out = ExactPiecewise()
    for k, bk in enumerate(b):
        out = out + hat(1, k).scale(bk)
    return out


@dataclass(frozen=True)
class ChuiWangSystem:
    """Chui-Wang wavelet data.

    Attributes
    ----------
    psi : ExactPiecewise
        ``sum_k b_k N_2(2x - k)``, supported in [0, 3].
    b : tuple of Fraction
        k = 0..4.
    gram : dict
        ``g_k = <psi, psi(. - k)>`` for k = -2..2 (zero beyond).
    a : ndarray
        Dual coefficients ``a_k`` for k = -K..K (``a[K + k]``).
    K, tol, residual
        Truncation window, requested tolerance and the achieved
        biorthogonality residual ``max_n |sum_k a_k g_{n-k} - delta_n0|``.
    """

    psi: ExactPiecewise
    b: tuple
    gram: dict
    a: np.ndarray = field(repr=False)
    K: int
    tol: float
    residual: float

    def a_k(self, k: int) -> float:
        return float(self.a[self.K + k]) if abs(k) <= self.K else 0.0

    def psi_jmu(self, j: int, mu: int) -> ExactPiecewise:
        """``psi(2^j x - mu)`` for j >= 0, ``N_2(x - mu)`` for j = -1."""
        if j == -1:
            return hat(0, mu)
        return self.psi.dilate(j, mu)

    def dual_wavelet(self, level: int = 6) -> GridFunction:
        """``psi* = sum_{|k|<=K} a_k psi(. - k)`` as a linear grid function (exact for level >= 1)."""
        if level < 1:
            raise ValueError("psi is linear on half-integer cells; need level >= 1")
        r = 1 << level
        base = np.array([float(self.psi(Fraction(i, r))) for i in range(0, 3 * r + 1)])
        n = (2 * self.K + 3) * r + 1
        vals = np.zeros(n)
        for i, k in enumerate(range(-self.K, self.K + 1)):
            vals[i * r: i * r + len(base)] += self.a[i] * base
        return GridFunction(level, -self.K * r, vals, "linear").trim()

    def a_csv(self) -> str:
        lines = [f"# K={self.K} tol={self.tol!r} residual={self.residual!r}", "k,a_k"]
        lines += [f"{k},{self.a_k(k)!r}" for k in range(-self.K, self.K + 1)]
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "b": [str(v) for v in self.b],
            "gram": {str(k): str(v) for k, v in sorted(self.gram.items())},
            "K": self.K,
            "tol": self.tol,
            "residual": self.residual,
            "a": [float(v) for v in self.a],
        }


def gram_coeffs(psi: ExactPiecewise) -> dict:
    return {k: psi.inner(psi.shift(k)) for k in range(-2, 3)}


def _toeplitz_residual(a: np.ndarray, g: dict) -> float:
    # max over every n where the convolution can be non-zero
    full = np.zeros(len(a) + 4)
    for k, gk in g.items():
        full[2 + k: 2 + k + len(a)] += float(gk) * a
    full[len(full) // 2] -= 1.0
    return float(np.max(np.abs(full)))


def dual_coeffs(tol: float = 1e-10, gram: dict | None = None, K0: int = 20, Kmax: int = 200):
    """Solve ``sum_k a_k g_{n-k} = delta_{n0}`` on [-K, K] (banded), doubling K until
    ``|a_{+-K}| < tol``.

    Returns ``(a, K, residual)`` with ``a[K + k] = a_k``.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    g = gram if gram is not None else gram_coeffs(_psi_from_b(chui_wang_b()))
    K = K0
    while True:
        n = 2 * K + 1
        ab = np.zeros((5, n))
        for k in range(-2, 3):
            # banded storage: ab[2 + i - j, j] = A[i, j] = g_{i-j}
            ab[2 - k, :] = float(g[-k]) if abs(k) <= 2 else 0.0
        rhs = np.zeros(n)
        rhs[K] = 1.0
        a = solve_banded((2, 2), ab, rhs)
        if not np.all(np.isfinite(a)):
            raise RuntimeError("dual coefficient system is numerically singular")
        if max(abs(a[0]), abs(a[-1])) < tol or K >= Kmax:
            break
        K = min(2 * K, Kmax)
    return a, K, _toeplitz_residual(a, g)


def chui_wang_mother(tol: float = 1e-10) -> ChuiWangSystem:
    b = chui_wang_b()
    psi = _psi_from_b(b)
    g = gram_coeffs(psi)
    a, K, res = dual_coeffs(tol, g)
    return ChuiWangSystem(psi, b, g, a, K, tol, res)


# -- wavelet analysis ----------------------------------------------------------------

def _hat_pairings_grid(f: GridFunction, m: int):
    """(start, H) with ``H[i] = <f, N_{2;m,start+i}>`` for a linear grid f at level >= m."""
    if f.mode != "linear":
        raise ValueError("wavelet analysis of grids needs linear interpolation")
    L = f.level
    v = np.concatenate(([0, 0], f.values, [0, 0]))
    # load vector at nodes offset-1 .. offset+n: <f, level-L hat centred there>
    load = f.h / 6.0 * (v[:-2] + 4 * v[1:-1] + v[2:])
    start = f.offset - 1 - 1  # N_{2;L,n} is centred at node n+1
    H = load
    for _ in range(L - m):
        # pad so coarse hats overlapping either end are kept, align start to even,
        # then apply the two-scale rule
        H = np.concatenate(([0, 0], H))
        start -= 2
        if start % 2:
            H = np.concatenate(([0], H))
            start -= 1
        H = np.concatenate((H, [0, 0, 0]))
        nc = (len(H) - 1) // 2
        H = 0.5 * H[0:2 * nc:2] + H[1:2 * nc + 1:2] + 0.5 * H[2:2 * nc + 2:2]
        start //= 2
    return start, H


def _hat_pairings_exact(f: ExactPiecewise, m: int):
    a, b = f.support
    lo = math.floor(a * (1 << m)) - 2
    hi = math.ceil(b * (1 << m)) + 1
    return lo, np.array([f.inner(hat(m, n)) for n in range(lo, hi)], dtype=object)


def cw_analyze(f, J: int, system: ChuiWangSystem | None = None) -> CoeffArray:
    """``2^j <f, psi_{j,mu}>`` for j = 0..J and ``<f, N_2(. - mu)>`` at level -1."""
    system = system or chui_wang_mother()
    exact = isinstance(f, ExactPiecewise)
    if exact and f.is_zero():
        return CoeffArray({}, J, scaled=True, parity="wavelet")
    if isinstance(f, GridFunction) and f.level < J + 1:
        raise ValueError("grid too coarse for the requested level")
    pair = _hat_pairings_exact if exact else _hat_pairings_grid
    b = system.b if exact else tuple(float(x) for x in system.b)
    levels = {}
    start, H = pair(f, 0)
    levels[-1] = (start, H)
    for j in range(0, J + 1):
        start, H = pair(f, j + 1)
        # psi_{j,mu} = sum_k b_k N_{2;j+1,2mu+k}
        mu0 = -((-start) // 2)
        mu1 = (start + len(H) - 1) // 2
        vals = []
        for mu in range(mu0 - 2, mu1 + 1):
            acc = 0
            for k, bk in enumerate(b):
                i = 2 * mu + k - start
                if 0 <= i < len(H):
                    acc = acc + bk * H[i]
            vals.append(acc * (1 << j))
        arr = np.array(vals, dtype=object) if exact else np.array(vals)
        levels[j] = (mu0 - 2, arr)
    return CoeffArray(levels, J, scaled=True, parity="wavelet")


def derivative_identity_check(f: ExactPiecewise, j: int, nu: int) -> tuple:
    """Both sides of ``<f', N_{2;j,nu}> = -2^j <f, h~_{j-1,nu}>`` (j >= 1), or of
    ``<f', N_{2;0,nu}> = -<f, 1_[nu,nu+1)> + <f, 1_[nu+1,nu+2)>`` (j = 0), exactly."""
    if j < 0:
        raise ValueError("j must be >= 0")
    N = hat(j, nu)
    lo, hi = N.support
    ac, jumps = f.derivative()
    inside = [x for x, _ in jumps if lo < x < hi]
    if inside:
        raise ValueError(f"f jumps at {inside[0]} inside the hat support")
    lhs = ac.inner(N)
    if j == 0:
        rhs = -f.inner(haar_atom(-1, nu)) + f.inner(haar_atom(-1, nu + 1))
    else:
        rhs = -(1 << j) * f.inner(shifted_haar_atom(j - 1, nu))
    return lhs, rhs
