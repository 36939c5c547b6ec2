"""Haar atoms, shifted atoms, analysis pyramids, frame coefficients and synthesis."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .coeffs import CoeffArray
from .dyadic import ExactPiecewise, pint, peval, step_function
from .grid import GridFunction


@dataclass(frozen=True)
class HaarIndex:
    """Index of ``h~_{j, 2 mu + parity}``; parity 0 is the ordinary atom ``h_{j, mu}``."""

    j: int
    mu: int
    parity: int = 0

    def __post_init__(self):
        if self.j < -1:
            raise ValueError("level must be >= -1")
        if self.parity not in (0, 1):
            raise ValueError("parity must be 0 (even) or 1 (odd)")
        if self.j == -1 and self.parity == 1:
            raise ValueError("level -1 has no odd atoms")

    @property
    def nu(self) -> int:
        return 2 * self.mu + self.parity


def haar_atom(j, mu: int | None = None, parity: int = 0) -> ExactPiecewise:
    """``h_{j,mu}`` (parity 0), its half-cell shift ``h~_{j,2mu+1}`` (parity 1),
    or ``1_[mu, mu+1)`` at level -1.  Accepts a :class:`HaarIndex` as well."""
    idx = j if isinstance(j, HaarIndex) else HaarIndex(j, mu, 1 if parity in (1, "odd") else 0)
    if idx.j == -1:
        return ExactPiecewise([idx.mu, idx.mu + 1], [(1,)])
    h = Fraction(1, 1 << (idx.j + 1))
    a = 2 * idx.mu * h + idx.parity * h
    return ExactPiecewise([a, a + h, a + 2 * h], [(1,), (-1,)])


def shifted_haar_atom(j: int, nu: int) -> ExactPiecewise:
    """``h~_{j,nu}(x) = h(2^j x - nu/2)``."""
    return haar_atom(HaarIndex(j, nu >> 1, nu & 1))


# -- cell integrals ----------------------------------------------------------------

def _window(f) -> tuple[int, int]:
    # unit cells [u0, u1) holding the support with one empty cell on each side
    a, b = f.support
    return math.floor(a) - 1, math.ceil(b) + 1


def _exact_cell_sums(f: ExactPiecewise, m: int, u0: int, u1: int):
    """Integer numerators of the integrals over I_{m,k}, k = u0 2^m .. u1 2^m - 1,
    and their common denominator."""
    scale = 1 << m
    k0, k1 = u0 * scale, u1 * scale
    pieces = []
    acc = Fraction(0)
    for a, b, p in f.cells():
        P = pint(p)
        pieces.append((a, b, P, acc - peval(P, a)))
        acc += peval(P, b) - peval(P, a)
    d = max((len(P) - 1 for _, _, P, _ in pieces), default=0)
    den = 1
    for _, _, P, c in pieces:
        for v in (*P, c, acc):
            den = math.lcm(den, v.denominator)
    D = den << (m * d)
    # cumulative integral F(k / 2^m) * D for k in k0..k1
    F = np.zeros(k1 - k0 + 1, dtype=object)
    F[:] = 0
    for a, b, P, c in pieces:
        ks = max(math.ceil(a * scale), k0)
        ke = min(math.ceil(b * scale) - 1, k1)
        if ke < ks:
            continue
        A = [int(v * den) for v in P] + [0] * (d + 1 - len(P))
        kk = np.arange(ks, ke + 1).astype(object)
        vals = np.full(len(kk), A[d], dtype=object)
        for n in range(d - 1, -1, -1):
            vals = vals * kk + (A[n] << (m * (d - n)))
        F[ks - k0: ke - k0 + 1] = vals + (int(c * den) << (m * d))
    tail = math.ceil(f.support[1] * scale)
    if tail <= k1:
        F[tail - k0:] = int(acc * den) << (m * d)
    return np.diff(F), D


def _cell_sums(f, m: int):
    """(u0, sums at level m over [u0, u1), denominator or None)."""
    if isinstance(f, ExactPiecewise):
        u0, u1 = _window(f)
        sums, D = _exact_cell_sums(f, m, u0, u1)
        return u0, sums, D
    if isinstance(f, GridFunction):
        if m > f.level:
            raise ValueError(f"grid level {f.level} too coarse for analysis at level {m - 1}")
        lo, hi = _window(f)
        start, ints = f.cell_integrals()
        scale = 1 << f.level
        buf = np.zeros((hi - lo) * scale, dtype=ints.dtype)
        buf[start - lo * scale: start - lo * scale + len(ints)] = ints
        r = 1 << (f.level - m)
        return lo, buf.reshape(-1, r).sum(axis=1), None
    raise TypeError(f"cannot analyze {type(f).__name__}")


def _pyramid(f, J: int):
    """Per level j = -1..J: (start, even, odd) coefficient arrays; level -1 has odd=None.

    ``even[i] = <f, h_{j, start+i}>`` and ``odd[i] = <f, h~_{j, 2(start+i)+1}>``.
    Exact inputs give Fractions.
    """
    if J < -1:
        raise ValueError("J must be >= -1")
    m = J + 1
    empty = {j: (0, np.zeros(0, dtype=object), None if j < 0 else np.zeros(0, dtype=object))
             for j in range(-1, J + 1)}
    if (isinstance(f, ExactPiecewise) and f.is_zero()) or (isinstance(f, GridFunction) and f.n == 0):
        return empty
    u0, sums, D = _cell_sums(f, m)
    stages = _kernels.haar_pyramid(sums, m)
    out = {}
    conv = (lambda a: a) if D is None else (lambda a: np.array([Fraction(int(v), D) for v in a], dtype=object))
    for i, (s, even, odd) in enumerate(stages[:-1]):
        j = m - 1 - i
        out[j] = (u0 << j, conv(even), conv(odd))
    out[-1] = (u0, conv(stages[-1][0]), None)
    return out


def _direct(f, J: int, parity: int):
    """Slow path: one inner product per atom overlapping the support."""
    out = {}
    pair = f.inner
    u0, u1 = _window(f) if not (isinstance(f, ExactPiecewise) and f.is_zero()) else (0, 0)
    for j in range(0 if parity else -1, J + 1):
        lev = max(j, 0)
        lo, hi = u0 << lev, u1 << lev
        vals = [pair(haar_atom(j, mu, parity)) for mu in range(lo, hi)]
        arr = np.array(vals, dtype=object) if isinstance(f, ExactPiecewise) else np.array(vals)
        out[j] = (lo, arr)
    return out


def analyze(f, J: int, method: str = "fast") -> CoeffArray:
    """Haar coefficients ``<f, h_{j,mu}>`` for j = -1..J (level -1: ``<f, 1_[mu,mu+1)>``).

    Parameters
    ----------
    f : ExactPiecewise or GridFunction
        Compactly supported input; grid inputs need ``J < f.level``.
    J : int
        Finest level.
    method : {"fast", "direct"}
        Cell-integral pyramid or one inner product per atom.  Both are exact on
        exact inputs.
    """
    if method == "direct":
        return CoeffArray(_direct(f, J, 0), J, parity="even")
    if method != "fast":
        raise ValueError(f"unknown method {method!r}")
    pyr = _pyramid(f, J)
    return CoeffArray({j: (start, even) for j, (start, even, _) in pyr.items()}, J, parity="even")


def analyze_shifted(f, J: int, method: str = "fast") -> CoeffArray:
    """Shifted-atom coefficients ``<f, h~_{j,2mu+1}>`` for j = 0..J, keyed by mu."""
    if method == "direct":
        return CoeffArray(_direct(f, J, 1), J, parity="odd")
    if method != "fast":
        raise ValueError(f"unknown method {method!r}")
    pyr = _pyramid(f, J)
    return CoeffArray({j: (start, odd) for j, (start, _, odd) in pyr.items() if j >= 0}, J, parity="odd")


def _abs(arr):
    if arr.dtype == object:
        return np.array([abs(v) for v in arr], dtype=object)
    return np.abs(arr)


def frame_coeffs(f, J: int) -> CoeffArray:
    """``c_{j,mu} = 2^j (|<f, h~_{j,2mu}>| + |<f, h~_{j,2mu+1}>|)``; level -1 is ``|<f, 1_[mu,mu+1)>|``."""
    pyr = _pyramid(f, J)
    levels = {}
    for j, (start, even, odd) in pyr.items():
        if j < 0:
            levels[j] = (start, _abs(even))
        elif even.dtype == object:
            levels[j] = (start, (_abs(even) + _abs(odd)) * (1 << j))
        else:
            levels[j] = (start, (np.abs(even) + np.abs(odd)) * 2.0 ** j)
    return CoeffArray(levels, J, scaled=True, parity="frame")


def synthesize(beta: CoeffArray) -> ExactPiecewise:
    """The finite sum of ``beta[j, mu] h_{j,mu}``.

    Entries are taken as expansion coefficients whatever the ``scaled`` flag,
    so ``analyze(f, J).scaled_by_2j()`` synthesizes back to f.
    """
    entries = list(beta.items())
    if not entries:
        return ExactPiecewise()
    m = max(max(j for j, _, _ in entries) + 1, 0)
    cell = lambda j, mu: mu << (m - max(j, 0))  # noqa: E731
    lo = min(cell(j, mu) for j, mu, _ in entries)
    hi = max(cell(j, mu + 1) for j, mu, _ in entries)
    vals = np.zeros(hi - lo, dtype=object)
    vals[:] = Fraction(0)
    for j, mu, v in entries:
        v = Fraction(v) if not isinstance(v, Fraction) else v
        a, b = cell(j, mu) - lo, cell(j, mu + 1) - lo
        if j < 0:
            vals[a:b] += v
        else:
            mid = (a + b) // 2
            vals[a:mid] += v
            vals[mid:b] -= v
    return step_function(m, lo, list(vals))
