"""Sampled functions on a uniform dyadic grid."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .dyadic import ExactPiecewise, as_fraction, is_dyadic

_G3 = np.polynomial.legendre.leggauss(3)
_G6 = np.polynomial.legendre.leggauss(6)


def _unit_rule(rule):
    x, w = rule
    return 0.5 * (x + 1.0), 0.5 * w


G3_NODES, G3_WEIGHTS = _unit_rule(_G3)
G6_NODES, G6_WEIGHTS = _unit_rule(_G6)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples ``values[i]`` at ``x_i = 2**-level * (offset + i)``.

    ``mode="linear"``: the continuous piecewise-linear function with these
    nodal values and value 0 at every other grid node, so the support is
    ``[x_0 - h, x_{n-1} + h]``.  ``mode="constant"``: ``values[i]`` on
    ``[x_i, x_i + h)``.
    """

    level: int
    offset: int
    values: np.ndarray
    mode: str = "linear"

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("grid level must be >= 0")
        if self.mode not in ("linear", "constant"):
            raise ValueError(f"unknown interpolation mode {self.mode!r}")
        v = np.array(self.values)
        if v.ndim != 1:
            raise ValueError("values must be one-dimensional")
        if not np.iscomplexobj(v):
            v = v.astype(np.float64)
        else:
            v = v.astype(np.complex128)
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "level", int(self.level))
        object.__setattr__(self, "offset", int(self.offset))

    # basic geometry
    @property
    def h(self) -> float:
        return 2.0 ** -self.level

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    def nodes(self) -> np.ndarray:
        return (self.offset + np.arange(self.n)) * self.h

    @property
    def support(self):
        h = Fraction(1, 1 << self.level)
        if self.mode == "linear":
            return (self.offset - 1) * h, (self.offset + self.n) * h
        return self.offset * h, (self.offset + self.n) * h

    def __repr__(self):
        a, b = self.support
        return f"GridFunction(level={self.level}, n={self.n}, support=[{a}, {b}], mode={self.mode})"

    # evaluation
    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.mode == "constant":
            idx = np.floor(x / self.h).astype(np.int64) - self.offset
            ok = (idx >= 0) & (idx < self.n)
            out = np.zeros(x.shape, dtype=self.values.dtype)
            out[ok] = self.values[idx[ok]]
            return out
        xs = (self.offset - 1 + np.arange(self.n + 2)) * self.h
        ys = np.concatenate(([0], self.values, [0]))
        if self.is_complex:
            return np.interp(x, xs, ys.real, 0, 0) + 1j * np.interp(x, xs, ys.imag, 0, 0)
        return np.interp(x, xs, ys, 0.0, 0.0)

    # exact linear functionals of the interpolant
    def cell_integrals(self):
        """(first cell index, integrals over consecutive level-L cells)."""
        if self.mode == "linear":
            return self.offset - 1, _kernels.linear_cell_integrals(self.values, self.h)
        return self.offset, self.h * self.values

    def integrate(self, a=None, b=None):
        if a is None and b is None:
            return complex(np.sum(self.cell_integrals()[1])) if self.is_complex else float(
                np.sum(self.cell_integrals()[1]))
        lo, hi = self.support
        lo = lo if a is None else max(lo, as_fraction(a))
        hi = hi if b is None else min(hi, as_fraction(b))
        if not lo < hi:
            return 0.0
        return self.inner(ExactPiecewise([lo, hi], [(1,)]))

    def refine(self, k: int = 1) -> "GridFunction":
        """The same function sampled 2**k times more finely (exact)."""
        if k <= 0:
            return self
        r = 1 << k
        if self.mode == "constant":
            return GridFunction(self.level + k, self.offset * r, np.repeat(self.values, r), "constant")
        first = (self.offset - 1) * r + 1
        last = (self.offset + self.n) * r - 1
        x = np.arange(first, last + 1) * 2.0 ** -(self.level + k)
        return GridFunction(self.level + k, first, self(x), "linear")

    def at_level(self, level: int) -> "GridFunction":
        if level < self.level:
            raise ValueError("cannot coarsen a grid function exactly")
        return self.refine(level - self.level)

    def trim(self) -> "GridFunction":
        nz = np.flatnonzero(self.values)
        if nz.size == 0:
            return GridFunction(self.level, 0, np.zeros(0, dtype=self.values.dtype), self.mode)
        return GridFunction(self.level, self.offset + nz[0], self.values[nz[0]: nz[-1] + 1], self.mode)

    # arithmetic
    def _aligned(self, other: "GridFunction"):
        if other.mode != self.mode:
            raise ValueError("cannot combine grid functions with different modes")
        level = max(self.level, other.level)
        a, b = self.at_level(level), other.at_level(level)
        lo = min(a.offset, b.offset)
        hi = max(a.offset + a.n, b.offset + b.n)
        dtype = np.result_type(a.values, b.values)
        va = np.zeros(hi - lo, dtype=dtype)
        vb = np.zeros(hi - lo, dtype=dtype)
        va[a.offset - lo: a.offset - lo + a.n] = a.values
        vb[b.offset - lo: b.offset - lo + b.n] = b.values
        return level, lo, va, vb

    def __add__(self, other):
        if not isinstance(other, GridFunction):
            return NotImplemented
        level, lo, va, vb = self._aligned(other)
        return GridFunction(level, lo, va + vb, self.mode)

    def __sub__(self, other):
        if not isinstance(other, GridFunction):
            return NotImplemented
        level, lo, va, vb = self._aligned(other)
        return GridFunction(level, lo, va - vb, self.mode)

    def __neg__(self):
        return GridFunction(self.level, self.offset, -self.values, self.mode)

    def __mul__(self, c):
        if isinstance(c, (GridFunction, ExactPiecewise)):
            return NotImplemented
        return GridFunction(self.level, self.offset, self.values * c, self.mode)

    __rmul__ = __mul__

    def shift_cells(self, k: int) -> "GridFunction":
        """x -> f(x - k h)."""
        return GridFunction(self.level, self.offset + k, self.values, self.mode)

    def reflect(self) -> "GridFunction":
        """x -> f(-x); for constant mode the half-open convention flips."""
        if self.mode == "linear":
            return GridFunction(self.level, -(self.offset + self.n - 1), self.values[::-1], "linear")
        return GridFunction(self.level, -(self.offset + self.n), self.values[::-1], "constant")

    def second_difference(self, delta) -> "GridFunction":
        d = as_fraction(delta)
        if d <= 0:
            raise ValueError("delta must be positive")
        if not is_dyadic(d):
            raise ValueError("delta must be a dyadic rational")
        g = self
        while (d * (1 << g.level)).denominator != 1:
            g = g.refine(1)
        k = int(d * (1 << g.level))
        return GridFunction(g.level, g.offset - 2 * k, _kernels.second_difference(g.values, k), g.mode)

    def expectation(self, N: int) -> "GridFunction":
        g = self.at_level(max(N, self.level))
        start, sums = g.cell_integrals()
        r = 1 << (g.level - N)
        lo = math.floor(start / r)
        pad_left = start - lo * r
        total = pad_left + len(sums)
        hi = -(-total // r)
        buf = np.zeros(hi * r, dtype=sums.dtype)
        buf[pad_left: pad_left + len(sums)] = sums
        means = buf.reshape(hi, r).sum(axis=1) * 2.0 ** N
        return GridFunction(N, lo, means, "constant")

    # norms and pairings
    def lp_norm(self, p, domain=None, with_error: bool = False):
        p = float(p)
        g = self
        if domain is not None:
            g = g._restricted(*domain)
        err = 0.0
        if g.mode == "constant":
            total = _kernels.lp_power_constant(g.values, g.h, p)
        else:
            total = _kernels.lp_power_linear(g.values, g.h, p, G6_NODES, G6_WEIGHTS)
            if with_error and not (math.isinf(p) or p == 2 or (p == 1 and not g.is_complex)):
                coarse = _kernels.lp_power_linear(g.values, g.h, p, G3_NODES, G3_WEIGHTS)
                err = abs(total - coarse)
        if math.isinf(p):
            val = total
        else:
            val = total ** (1.0 / p)
            if total > 0:
                err = err * total ** (1.0 / p - 1.0) / p
        return (val, err) if with_error else val

    def _restricted(self, a, b) -> "GridFunction":
        # piecewise-constant functions restrict cellwise; the linear
        # interpolant is first refined so both ends are grid nodes, then
        # represented in constant mode only if it already was
        a, b = as_fraction(a), as_fraction(b)
        g = self
        while g.level < 60 and ((a * (1 << g.level)).denominator != 1 or (b * (1 << g.level)).denominator != 1):
            g = g.refine(1)
        ia, ib = int(a * (1 << g.level)), int(b * (1 << g.level))
        if g.mode == "constant":
            lo, hi = max(ia, g.offset), min(ib, g.offset + g.n)
            if hi <= lo:
                return GridFunction(g.level, lo, np.zeros(0), "constant")
            return GridFunction(g.level, lo, g.values[lo - g.offset: hi - g.offset], "constant")
        raise NotImplementedError(
            "restricting a linear grid function would introduce jumps; use an exact function"
        )

    def inner(self, g) -> complex | float:
        """Integral of self * conj(g), exact for the interpolants (3-point Gauss per piece)."""
        if isinstance(g, GridFunction):
            if g.mode == self.mode == "linear" and g.level == self.level:
                return self._mass_inner(g)
            pts = _merge_points(self._knots(), g._knots())
            ev = g
        elif isinstance(g, ExactPiecewise):
            if g.is_zero():
                return 0.0
            pts = _merge_points(self._knots(), np.array([float(b) for b in g.breakpoints]))
            ev = g.evaluate
        else:
            raise TypeError(f"cannot pair a grid function with {type(g).__name__}")
        if pts.size < 2:
            return 0.0
        a, b = pts[:-1], pts[1:]
        w = b - a
        total = 0.0
        for t, wt in zip(G3_NODES, G3_WEIGHTS):
            x = a + t * w
            total = total + np.sum(wt * w * self(x) * np.conj(ev(x)))
        return total

    def _knots(self) -> np.ndarray:
        if self.mode == "linear":
            return (self.offset - 1 + np.arange(self.n + 2)) * self.h
        return (self.offset + np.arange(self.n + 1)) * self.h

    def _mass_inner(self, g: "GridFunction"):
        level, lo, va, vb = self._aligned(g)
        pa = np.concatenate(([0], va, [0]))
        pb = np.conj(np.concatenate(([0], vb, [0])))
        h = 2.0 ** -level
        return h / 6.0 * np.sum(2 * pa[:-1] * pb[:-1] + pa[:-1] * pb[1:] + pa[1:] * pb[:-1] + 2 * pa[1:] * pb[1:])

    # constructors and JSON
    @classmethod
    def from_function(cls, fn, level: int, a, b, mode: str = "linear") -> "GridFunction":
        """Sample ``fn`` at the grid nodes of [a, b] (linear) or cell left ends (constant)."""
        scale = 2 ** level
        i0 = math.ceil(as_fraction(a) * scale)
        i1 = math.floor(as_fraction(b) * scale)
        if mode == "constant":
            i1 -= 1
        x = np.arange(i0, i1 + 1) * 2.0 ** -level
        return cls(level, i0, np.asarray(fn(x)), mode)

    @classmethod
    def from_exact(cls, f: ExactPiecewise, level: int, mode: str = "linear") -> "GridFunction":
        """Linear: nodal samples of f.  Constant: exact cell averages of f."""
        if f.is_zero():
            return cls(level, 0, np.zeros(0), mode)
        a, b = f.support
        scale = 1 << level
        if mode == "linear":
            i0, i1 = math.floor(a * scale), math.ceil(b * scale)
            vals = [float(f(Fraction(i, scale))) for i in range(i0, i1 + 1)]
            return cls(level, i0, np.array(vals), "linear").trim()
        i0, i1 = math.floor(a * scale), math.ceil(b * scale)
        vals = [float(f.integrate(Fraction(i, scale), Fraction(i + 1, scale)) * scale) for i in range(i0, i1)]
        return cls(level, i0, np.array(vals), "constant")

    def to_json(self) -> dict:
        if self.is_complex:
            vals = [[float(z.real), float(z.imag)] for z in self.values]
        else:
            vals = [float(v) for v in self.values]
        return {"type": "grid_function", "level": self.level, "offset": self.offset,
                "mode": self.mode, "values": vals}

    @classmethod
    def from_json(cls, obj: dict) -> "GridFunction":
        vals = obj["values"]
        if vals and isinstance(vals[0], (list, tuple)):
            arr = np.array([complex(re, im) for re, im in vals])
        else:
            arr = np.array(vals, dtype=float)
        return cls(obj["level"], obj["offset"], arr, obj.get("mode", "linear"))


def _merge_points(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    if p.size == 0 or q.size == 0:
        return np.zeros(0)
    lo = max(p[0], q[0])
    hi = min(p[-1], q[-1])
    if not lo < hi:
        return np.zeros(0)
    pts = np.concatenate((p[(p > lo) & (p < hi)], q[(q > lo) & (q < hi)], [lo, hi]))
    return np.unique(pts)
