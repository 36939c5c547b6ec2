"""Exact piecewise polynomials on dyadic partitions of the real line.

Everything here is rational arithmetic on :class:`fractions.Fraction`.
Floating point only appears in :func:`lp_norm` for exponents without a
closed form, and in the float evaluation helpers used for plotting and for
pairing against sampled data.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from numbers import Rational
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_DEGREE = 3

Poly = tuple  # coefficients (c0, c1, ...) in powers of x, Fractions


def as_fraction(x) -> Fraction:
    """Convert ints, Fractions, finite floats, ratio strings and dyadics."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, DyadicRational):
        return x.value
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(float(x))
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def is_dyadic(x) -> bool:
    d = as_fraction(x).denominator
    return d & (d - 1) == 0


@total_ordering
@dataclass(frozen=True)
class DyadicRational:
    """The number ``numerator * 2**-exponent`` in canonical form."""

    numerator: int
    exponent: int = 0

    def __post_init__(self):
        n, e = int(self.numerator), int(self.exponent)
        if e < 0:
            raise ValueError("exponent must be non-negative")
        while e > 0 and n % 2 == 0:
            n //= 2
            e -= 1
        object.__setattr__(self, "numerator", n)
        object.__setattr__(self, "exponent", e)

    @classmethod
    def from_fraction(cls, x) -> "DyadicRational":
        x = as_fraction(x)
        d = x.denominator
        if d & (d - 1):
            raise ValueError(f"{x} is not a dyadic rational")
        return cls(x.numerator, d.bit_length() - 1)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __lt__(self, other):
        return self.value < as_fraction(other)

    def __float__(self):
        return float(self.value)

    def to_json(self) -> dict:
        return {"num": self.numerator, "exp": self.exponent}

    @classmethod
    def from_json(cls, obj) -> "DyadicRational":
        if isinstance(obj, dict):
            return cls(obj["num"], obj.get("exp", 0))
        return cls.from_fraction(obj)


@dataclass(frozen=True)
class DyadicInterval:
    """The half-open interval I_{j,mu} = [2^-j mu, 2^-j (mu+1)).

    Level -1 follows the Haar convention I_{-1,mu} = [mu, mu+1).
    """

    level: int
    index: int

    def __post_init__(self):
        if self.level < -1:
            raise ValueError("level must be >= -1")

    @property
    def left(self) -> Fraction:
        if self.level < 0:
            return Fraction(self.index)
        return Fraction(self.index, 1 << self.level)

    @property
    def right(self) -> Fraction:
        if self.level < 0:
            return Fraction(self.index + 1)
        return Fraction(self.index + 1, 1 << self.level)

    @property
    def length(self) -> Fraction:
        return self.right - self.left

    def __contains__(self, x) -> bool:
        return self.left <= as_fraction(x) < self.right


# -- polynomial helpers on coefficient tuples --------------------------------

def _trim(c) -> Poly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def padd(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return _trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def pscale(a: Poly, s) -> Poly:
    return _trim(c * s for c in a)


def psub(a: Poly, b: Poly) -> Poly:
    return padd(a, pscale(b, -1))


def pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for k, y in enumerate(b):
                out[i + k] += x * y
    return _trim(out)


def peval(a: Poly, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def pder(a: Poly) -> Poly:
    return _trim(i * a[i] for i in range(1, len(a)))


def pint(a: Poly) -> Poly:
    """Antiderivative vanishing at 0."""
    return _trim([Fraction(0)] + [c / (i + 1) for i, c in enumerate(a)])


def pcompose(a: Poly, alpha, beta) -> Poly:
    """Return the coefficients of x -> a(alpha*x + beta)."""
    out: Poly = ()
    lin = _trim((as_fraction(beta), as_fraction(alpha)))
    for c in reversed(a):
        out = padd(pmul(out, lin), (c,))
    return out


def _real_roots_in(a: Poly, lo: Fraction, hi: Fraction) -> list:
    """Real roots of ``a`` strictly inside (lo, hi), sorted; exact when linear."""
    deg = len(a) - 1
    if deg < 1:
        return []
    if deg == 1:
        r = -a[0] / a[1]
        return [r] if lo < r < hi else []
    roots = np.roots([float(c) for c in reversed(a)])
    out = []
    flo, fhi = float(lo), float(hi)
    for r in roots:
        if abs(r.imag) <= 1e-12 * max(1.0, abs(r.real)) and flo < r.real < fhi:
            out.append(float(r.real))
    return sorted(out)


# -- piecewise polynomials ----------------------------------------------------

class ExactPiecewise:
    """Compactly supported piecewise polynomial with rational coefficients.

    Piece ``i`` lives on the half-open cell ``[breakpoints[i], breakpoints[i+1])``
    and is stored as coefficients in powers of ``x``.  The function vanishes
    outside ``[breakpoints[0], breakpoints[-1])``.  Instances are immutable and
    kept in a canonical form (no zero cells at the ends, no two adjacent cells
    carrying the same polynomial), so ``==`` is equality of functions up to
    the half-open endpoint convention.
    """

    __slots__ = ("_bps", "_pieces", "_float_cache")

    def __init__(self, breakpoints: Iterable = (), pieces: Iterable = ()):
        bps = [as_fraction(b) for b in breakpoints]
        polys = [_trim(as_fraction(c) for c in p) for p in pieces]
        if not polys:
            bps = []
        elif len(bps) != len(polys) + 1:
            raise ValueError("need exactly one more breakpoint than pieces")
        for a, b in zip(bps, bps[1:]):
            if not a < b:
                raise ValueError("breakpoints must be strictly increasing")
        for b in bps:
            if b.denominator & (b.denominator - 1):
                raise ValueError(f"breakpoint {b} is not dyadic")
        for p in polys:
            if len(p) - 1 > MAX_DEGREE:
                raise ValueError(f"piece degree {len(p) - 1} exceeds {MAX_DEGREE}")
        bps, polys = _canonical(bps, polys)
        self._bps = tuple(bps)
        self._pieces = tuple(polys)
        self._float_cache = None

    # construction helpers
    @classmethod
    def zero(cls) -> "ExactPiecewise":
        return cls()

    @classmethod
    def _raw(cls, bps, polys) -> "ExactPiecewise":
        # trusted internal constructor: skips validation but not canonicalisation
        obj = cls.__new__(cls)
        bps, polys = _canonical(list(bps), list(polys))
        obj._bps = tuple(bps)
        obj._pieces = tuple(polys)
        obj._float_cache = None
        return obj

    @property
    def breakpoints(self) -> tuple:
        return self._bps

    @property
    def pieces(self) -> tuple:
        return self._pieces

    @property
    def support(self):
        if not self._pieces:
            return None
        return self._bps[0], self._bps[-1]

    @property
    def degree(self) -> int:
        return max((len(p) - 1 for p in self._pieces), default=-1)

    def is_zero(self) -> bool:
        return not self._pieces

    def is_piecewise_constant(self) -> bool:
        return self.degree <= 0

    def cells(self) -> Iterator[tuple]:
        for i, p in enumerate(self._pieces):
            yield self._bps[i], self._bps[i + 1], p

    def __repr__(self):
        if not self._pieces:
            return "ExactPiecewise(0)"
        parts = []
        for a, b, p in self.cells():
            parts.append(f"[{a},{b}): {tuple(str(c) for c in p)}")
        return "ExactPiecewise(" + "; ".join(parts) + ")"

    def __eq__(self, other):
        if not isinstance(other, ExactPiecewise):
            return NotImplemented
        return self._bps == other._bps and self._pieces == other._pieces

    def __hash__(self):
        return hash((self._bps, self._pieces))

    # evaluation
    def _piece_index(self, x: Fraction) -> int:
        i = bisect.bisect_right(self._bps, x) - 1
        if i < 0 or i >= len(self._pieces):
            return -1
        return i

    def __call__(self, x):
        if isinstance(x, (np.ndarray, list, tuple)):
            return self.evaluate(np.asarray(x, dtype=float))
        if isinstance(x, (float, np.floating)):
            return float(self.evaluate(np.array([x]))[0])
        x = as_fraction(x)
        i = self._piece_index(x)
        return Fraction(0) if i < 0 else Fraction(peval(self._pieces[i], x))

    def left_limit(self, x) -> Fraction:
        x = as_fraction(x)
        i = bisect.bisect_left(self._bps, x) - 1
        if i < 0 or i >= len(self._pieces):
            return Fraction(0)
        return Fraction(peval(self._pieces[i], x))

    def _float_local(self):
        if self._float_cache is None:
            bps = np.array([float(b) for b in self._bps])
            coef = np.zeros((len(self._pieces), MAX_DEGREE + 1))
            for i, (a, _, p) in enumerate(self.cells()):
                local = pcompose(p, 1, a)  # polynomial in t = x - a
                coef[i, : len(local)] = [float(c) for c in local]
            self._float_cache = (bps, coef)
        return self._float_cache

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """Float evaluation on an array, with local (shifted) coefficients."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        if not self._pieces:
            return out
        bps, coef = self._float_local()
        idx = np.searchsorted(bps, x, side="right") - 1
        ok = (idx >= 0) & (idx < len(self._pieces))
        i = idx[ok]
        t = x[ok] - bps[i]
        c = coef[i]
        out[ok] = ((c[:, 3] * t + c[:, 2]) * t + c[:, 1]) * t + c[:, 0]
        return out

    # restructuring
    def polys_on(self, points: Sequence[Fraction]) -> list:
        """Polynomial of ``self`` on each cell of the sorted ``points``.

        ``points`` must contain every breakpoint of ``self`` that lies inside
        ``[points[0], points[-1]]``.
        """
        out = []
        n = len(self._pieces)
        i = 0
        for a in points[:-1]:
            while i < n and self._bps[i + 1] <= a:
                i += 1
            if i < n and self._bps[i] <= a:
                out.append(self._pieces[i])
            else:
                out.append(())
        return out

    def _binary(self, other: "ExactPiecewise", op) -> "ExactPiecewise":
        pts = sorted(set(self._bps) | set(other._bps))
        if len(pts) < 2:
            return ExactPiecewise()
        pa = self.polys_on(pts)
        pb = other.polys_on(pts)
        return ExactPiecewise._raw(pts, [op(a, b) for a, b in zip(pa, pb)])

    def __add__(self, other):
        if not isinstance(other, ExactPiecewise):
            return NotImplemented
        return self._binary(other, padd)

    def __sub__(self, other):
        if not isinstance(other, ExactPiecewise):
            return NotImplemented
        return self._binary(other, psub)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "ExactPiecewise":
        c = as_fraction(c)
        return ExactPiecewise._raw(self._bps, [pscale(p, c) for p in self._pieces])

    def __mul__(self, c):
        if isinstance(c, ExactPiecewise):
            return self._binary(c, pmul)._checked()
        try:
            return self.scale(c)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def _checked(self):
        if self.degree > MAX_DEGREE:
            raise ValueError("product exceeds the degree cap")
        return self

    def shift(self, t) -> "ExactPiecewise":
        """x -> f(x - t)."""
        t = as_fraction(t)
        return ExactPiecewise(
            [b + t for b in self._bps], [pcompose(p, 1, -t) for p in self._pieces]
        )

    def compose_affine(self, a, b) -> "ExactPiecewise":
        """x -> f(a*x + b) for a non-zero rational a."""
        a, b = as_fraction(a), as_fraction(b)
        if a == 0:
            raise ValueError("a must be non-zero")
        bps = [(x - b) / a for x in self._bps]
        pieces = [pcompose(p, a, b) for p in self._pieces]
        if a < 0:
            bps.reverse()
            pieces.reverse()
        return ExactPiecewise(bps, pieces)

    def dilate(self, j: int, mu: int) -> "ExactPiecewise":
        """x -> f(2^j x - mu)."""
        return self.compose_affine(Fraction(2) ** j, -mu)

    def reflect(self) -> "ExactPiecewise":
        return self.compose_affine(-1, 0)

    def restrict(self, a=None, b=None) -> "ExactPiecewise":
        if not self._pieces:
            return self
        lo = self._bps[0] if a is None else max(as_fraction(a), self._bps[0])
        hi = self._bps[-1] if b is None else min(as_fraction(b), self._bps[-1])
        if not lo < hi:
            return ExactPiecewise()
        pts = sorted({lo, hi} | {x for x in self._bps if lo < x < hi})
        return ExactPiecewise._raw(pts, self.polys_on(pts))

    # calculus
    def integrate(self, a=None, b=None) -> Fraction:
        lo = None if a is None else as_fraction(a)
        hi = None if b is None else as_fraction(b)
        total = Fraction(0)
        for x0, x1, p in self.cells():
            l = x0 if lo is None else max(lo, x0)
            r = x1 if hi is None else min(hi, x1)
            if l < r and p:
                P = pint(p)
                total += peval(P, r) - peval(P, l)
        return total

    def inner(self, other: "ExactPiecewise") -> Fraction:
        """Exact integral of the pointwise product."""
        pts = sorted(set(self._bps) | set(other._bps))
        total = Fraction(0)
        if len(pts) < 2:
            return total
        for a, b, p, q in zip(pts, pts[1:], self.polys_on(pts), other.polys_on(pts)):
            if p and q:
                P = pint(pmul(p, q))
                total += peval(P, b) - peval(P, a)
        return total

    def jumps(self) -> "JumpList":
        out = []
        n = len(self._pieces)
        for i, x in enumerate(self._bps):
            right = peval(self._pieces[i], x) if i < n else 0
            left = peval(self._pieces[i - 1], x) if i > 0 else 0
            if right != left:
                out.append((x, Fraction(right - left)))
        return JumpList(tuple(out))

    def derivative(self) -> tuple:
        """Absolutely continuous part of f' and the atoms at discontinuities."""
        ac = ExactPiecewise._raw(self._bps, [pder(p) for p in self._pieces])
        return ac, self.jumps()

    def antiderivative(self) -> "ExactPiecewise":
        """x -> integral of f from the left end of its support, on the support."""
        if self.degree >= MAX_DEGREE:
            raise ValueError("antiderivative would exceed the degree cap")
        pieces = []
        acc = Fraction(0)
        for a, b, p in self.cells():
            P = pint(p)
            pieces.append(padd(P, (acc - peval(P, a),)))
            acc += peval(P, b) - peval(P, a)
        return ExactPiecewise._raw(self._bps, pieces)

    def second_difference(self, delta) -> "ExactPiecewise":
        """x -> f(x + 2 delta) - 2 f(x + delta) + f(x)."""
        d = as_fraction(delta)
        if d <= 0:
            raise ValueError("delta must be positive")
        if not is_dyadic(d):
            raise ValueError("delta must be a dyadic rational")
        return self.shift(-2 * d) - self.shift(-d).scale(2) + self

    # JSON
    def to_json(self) -> dict:
        return {
            "type": "exact_piecewise",
            "breakpoints": [DyadicRational.from_fraction(b).to_json() for b in self._bps],
            "pieces": [[_ratio(c) for c in p] for p in self._pieces],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ExactPiecewise":
        bps = [DyadicRational.from_json(b).value for b in obj["breakpoints"]]
        pieces = [[_parse_number(c) for c in p] for p in obj["pieces"]]
        return cls(bps, pieces)


def _ratio(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _parse_number(c) -> Fraction:
    if isinstance(c, float):
        return Fraction(repr(c))
    return as_fraction(c)


def _canonical(bps: list, polys: list):
    # drop zero cells at both ends, then merge equal neighbours
    lo, hi = 0, len(polys)
    while lo < hi and not polys[lo]:
        lo += 1
    while hi > lo and not polys[hi - 1]:
        hi -= 1
    if lo == hi:
        return [], []
    out_b = [bps[lo]]
    out_p = [polys[lo]]
    for i in range(lo + 1, hi):
        if polys[i] == out_p[-1]:
            continue
        out_b.append(bps[i])
        out_p.append(polys[i])
    out_b.append(bps[hi])
    return out_b, out_p


@dataclass(frozen=True)
class JumpList:
    """Point masses of a distributional derivative: (location, height) pairs."""

    atoms: tuple = ()

    def __post_init__(self):
        locs = [a for a, _ in self.atoms]
        if any(not x < y for x, y in zip(locs, locs[1:])):
            raise ValueError("jump locations must be strictly increasing")

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def total_variation(self) -> Fraction:
        return sum((abs(h) for _, h in self.atoms), Fraction(0))

    def inside(self, a, b) -> "JumpList":
        a, b = as_fraction(a), as_fraction(b)
        return JumpList(tuple((x, h) for x, h in self.atoms if a < x < b))


# -- constructors ------------------------------------------------------------

def indicator(a, b, value=1) -> ExactPiecewise:
    """value * 1_[a, b)."""
    return ExactPiecewise([a, b], [(value,)])


def polynomial_piece(coeffs, a, b) -> ExactPiecewise:
    """The polynomial sum c_k x^k restricted to [a, b)."""
    return ExactPiecewise([a, b], [tuple(coeffs)])


def step_function(level: int, start: int, values: Sequence) -> ExactPiecewise:
    """Piecewise constant with ``values[i]`` on I_{level, start+i}."""
    h = Fraction(1, 1 << level) if level >= 0 else Fraction(1)
    bps = [(start + i) * h for i in range(len(values) + 1)]
    return ExactPiecewise._raw(bps, [_trim((as_fraction(v),)) for v in values])


# -- module level operations ---------------------------------------------------

def _l1_cell(p: Poly, a: Fraction, b: Fraction):
    pts = [a, *_real_roots_in(p, a, b), b]
    P = pint(p)
    total = 0
    for l, r in zip(pts, pts[1:]):
        total += abs(peval(P, r) - peval(P, l))
    return total


def _sup_cell(p: Poly, a: Fraction, b: Fraction):
    cand = [a, b, *_real_roots_in(pder(p), a, b)]
    return max(abs(peval(p, x)) for x in cand)


def l1_exact(f: ExactPiecewise):
    """L1 norm; a Fraction when every cell's sign changes are rational."""
    return sum((_l1_cell(p, a, b) for a, b, p in f.cells()), Fraction(0))


def _check_p(p):
    if isinstance(p, str):
        p = math.inf if p.lower() in ("inf", "infinity") else as_fraction(p)
    if p != math.inf:
        p = as_fraction(p)
    if p <= 0:
        raise ValueError(f"p must be positive, got {p}")
    return p


def lp_norm(f, p, domain=None, *, tol: float = 1e-10, with_error: bool = False):
    """L_p quasi-norm of an exact or sampled function.

    Exact for piecewise-constant data and for p in {1, 2, inf}; other exponents
    on genuine polynomials use adaptive quadrature per cell with absolute
    tolerance ``tol`` (the accumulated estimate is returned with
    ``with_error=True``).
    """
    from .grid import GridFunction

    p = _check_p(p)
    if isinstance(f, GridFunction):
        return f.lp_norm(p, domain=domain, with_error=with_error)
    if domain is not None:
        f = f.restrict(*domain)
    err = 0.0
    if f.is_zero():
        val = 0.0
    elif p == math.inf:
        val = float(max(_sup_cell(q, a, b) for a, b, q in f.cells()))
    elif p == 1:
        val = float(l1_exact(f))
    elif p == 2:
        val = math.sqrt(f.inner(f))
    elif f.is_piecewise_constant():
        pf = float(p)
        s = math.fsum(float(abs(q[0])) ** pf * float(b - a) for a, b, q in f.cells() if q)
        val = s ** (1.0 / pf)
    else:
        from scipy.integrate import quad

        pf = float(p)
        cells = list(f.cells())
        total, err_p = 0.0, 0.0
        for a, b, q in cells:
            if not q:
                continue
            qf = [float(c) for c in pcompose(q, 1, a)]
            pts = [0.0] + [float(r - a) for r in _real_roots_in(q, a, b)] + [float(b - a)]
            for l, r in zip(pts, pts[1:]):
                v, e = quad(
                    lambda t: abs(np.polyval(qf[::-1], t)) ** pf,
                    l, r, epsabs=tol / (4 * len(cells)), epsrel=1e-12, limit=200,
                )
                total += v
                err_p += e
        val = total ** (1.0 / pf)
        # d(S^(1/p)) = S^(1/p - 1)/p dS
        err = err_p * (total ** (1.0 / pf - 1.0) / pf if total > 0 else 0.0)
    return (val, err) if with_error else val


def integrate(f, a=None, b=None):
    return f.integrate(a, b)


def inner_product(f, g):
    """Integral of f * conj(g); exact when both arguments are exact."""
    from .grid import GridFunction

    if isinstance(f, ExactPiecewise) and isinstance(g, ExactPiecewise):
        return f.inner(g)
    if isinstance(f, GridFunction):
        return f.inner(g)
    return np.conj(g.inner(f))


def second_difference(f, delta):
    return f.second_difference(delta)


def derivative(f: ExactPiecewise) -> tuple:
    return f.derivative()


def total_variation(f: ExactPiecewise):
    """Total variation of f' as a measure: L1 of the AC part plus jump sizes."""
    if not isinstance(f, ExactPiecewise):
        raise TypeError("total variation needs a real exact piecewise function")
    ac, jumps = f.derivative()
    return l1_exact(ac) + jumps.total_variation()


def expectation_operator(f, N: int):
    """Dyadic averaging onto piecewise constants at level N."""
    from .grid import GridFunction

    if N < 0:
        raise ValueError("N must be >= 0")
    if isinstance(f, GridFunction):
        return f.expectation(N)
    if f.is_zero():
        return f
    scale = 1 << N
    a, b = f.support
    k0 = math.floor(a * scale)
    k1 = math.ceil(b * scale)
    vals = [f.integrate(Fraction(k, scale), Fraction(k + 1, scale)) * scale for k in range(k0, k1)]
    return step_function(N, k0, vals)
