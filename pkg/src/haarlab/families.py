"""Deterministic generators for the explicit test families and corpora."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.special import expit

from .coeffs import CoeffArray
from .dyadic import ExactPiecewise, as_fraction, indicator
from .grid import GridFunction
from .haar import haar_atom, synthesize


# -- piecewise constant families ----------------------------------------------------

def staircase(N: int) -> ExactPiecewise:
    """``sum_{j<N} h_{j,0}``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    f = ExactPiecewise()
    for j in range(N):
        f = f + haar_atom(j, 0)
    return f


def geometric_staircase(N: int, route: str = "direct") -> ExactPiecewise:
    """``2^N 1_[0, 2^-N)``, directly or as ``1_[0,1) + sum_{j<N} 2^j h_{j,0}``."""
    if N < 0:
        raise ValueError("N must be >= 0")
    if route == "direct":
        return indicator(0, Fraction(1, 1 << N), 1 << N)
    if route == "synthesis":
        entries = {(-1, 0): Fraction(1)}
        entries.update({(j, 0): Fraction(1 << j) for j in range(N)})
        return synthesize(CoeffArray.from_dict(entries))
    raise ValueError(f"unknown route {route!r}")


def odd_extension(f):
    """``g(x) = f(x) - f(-x)`` for f supported in [0, inf)."""
    if isinstance(f, ExactPiecewise):
        if f.is_zero():
            return f
        if f.support[0] < 0:
            raise ValueError("support must lie in [0, inf)")
        return f - f.reflect()
    if isinstance(f, GridFunction):
        if f.n and f.support[0] < 0:
            raise ValueError("support must lie in [0, inf)")
        return f - f.reflect()
    raise TypeError(f"cannot extend {type(f).__name__}")


# -- smooth profiles ------------------------------------------------------------------

def smooth_glue(t):
    """``e^{-1/t} / (e^{-1/t} + e^{-1/(1-t)})``: 0 for t <= 0, 1 for t >= 1, C-infinity."""
    t = np.asarray(t, dtype=float)
    out = np.where(t >= 1, 1.0, 0.0)
    mid = (t > 0) & (t < 1)
    tm = t[mid]
    out[mid] = expit(1.0 / (1.0 - tm) - 1.0 / tm)
    return out


def smooth_glue_derivative(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    mid = (t > 0) & (t < 1)
    tm = t[mid]
    g = expit(1.0 / (1.0 - tm) - 1.0 / tm)
    out[mid] = g * (1.0 - g) * (1.0 / tm ** 2 + 1.0 / (1.0 - tm) ** 2)
    return out


@dataclass(frozen=True)
class BumpProfile:
    """Smooth bump equal to 1 on ``plateau`` and vanishing outside ``support``."""

    plateau: tuple
    support: tuple

    def __post_init__(self):
        (a, b), (c, d) = self.plateau, self.support
        if not (c < a <= b < d):
            raise ValueError("need support[0] < plateau[0] <= plateau[1] < support[1]")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        (a, b), (c, d) = self.plateau, self.support
        up = smooth_glue((x - c) / (a - c))
        down = smooth_glue((d - x) / (d - b))
        return np.minimum(up, down)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        (a, b), (c, d) = self.plateau, self.support
        out = np.zeros_like(x)
        left = x < a
        right = x > b
        out[left] = smooth_glue_derivative((x[left] - c) / (a - c)) / (a - c)
        out[right] = -smooth_glue_derivative((d - x[right]) / (d - b)) / (d - b)
        return out

    def to_json(self) -> dict:
        return {"plateau": [float(v) for v in self.plateau], "support": [float(v) for v in self.support]}


CHIRP_PROFILE = BumpProfile((0.25, 0.75), (0.125, 0.875))
RADEMACHER_PROFILE = BumpProfile((0.25, 0.75), (0.0, 1.0))
COHERENT_PROFILE = BumpProfile((-0.25, 0.25), (-0.5, 0.5))


@dataclass(frozen=True)
class SignVector:
    """Signs ``+-1`` indexed like the frequencies; ``seed`` is None for hand-made vectors."""

    signs: tuple
    seed: int | None = None

    def __post_init__(self):
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")

    @classmethod
    def random(cls, n: int, seed: int) -> "SignVector":
        rng = np.random.default_rng(seed)
        return cls(tuple(int(v) for v in rng.choice([-1, 1], size=n)), seed)

    @classmethod
    def ones(cls, n: int) -> "SignVector":
        return cls((1,) * n)

    def __len__(self):
        return len(self.signs)

    def to_json(self) -> dict:
        return {"signs": list(self.signs), "seed": self.seed}


# -- oscillatory families ---------------------------------------------------------------

def chirp_indices(N: int) -> list:
    """Integers j with N/4 <= j <= N/2."""
    return [j for j in range(0, N + 1) if 4 * j >= N and 2 * j <= N]


def frequency_set(N: int) -> list:
    """Integers j >= 1 with N/4 < j < N/2."""
    return [j for j in range(1, N + 1) if 4 * j > N and 2 * j < N]


def _check_level(N: int, L: int | None) -> int:
    L = N + 4 if L is None else L
    if L < N + 4:
        raise ValueError(f"grid level {L} undersamples the oscillation (need >= N + 4 = {N + 4})")
    return L


def chirp_windows(N: int, profile: BumpProfile = CHIRP_PROFILE) -> list:
    """Support intervals of ``u(N(x - 2j/N))`` for the chirp indices."""
    c, d = profile.support
    return [(2 * j / N + c / N, 2 * j / N + d / N) for j in chirp_indices(N)]


def chirp_family(N: int, profile: BumpProfile = CHIRP_PROFILE, L: int | None = None) -> GridFunction:
    """``sum_{N/4<=j<=N/2} 2^-j u(N(x - 2j/N)) e^{2 pi i 2^j x}`` on [0, 2] at grid level L."""
    if N < 8:
        raise ValueError("N must be >= 8")
    L = _check_level(N, L)
    win = chirp_windows(N, profile)
    for (a0, b0), (a1, b1) in zip(win, win[1:]):
        if not b0 <= a1:
            raise AssertionError("chirp windows overlap")
    return GridFunction.from_function(lambda x: chirp_eval(N, x, profile), L, 0, 2)


def chirp_eval(N: int, x, profile: BumpProfile = CHIRP_PROFILE, derivative: bool = False):
    """Values (or derivative) of the chirp sum at points x."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape, dtype=complex)
    for j in chirp_indices(N):
        y = N * (x - 2 * j / N)
        e = np.exp(2j * np.pi * 2.0 ** j * x)
        if derivative:
            out += 2.0 ** -j * (N * profile.derivative(y) * e + profile(y) * 2j * np.pi * 2.0 ** j * e)
        else:
            out += 2.0 ** -j * profile(y) * e
    return out


def chirp_interior_cells(N: int, profile: BumpProfile = CHIRP_PROFILE) -> dict:
    """``{j: [mu, ...]}``: level-N cells inside the plateau window of term j."""
    a, b = profile.plateau
    out = {}
    for j in chirp_indices(N):
        lo, hi = 2 * j / N + a / N, 2 * j / N + b / N
        out[j] = [mu for mu in range(math.floor(lo * 2 ** N), math.ceil(hi * 2 ** N) + 1)
                  if lo <= mu * 2.0 ** -N and (mu + 1) * 2.0 ** -N <= hi]
    return out


def taylor_prediction(derivative: Callable, N: int, mu) -> np.ndarray:
    """Haar coefficient predicted from f' at the cell centre: ``-f'(2^-N (mu + 1/2)) 2^{-2N-2}``."""
    mu = np.asarray(mu, dtype=float)
    return -derivative(2.0 ** -N * (mu + 0.5)) * 2.0 ** (-2 * N - 2)


def _wave_sum(N: int, signs: SignVector, profile: BumpProfile, x):
    js = frequency_set(N)
    if len(signs) != len(js):
        raise ValueError(f"need {len(js)} signs, got {len(signs)}")
    env = profile(x)
    out = np.zeros(np.shape(x), dtype=complex)
    for r, j in zip(signs.signs, js):
        out += r * 2.0 ** -j * np.exp(2j * np.pi * 2.0 ** j * x)
    return out * env


def rademacher_family(N: int, signs: SignVector, profile: BumpProfile = RADEMACHER_PROFILE,
                      L: int | None = None) -> GridFunction:
    """``sum_{j in Z_N} r_j 2^-j e^{2 pi i 2^j x} psi(x)`` with ``Z_N = {N/4 < j < N/2}``."""
    L = _check_level(N, L)
    a, b = profile.support
    return GridFunction.from_function(lambda x: _wave_sum(N, signs, profile, x), L, a, b)


def rademacher_components(N: int, profile: BumpProfile = RADEMACHER_PROFILE, L: int | None = None) -> list:
    """One grid per frequency (sign +1), so any signed sum is a linear combination."""
    L = _check_level(N, L)
    a, b = profile.support
    out = []
    for j in frequency_set(N):
        out.append(GridFunction.from_function(
            lambda x, j=j: 2.0 ** -j * np.exp(2j * np.pi * 2.0 ** j * x) * profile(x), L, a, b))
    return out


def coherent_sum(N: int, profile: BumpProfile = COHERENT_PROFILE, L: int | None = None) -> GridFunction:
    """All-plus Rademacher sum with a profile centred at 0."""
    return rademacher_family(N, SignVector.ones(len(frequency_set(N))), profile, L)


def plateau_cells(N: int, profile: BumpProfile = RADEMACHER_PROFILE) -> tuple:
    """Level-N cells ``[mu0, mu1)`` inside the plateau of ``profile``."""
    a, b = profile.plateau
    return math.ceil(a * 2 ** N), math.floor(b * 2 ** N)


def _wave_haar(N: int, j: int, mu: np.ndarray) -> np.ndarray:
    # <2^-j e^{2 pi i 2^j x}, h_{N,mu}> in closed form
    c = 2 * np.pi * 2.0 ** j
    half = np.exp(1j * c * 2.0 ** (-N - 1)) - 1
    return -(2.0 ** -j) * np.exp(1j * c * mu * 2.0 ** -N) * half ** 2 / (1j * c)


def plateau_level_terms(N: int, signs: list, p: float, profile: BumpProfile = RADEMACHER_PROFILE,
                        chunk: int = 1 << 20) -> np.ndarray:
    """``2^{N(1-1/p)} (sum_{mu} |2^N <f_t, h_{N,mu}>|^p)^{1/p}`` over plateau cells, one per sign vector.

    The profile equals 1 on its plateau, so the coefficients there have a closed
    form and no grid is needed.  The phases repeat with period ``2^{N - min j}``,
    so one period is summed and rescaled when the cell range is a multiple of it.
    """
    js = frequency_set(N)
    S = np.array([s.signs if isinstance(s, SignVector) else s for s in signs], dtype=float)
    if S.shape[1] != len(js):
        raise ValueError(f"need {len(js)} signs per vector")
    mu0, mu1 = plateau_cells(N, profile)
    period = 1 << (N - min(js))
    count = mu1 - mu0
    reps = 1
    if count % period == 0:
        reps, mu1 = count // period, mu0 + period
    acc = np.zeros(len(S))
    for lo in range(mu0, mu1, chunk):
        mu = np.arange(lo, min(lo + chunk, mu1), dtype=float)
        comp = np.stack([_wave_haar(N, j, mu) for j in js])
        vals = np.abs(S @ comp) * 2.0 ** N
        acc += (vals ** p).sum(axis=1) if not math.isinf(p) else 0
        if math.isinf(p):
            acc = np.maximum(acc, vals.max(axis=1))
    if math.isinf(p):
        return 2.0 ** N * acc
    return 2.0 ** (N * (1 - 1 / p)) * (reps * acc) ** (1 / p)


def khintchine_prediction(N: int, p: float, profile: BumpProfile = RADEMACHER_PROFILE) -> float:
    """Square-function size ``(2 pi / 4) sqrt(|Z_N|) (cells 2^-N)^{1/p}`` of the plateau level term."""
    mu0, mu1 = plateau_cells(N, profile)
    frac = (mu1 - mu0) * 2.0 ** -N
    return 2 * np.pi / 4 * math.sqrt(len(frequency_set(N))) * frac ** (1 / p)


# -- corpora ------------------------------------------------------------------------------

def pl_corpus(seed: int = 2024, size: int = 20) -> list:
    """Jump-free piecewise-linear functions: hats, random hat combinations, the Chui-Wang psi."""
    from .splines import chui_wang_mother, hat

    rng = np.random.default_rng(seed)
    out = [hat(0, 0), hat(1, 0), hat(2, 3), hat(0, -1) + hat(0, 1), chui_wang_mother().psi]
    while len(out) < size:
        j = int(rng.integers(0, 4))
        n = int(rng.integers(2, 7))
        start = int(rng.integers(-4, 4))
        coeffs = rng.integers(-4, 5, size=n)
        if not coeffs.any():
            continue
        f = ExactPiecewise()
        for k, c in enumerate(coeffs):
            f = f + hat(j, start + k).scale(Fraction(int(c), 2))
        if not f.is_zero():
            out.append(f)
    return out


def bump_corpus(level: int = 12) -> list:
    """Sampled smooth bumps with a few widths and positions."""
    shapes = [((0.25, 0.75), (0.0, 1.0)), ((-0.25, 0.25), (-0.5, 0.5)), ((0.5, 1.5), (0.0, 2.0)),
              ((0.1, 0.2), (0.0, 0.3)), ((1.0, 1.0), (0.0, 2.0)), ((-1.0, 1.0), (-2.0, 2.0))]
    out = []
    for plateau, support in shapes:
        prof = BumpProfile(plateau, support)
        out.append(GridFunction.from_function(prof, level, support[0], support[1]))
    return out


# -- named generators ---------------------------------------------------------------------

def _int(v, name):
    if isinstance(v, bool) or int(v) != v:
        raise ValueError(f"{name} must be an integer")
    return int(v)


def _gen_staircase(p):
    return staircase(_int(p["N"], "N"))


def _gen_geometric(p):
    return geometric_staircase(_int(p["N"], "N"), p.get("route", "direct"))


def _gen_odd_staircase(p):
    return odd_extension(staircase(_int(p["N"], "N")))


def _gen_indicator(p):
    return indicator(as_fraction(p.get("a", 0)), as_fraction(p.get("b", 1)), as_fraction(p.get("value", 1)))


def _gen_hat(p):
    from .splines import hat
    return hat(_int(p.get("j", 0), "j"), _int(p.get("mu", 0), "mu"))


def _gen_bspline(p):
    from .splines import bspline
    return bspline(_int(p.get("m", 2), "m")).f


def _gen_psi(p):
    from .splines import chui_wang_mother
    return chui_wang_mother().psi


def _gen_chirp(p):
    N = _int(p["N"], "N")
    return chirp_family(N, L=p.get("L"))


def _gen_rademacher(p):
    N = _int(p["N"], "N")
    n = len(frequency_set(N))
    signs = SignVector(tuple(p["signs"])) if "signs" in p else SignVector.random(n, _int(p.get("seed", 0), "seed"))
    return rademacher_family(N, signs, L=p.get("L"))


def _gen_coherent(p):
    return coherent_sum(_int(p["N"], "N"), L=p.get("L"))


def _gen_bump(p):
    prof = BumpProfile(tuple(p.get("plateau", (0.25, 0.75))), tuple(p.get("support", (0.0, 1.0))))
    lv = _int(p.get("level", 12), "level")
    return GridFunction.from_function(prof, lv, prof.support[0], prof.support[1])


GENERATORS = {
    "staircase": (_gen_staircase, {"N": "int >= 1"}),
    "geometric_staircase": (_gen_geometric, {"N": "int >= 0", "route": "direct | synthesis"}),
    "odd_staircase": (_gen_odd_staircase, {"N": "int >= 1"}),
    "indicator": (_gen_indicator, {"a": "dyadic", "b": "dyadic", "value": "rational"}),
    "hat": (_gen_hat, {"j": "int >= 0", "mu": "int"}),
    "bspline": (_gen_bspline, {"m": "int in 1..4"}),
    "chui_wang": (_gen_psi, {}),
    "chirp": (_gen_chirp, {"N": "int >= 8", "L": "int >= N + 4"}),
    "rademacher": (_gen_rademacher, {"N": "int", "seed": "int", "signs": "list of +-1", "L": "int"}),
    "coherent_sum": (_gen_coherent, {"N": "int", "L": "int"}),
    "bump": (_gen_bump, {"plateau": "[a, b]", "support": "[c, d]", "level": "int"}),
}


def make_function(spec: dict):
    """Build a function from ``{"family": name, ...params}`` or a serialized function."""
    spec = dict(spec)
    kind = spec.get("type")
    if kind == "exact_piecewise":
        return ExactPiecewise.from_json(spec)
    if kind == "grid_function":
        return GridFunction.from_json(spec)
    name = spec.pop("family", None)
    if name not in GENERATORS:
        raise ValueError(f"unknown family {name!r}; known: {', '.join(sorted(GENERATORS))}")
    fn, schema = GENERATORS[name]
    unknown = set(spec) - set(schema)
    if unknown:
        raise ValueError(f"unknown parameters for {name}: {', '.join(sorted(unknown))}")
    try:
        return fn(spec)
    except KeyError as e:
        raise ValueError(f"missing parameter {e.args[0]!r} for {name}") from None
