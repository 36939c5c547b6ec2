"""Sparse coefficient pyramids indexed by level and translation."""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Iterator, Mapping

import numpy as np

from .dyadic import as_fraction


def _is_exact_array(a: np.ndarray) -> bool:
    return a.dtype == object


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (complex, np.complexfloating)):
        return repr(complex(v))
    return repr(float(v))


def _parse(s: str):
    s = s.strip()
    if "j" in s:
        return complex(s)
    if any(c in s for c in ".eEn"):
        return float(s)
    return Fraction(s)


class CoeffArray:
    """Per-level windows of coefficients ``beta[j, mu]``, zero outside the windows.

    Parameters
    ----------
    levels : mapping
        ``j -> (start, values)``; ``values[i]`` is the entry at ``mu = start + i``.
        Exact arrays hold Fractions (``dtype=object``); float arrays may be complex.
    max_level : int, optional
        Truncation level J the array was computed with (defaults to the largest key).
    scaled : bool
        True when entries at levels ``j >= 0`` carry the factor ``2**j``
        (level -1 is never rescaled).
    parity : str
        ``"even"`` for Haar atoms, ``"odd"`` for shifted atoms, ``"frame"`` for
        frame coefficients, ``"wavelet"`` for Chui-Wang data, ``"none"`` otherwise.
    """

    def __init__(self, levels: Mapping, max_level=None, *, scaled=False, parity="even"):
        lv = {}
        for j, (start, vals) in levels.items():
            arr = vals if isinstance(vals, np.ndarray) else np.array(list(vals), dtype=object)
            if arr.dtype == object:
                arr = np.array([as_fraction(v) if not isinstance(v, (float, complex)) else v for v in arr],
                               dtype=object)
            lv[int(j)] = (int(start), arr)
        self._levels = dict(sorted(lv.items()))
        if max_level is None:
            max_level = max(self._levels, default=-1)
        self.max_level = int(max_level)
        self.scaled = scaled
        self.parity = parity

    @classmethod
    def from_dict(cls, entries: Mapping, max_level=None, **kw) -> "CoeffArray":
        """Build from ``{(j, mu): value}``."""
        by_level: dict = {}
        for (j, mu), v in entries.items():
            by_level.setdefault(int(j), {})[int(mu)] = v
        levels = {}
        for j, d in by_level.items():
            lo, hi = min(d), max(d)
            exact = all(not isinstance(v, (float, complex, np.floating, np.complexfloating)) for v in d.values())
            if exact:
                vals = np.array([as_fraction(d.get(m, 0)) for m in range(lo, hi + 1)], dtype=object)
            else:
                vals = np.array([d.get(m, 0) for m in range(lo, hi + 1)])
            levels[j] = (lo, vals)
        return cls(levels, max_level, **kw)

    # access
    @property
    def levels(self) -> list:
        return list(self._levels)

    def level(self, j: int):
        """(start, values) for level j; an empty window when absent."""
        return self._levels.get(j, (0, np.zeros(0, dtype=object)))

    @property
    def exact(self) -> bool:
        return all(_is_exact_array(v) for _, v in self._levels.values())

    def __getitem__(self, key):
        j, mu = key
        start, vals = self.level(j)
        i = mu - start
        if 0 <= i < len(vals):
            return vals[i]
        return Fraction(0) if self.exact else 0.0

    def items(self, nonzero: bool = True) -> Iterator[tuple]:
        for j, (start, vals) in self._levels.items():
            for i, v in enumerate(vals):
                if v != 0 or not nonzero:
                    yield j, start + i, v

    def nnz(self, min_level: int = -1) -> int:
        return sum(1 for j, _, _ in self.items() if j >= min_level)

    def __eq__(self, other):
        if not isinstance(other, CoeffArray):
            return NotImplemented
        return dict(((j, m), v) for j, m, v in self.items()) == dict(
            ((j, m), v) for j, m, v in other.items())

    def __repr__(self):
        return (f"CoeffArray(levels={self.levels}, J={self.max_level}, nnz={self.nnz()}, "
                f"scaled={self.scaled}, parity={self.parity!r})")

    # transforms
    def map(self, fn, **kw) -> "CoeffArray":
        levels = {}
        for j, (start, vals) in self._levels.items():
            if vals.dtype == object:
                out = np.array([fn(j, v) for v in vals], dtype=object)
            else:
                out = np.asarray(fn(j, vals))
            levels[j] = (start, out)
        opts = dict(scaled=self.scaled, parity=self.parity)
        opts.update(kw)
        return CoeffArray(levels, self.max_level, **opts)

    def scaled_by_2j(self) -> "CoeffArray":
        """Multiply levels j >= 0 by 2**j (level -1 untouched)."""
        if self.scaled:
            return self

        def mul(j, v):
            if j < 0:
                return v
            return v * (1 << j) if not isinstance(v, np.ndarray) else v * 2.0 ** j

        return self.map(mul, scaled=True)

    def abs(self) -> "CoeffArray":
        return self.map(lambda j, v: abs(v) if not isinstance(v, np.ndarray) else np.abs(v))

    def restrict_levels(self, lo=-1, hi=None) -> "CoeffArray":
        hi = self.max_level if hi is None else hi
        levels = {j: lv for j, lv in self._levels.items() if lo <= j <= hi}
        return CoeffArray(levels, hi, scaled=self.scaled, parity=self.parity)

    def _combine(self, other: "CoeffArray", sign) -> "CoeffArray":
        entries = {(j, m): v for j, m, v in self.items()}
        for j, m, v in other.items():
            entries[(j, m)] = entries.get((j, m), 0) + sign * v
        if not entries:
            return CoeffArray({}, max(self.max_level, other.max_level), scaled=self.scaled, parity=self.parity)
        return CoeffArray.from_dict(entries, max(self.max_level, other.max_level),
                                    scaled=self.scaled, parity=self.parity)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __mul__(self, c):
        return self.map(lambda j, v: v * c)

    __rmul__ = __mul__

    # serialization
    def to_rows(self, nonzero: bool = True) -> list:
        return [(j, mu, self.parity, _fmt(v)) for j, mu, v in self.items(nonzero)]

    def to_csv(self, fh=None, nonzero: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["j", "mu", "parity", "value"])
        w.writerows(self.to_rows(nonzero))
        text = buf.getvalue()
        if fh is not None:
            fh.write(text)
        return text

    @classmethod
    def from_csv(cls, text: str, max_level=None, **kw) -> "CoeffArray":
        rows = list(csv.DictReader(io.StringIO(text)))
        parity = rows[0]["parity"] if rows else "even"
        entries = {(int(r["j"]), int(r["mu"])): _parse(r["value"]) for r in rows}
        kw.setdefault("parity", parity)
        return cls.from_dict(entries, max_level, **kw)

    def to_json(self) -> dict:
        return {
            "type": "coeff_array",
            "max_level": self.max_level,
            "scaled": self.scaled,
            "parity": self.parity,
            "levels": {
                str(j): {"start": start, "values": [_fmt(v) for v in vals]}
                for j, (start, vals) in self._levels.items()
            },
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj: dict) -> "CoeffArray":
        levels = {}
        for j, d in obj["levels"].items():
            vals = [_parse(v) for v in d["values"]]
            if all(isinstance(v, Fraction) for v in vals):
                arr = np.array(vals, dtype=object)
            else:
                arr = np.array(vals)
            levels[int(j)] = (d["start"], arr)
        return cls(levels, obj.get("max_level"), scaled=obj.get("scaled", False),
                   parity=obj.get("parity", "even"))
