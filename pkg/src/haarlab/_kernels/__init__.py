"""Float kernels: compiled extension when available, numpy otherwise.

Set ``HAARLAB_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

import numpy as np

from . import _pykernels as py

BACKEND = "python"
_impl = py
if not os.environ.get("HAARLAB_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = py


def _as_float(values):
    v = np.ascontiguousarray(values)
    if np.iscomplexobj(v):
        return v.astype(np.complex128, copy=False)
    return v.astype(np.float64, copy=False)


def linear_cell_integrals(values, h):
    return _impl.linear_cell_integrals(_as_float(values), float(h))


def haar_pyramid(sums, nlev):
    if np.asarray(sums).dtype == object:
        return py.haar_pyramid(sums, nlev)
    return _impl.haar_pyramid(_as_float(sums), int(nlev))


def second_difference(values, k):
    return _impl.second_difference(_as_float(values), int(k))


def lp_power_linear(values, h, p, nodes, weights):
    return _impl.lp_power_linear(
        _as_float(values), float(h), float(p),
        np.ascontiguousarray(nodes, dtype=float), np.ascontiguousarray(weights, dtype=float),
    )


def lp_power_constant(values, h, p):
    return _impl.lp_power_constant(_as_float(values), float(h), float(p))


def tl_integrand(blocks, finest, lo, hi, s, q):
    return _impl.tl_integrand(blocks, int(finest), int(lo), int(hi), float(s), float(q))


__all__ = [
    "BACKEND", "linear_cell_integrals", "haar_pyramid", "second_difference",
    "lp_power_linear", "lp_power_constant", "tl_integrand", "py",
]
