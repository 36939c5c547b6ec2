"""Pure numpy versions of the float kernels.

Same signatures and results (up to rounding) as the compiled module
``_ckernels``; used when the extension is not built or when
``HAARLAB_PURE_PYTHON`` is set.
"""
import numpy as np


def linear_cell_integrals(values, h):
    """Integrals of the nodal hat interpolant over its len(values)+1 cells."""
    v = np.asarray(values)
    padded = np.concatenate(([0], v, [0])).astype(v.dtype, copy=False)
    return h * 0.5 * (padded[:-1] + padded[1:])


def haar_pyramid(sums, nlev):
    """Coarsen cell integrals ``nlev`` times.

    ``sums`` holds integrals over consecutive cells of one level, starting at
    an even index and of even length at every stage.  Returns a list with
    entries ``(sums, even, odd)`` from the input level downwards, where
    ``even[k] = sums[2k] - sums[2k+1]`` and ``odd[k] = sums[2k+1] - sums[2k+2]``
    (zero beyond the end).
    """
    out = []
    s = np.asarray(sums)
    for _ in range(nlev):
        a = s[0::2]
        b = s[1::2]
        even = a - b
        odd = np.empty_like(b)
        odd[:-1] = b[:-1] - a[1:]
        odd[-1:] = b[-1:]
        out.append((s, even, odd))
        s = a + b
    out.append((s, None, None))
    return out


def second_difference(values, k):
    """Samples of v(x + 2k) - 2 v(x + k) + v(x) with zero extension."""
    v = np.asarray(values)
    n = v.shape[0]
    p = np.zeros(n + 4 * k, dtype=v.dtype)
    p[2 * k: 2 * k + n] = v
    m = n + 2 * k
    return p[2 * k: 2 * k + m] - 2 * p[k: k + m] + p[:m]


def _gauss_power(a, b, p, nodes, weights):
    # integral over [0,1] of |a + (b - a) t|^p by a fixed Gauss rule
    t = nodes[:, None]
    vals = np.abs(a[None, :] + (b - a)[None, :] * t) ** p
    return weights @ vals


def lp_power_linear(values, h, p, nodes, weights):
    """Integral of |interpolant|^p for the nodal hat interpolant.

    ``p`` is a positive float or ``inf``.  Closed forms for p = 2, inf and
    real p = 1; otherwise the Gauss rule (nodes and weights on [0, 1]).
    Returns the integral (or the sup for p = inf).
    """
    v = np.asarray(values)
    if v.size == 0:
        return 0.0
    padded = np.concatenate(([0], v, [0]))
    a, b = padded[:-1], padded[1:]
    if np.isinf(p):
        return float(np.max(np.abs(v)))
    if p == 2:
        return float(h * np.sum((np.abs(a) ** 2 + np.real(a * np.conj(b)) + np.abs(b) ** 2) / 3.0))
    if p == 1 and not np.iscomplexobj(v):
        aa, bb = np.abs(a), np.abs(b)
        same = a * b >= 0
        tot = np.where(same, 0.5 * (aa + bb), 0.0)
        den = aa + bb
        cross = (~same) & (den > 0)
        tot[cross] = 0.5 * (a[cross] ** 2 + b[cross] ** 2) / den[cross]
        return float(h * np.sum(tot))
    return float(h * np.sum(_gauss_power(a, b, p, nodes, weights)))


def lp_power_constant(values, h, p):
    v = np.abs(np.asarray(values))
    if v.size == 0:
        return 0.0
    if np.isinf(p):
        return float(np.max(v))
    return float(h * np.sum(v ** p))


def tl_integrand(blocks, finest, lo, hi, s, q):
    """Pointwise (sum_j |2^{js} beta_j(x)|^q)^{1/q} on finest-level cells lo..hi-1.

    ``blocks`` is a list of ``(level, start, values)``; level -1 is read on
    unit cells, like level 0.
    """
    n = hi - lo
    acc = np.zeros(n)
    cells = np.arange(lo, hi)
    for level, start, vals in blocks:
        lev = max(level, 0)
        idx = (cells >> (finest - lev)) - start
        ok = (idx >= 0) & (idx < len(vals))
        w = 2.0 ** (level * s)
        mag = np.zeros(n)
        mag[ok] = w * np.abs(np.asarray(vals)[idx[ok]])
        if np.isinf(q):
            np.maximum(acc, mag, out=acc)
        else:
            acc += mag ** q
    if np.isinf(q):
        return acc
    return acc ** (1.0 / q)
