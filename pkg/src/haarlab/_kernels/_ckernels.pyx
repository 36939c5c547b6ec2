# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled float kernels; see _pykernels for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, exp, log, sqrt, hypot, isinf
cimport cython

cnp.import_array()

ctypedef fused scalar:
    double
    double complex


cdef inline double _mag(scalar z) nogil:
    if scalar is double:
        return fabs(z)
    else:
        return hypot(z.real, z.imag)


cdef inline double _powp(double m, double p) nogil:
    # m >= 0; small integer and half-integer exponents avoid the generic pow
    if m == 0.0:
        return 0.0
    if p == 1.0:
        return m
    if p == 2.0:
        return m * m
    if p == 3.0:
        return m * m * m
    if p == 4.0:
        m = m * m
        return m * m
    if p == 0.5:
        return sqrt(m)
    if p == 1.5:
        return m * sqrt(m)
    return exp(p * log(m))


cdef inline double _abs_linear_integral(double a, double b) nogil:
    # integral over [0, 1] of |a + (b - a) t|
    cdef double aa = fabs(a), bb = fabs(b)
    if a * b >= 0:
        return 0.5 * (aa + bb)
    return 0.5 * (a * a + b * b) / (aa + bb)


def linear_cell_integrals(const scalar[::1] values, double h):
    cdef Py_ssize_t n = values.shape[0], i
    dtype = np.float64 if scalar is double else np.complex128
    out = np.empty(n + 1, dtype=dtype)
    cdef scalar[::1] o = out
    cdef scalar prev = 0
    with nogil:
        for i in range(n):
            o[i] = 0.5 * h * (prev + values[i])
            prev = values[i]
        o[n] = 0.5 * h * prev
    return out


def _pyramid_step(const scalar[::1] s):
    cdef Py_ssize_t m = s.shape[0] // 2, k
    dtype = np.float64 if scalar is double else np.complex128
    coarse = np.empty(m, dtype=dtype)
    even = np.empty(m, dtype=dtype)
    odd = np.empty(m, dtype=dtype)
    cdef scalar[::1] c = coarse
    cdef scalar[::1] e = even
    cdef scalar[::1] o = odd
    with nogil:
        for k in range(m):
            c[k] = s[2 * k] + s[2 * k + 1]
            e[k] = s[2 * k] - s[2 * k + 1]
            if k + 1 < m:
                o[k] = s[2 * k + 1] - s[2 * k + 2]
            else:
                o[k] = s[2 * k + 1]
    return coarse, even, odd


def haar_pyramid(sums, int nlev):
    out = []
    s = np.ascontiguousarray(sums)
    for _ in range(nlev):
        coarse, even, odd = _pyramid_step(s)
        out.append((s, even, odd))
        s = coarse
    out.append((s, None, None))
    return out


def second_difference(const scalar[::1] values, Py_ssize_t k):
    cdef Py_ssize_t n = values.shape[0], m = n + 2 * k, i, a, b
    dtype = np.float64 if scalar is double else np.complex128
    out = np.empty(m, dtype=dtype)
    cdef scalar[::1] o = out
    cdef scalar v0, v1, v2
    with nogil:
        for i in range(m):
            # output node i sits 2k cells left of values[0]
            a = i - 2 * k
            v0 = values[a] if 0 <= a < n else 0
            b = a + k
            v1 = values[b] if 0 <= b < n else 0
            v2 = values[i] if i < n else 0
            o[i] = v2 - 2 * v1 + v0
    return out


def lp_power_linear(const scalar[::1] values, double h, double p, const double[::1] nodes, const double[::1] weights):
    cdef Py_ssize_t n = values.shape[0], i, g, ng = nodes.shape[0]
    cdef double total = 0.0, best = 0.0, aa, bb, acc
    cdef scalar a, b, z
    if n == 0:
        return 0.0
    with nogil:
        if isinf(p):
            for i in range(n):
                aa = _mag(values[i])
                if aa > best:
                    best = aa
            total = best
        else:
            for i in range(n + 1):
                a = values[i - 1] if i > 0 else 0
                b = values[i] if i < n else 0
                if p == 2.0:
                    if scalar is double:
                        total += (a * a + a * b + b * b) / 3.0
                    else:
                        total += (a.real * a.real + a.imag * a.imag
                                  + a.real * b.real + a.imag * b.imag
                                  + b.real * b.real + b.imag * b.imag) / 3.0
                elif scalar is double and p == 1.0:
                    total += _abs_linear_integral(a, b)
                else:
                    acc = 0.0
                    for g in range(ng):
                        z = a + (b - a) * nodes[g]
                        acc += weights[g] * _powp(_mag(z), p)
                    total += acc
            total *= h
    return total


def lp_power_constant(const scalar[::1] values, double h, double p):
    cdef Py_ssize_t n = values.shape[0], i
    cdef double total = 0.0, m
    if n == 0:
        return 0.0
    with nogil:
        for i in range(n):
            m = _mag(values[i])
            if isinf(p):
                if m > total:
                    total = m
            else:
                total += _powp(m, p)
        if not isinf(p):
            total *= h
    return total


def tl_integrand(blocks, int finest, long lo, long hi, double s, double q):
    cdef Py_ssize_t n = hi - lo, c, nv
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] acc = out
    cdef const double[::1] mags
    cdef long idx, start, cell
    cdef int level, lev, shift
    cdef double w, m
    cdef bint qinf = isinf(q)
    for level, start, vals in blocks:
        mags = np.ascontiguousarray(np.abs(np.asarray(vals)), dtype=np.float64)
        nv = mags.shape[0]
        lev = level if level > 0 else 0
        shift = finest - lev
        w = 2.0 ** (level * s)
        with nogil:
            for c in range(n):
                cell = lo + c
                idx = (cell >> shift) - start
                if idx < 0 or idx >= nv:
                    continue
                m = w * mags[idx]
                if qinf:
                    if m > acc[c]:
                        acc[c] = m
                else:
                    acc[c] += _powp(m, q)
    if not qinf:
        with nogil:
            for c in range(n):
                acc[c] = _powp(acc[c], 1.0 / q)
    return out
