# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``; same signatures."""

import numpy as np
cimport numpy as cnp
from libc.math cimport pow, fabs, fmax, fmin, sqrt, INFINITY

cnp.import_array()


cdef inline double _pow(double x, double a) noexcept nogil:
    if a == 1.0:
        return x
    if a == 2.0:
        return x * x
    if a == 3.0:
        return x * x * x
    if a == 0.5:
        return sqrt(x)
    return pow(x, a)


cdef inline double _phi(double x, const double* coefs, const long* kinds,
                        const double* params, Py_ssize_t m) noexcept nogil:
    cdef Py_ssize_t i
    cdef double best = INFINITY
    cdef double v
    for i in range(m):
        if kinds[i] == 0:
            v = coefs[i] * _pow(x, params[i])
        else:
            v = coefs[i] * fmax(x - params[i], 0.0)
        best = fmin(best, v)
    return best


cdef double _expect(const double* values, const double* probs, Py_ssize_t n,
                    const double* coefs, const long* kinds, const double* params,
                    Py_ssize_t m, double scale) noexcept nogil:
    cdef Py_ssize_t i
    cdef double total = 0.0
    for i in range(n):
        total += probs[i] * _phi(fabs(values[i]) / scale, coefs, kinds, params, m)
    return total


def phi_terms(x, coefs, kinds, params):
    cdef const double[::1] xs = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef const double[::1] c = np.ascontiguousarray(coefs, dtype=np.float64)
    cdef const long[::1] k = np.ascontiguousarray(kinds, dtype=np.int_)
    cdef const double[::1] a = np.ascontiguousarray(params, dtype=np.float64)
    out = np.full(xs.shape[0], np.inf)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    if c.shape[0] == 0:
        return out.reshape(np.shape(x))
    with nogil:
        for i in range(xs.shape[0]):
            o[i] = _phi(xs[i], &c[0], &k[0], &a[0], c.shape[0])
    return out.reshape(np.shape(x))


def expect_terms(values, probs, coefs, kinds, params, double scale):
    cdef const double[::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef const double[::1] w = np.ascontiguousarray(probs, dtype=np.float64)
    cdef const double[::1] c = np.ascontiguousarray(coefs, dtype=np.float64)
    cdef const long[::1] k = np.ascontiguousarray(kinds, dtype=np.int_)
    cdef const double[::1] a = np.ascontiguousarray(params, dtype=np.float64)
    if v.shape[0] == 0 or c.shape[0] == 0:
        return 0.0
    return _expect(&v[0], &w[0], v.shape[0], &c[0], &k[0], &a[0], c.shape[0], scale)


def orlicz_bisect(values, probs, coefs, kinds, params, double lo, double hi,
                  double rtol, int maxiter):
    cdef const double[::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef const double[::1] w = np.ascontiguousarray(probs, dtype=np.float64)
    cdef const double[::1] c = np.ascontiguousarray(coefs, dtype=np.float64)
    cdef const long[::1] k = np.ascontiguousarray(kinds, dtype=np.int_)
    cdef const double[::1] a = np.ascontiguousarray(params, dtype=np.float64)
    cdef int it = 0
    cdef double mid
    if v.shape[0] == 0 or c.shape[0] == 0:
        return hi, it
    with nogil:
        while hi - lo > rtol * hi and it < maxiter:
            mid = 0.5 * (lo + hi)
            if _expect(&v[0], &w[0], v.shape[0], &c[0], &k[0], &a[0], c.shape[0], mid) <= 1.0:
                hi = mid
            else:
                lo = mid
            it += 1
    return hi, it


def path_stats(flat, offsets, int depth):
    cdef const double[::1] t = np.ascontiguousarray(flat, dtype=np.float64)
    cdef const long[::1] off = np.ascontiguousarray(offsets, dtype=np.int_)
    cdef Py_ssize_t npaths = 1 << depth
    s_arr = np.empty(npaths)
    inc_arr = np.empty(npaths)
    part_arr = np.empty(npaths)
    cdef double[::1] s = s_arr
    cdef double[::1] mi = inc_arr
    cdef double[::1] mp = part_arr
    cdef Py_ssize_t p
    cdef int kk
    cdef double acc, x, a_inc, a_part
    with nogil:
        for p in range(npaths):
            acc = 0.0
            a_inc = 0.0
            a_part = 0.0
            for kk in range(1, depth + 1):
                x = t[off[kk - 1] + (p >> (depth - kk))]
                acc = acc + x
                if fabs(x) > a_inc:
                    a_inc = fabs(x)
                if fabs(acc) > a_part:
                    a_part = fabs(acc)
            s[p] = acc
            mi[p] = a_inc
            mp[p] = a_part
    return s_arr, inc_arr, part_arr


def pair_stats(flat, offsets, int depth):
    cdef const double[::1] t = np.ascontiguousarray(flat, dtype=np.float64)
    cdef const long[::1] off = np.ascontiguousarray(offsets, dtype=np.int_)
    cdef Py_ssize_t n = 1 << depth
    s_arr = np.empty(n * n)
    inc_arr = np.empty(n * n)
    part_arr = np.empty(n * n)
    cdef double[::1] s = s_arr
    cdef double[::1] mi = inc_arr
    cdef double[::1] mp = part_arr
    cdef Py_ssize_t e, e2, p
    cdef int kk
    cdef double acc, x, a_inc, a_part
    with nogil:
        for e in range(n):
            for e2 in range(n):
                p = e * n + e2
                acc = 0.0
                a_inc = 0.0
                a_part = 0.0
                for kk in range(1, depth + 1):
                    x = t[off[kk - 1] + 2 * (e >> (depth - kk + 1))
                          + ((e2 >> (depth - kk)) & 1)]
                    acc = acc + x
                    if fabs(x) > a_inc:
                        a_inc = fabs(x)
                    if fabs(acc) > a_part:
                        a_part = fabs(acc)
                s[p] = acc
                mi[p] = a_inc
                mp[p] = a_part
    return s_arr, inc_arr, part_arr
