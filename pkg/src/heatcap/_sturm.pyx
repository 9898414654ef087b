# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled backend for the symmetric tridiagonal eigensolver.

Sturm-sequence counts, index bisection for the smallest eigenvalues, and a
partially pivoted shifted solve (dgttrf-style) for inverse iteration.
"""

from libc.math cimport fabs

import numpy as np

BACKEND_NAME = "cython"


cdef double _pivmin(double[:] e):
    cdef double m = 1.0
    cdef Py_ssize_t i
    for i in range(e.shape[0]):
        if e[i] * e[i] > m:
            m = e[i] * e[i]
    return m * 1e-290


cdef Py_ssize_t _count(double[:] d, double[:] e, double x, double piv) nogil:
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t i, c = 0
    cdef double q = d[0] - x
    if q < 0:
        c += 1
    for i in range(1, n):
        if fabs(q) < piv:
            q = -piv
        q = d[i] - x - e[i - 1] * e[i - 1] / q
        if q < 0:
            c += 1
    return c


def sturm_count(double[:] d, double[:] e, double x):
    return int(_count(d, e, x, _pivmin(e)))


def sturm_counts(d, e, shifts):
    cdef double[:] dv = np.ascontiguousarray(d, dtype=np.float64)
    cdef double[:] ev = np.ascontiguousarray(e, dtype=np.float64)
    xs = np.atleast_1d(np.asarray(shifts, dtype=np.float64))
    out = np.empty(xs.shape[0], dtype=np.int64)
    cdef double[:] xv = xs
    cdef long long[:] ov = out
    cdef double piv = _pivmin(ev)
    cdef Py_ssize_t k
    for k in range(xv.shape[0]):
        ov[k] = _count(dv, ev, xv[k], piv)
    return out


def eigvals_smallest(d, e, Py_ssize_t num, double tol=1e-12):
    cdef double[:] dv = np.ascontiguousarray(d, dtype=np.float64)
    cdef double[:] ev = np.ascontiguousarray(e, dtype=np.float64)
    cdef Py_ssize_t n = dv.shape[0]
    cdef double piv = _pivmin(ev)
    cdef double glo, ghi, rad, lo, hi, mid
    cdef Py_ssize_t i, j

    glo = dv[0]
    ghi = dv[0]
    for i in range(n):
        rad = 0.0
        if i > 0:
            rad += fabs(ev[i - 1])
        if i < n - 1:
            rad += fabs(ev[i])
        if dv[i] - rad < glo:
            glo = dv[i] - rad
        if dv[i] + rad > ghi:
            ghi = dv[i] + rad

    out = np.empty(num, dtype=np.float64)
    cdef double[:] ov = out
    for j in range(num):
        lo = glo
        hi = ghi
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break  # bracket is at floating-point resolution
            if _count(dv, ev, mid, piv) <= j:
                lo = mid
            else:
                hi = mid
        ov[j] = 0.5 * (lo + hi)
    return out


def solve_shifted(d, e, double lam, rhs):
    """Solve (T - lam*I) x = rhs with partial pivoting."""
    cdef double[:] dv = np.ascontiguousarray(d, dtype=np.float64)
    cdef double[:] ev = np.ascontiguousarray(e, dtype=np.float64)
    cdef Py_ssize_t n = dv.shape[0]
    b = np.empty(n, dtype=np.float64)
    c = np.zeros(n, dtype=np.float64)
    u = np.empty(n, dtype=np.float64)
    v = np.zeros(n, dtype=np.float64)
    w = np.zeros(n, dtype=np.float64)
    r = np.array(rhs, dtype=np.float64)
    x = np.empty(n, dtype=np.float64)
    cdef double[:] bv = b, cv = c, uv = u, vv = v, wv = w, rv = r, xv = x
    cdef double piv = _pivmin(ev)
    cdef double m, tmp
    cdef Py_ssize_t i

    for i in range(n):
        bv[i] = dv[i] - lam
        if i < n - 1:
            cv[i] = ev[i]

    for i in range(n - 1):
        if fabs(bv[i]) >= fabs(ev[i]):
            if fabs(bv[i]) < piv:
                bv[i] = piv if bv[i] >= 0 else -piv
            m = ev[i] / bv[i]
            uv[i] = bv[i]
            vv[i] = cv[i]
            bv[i + 1] = bv[i + 1] - m * cv[i]
            rv[i + 1] = rv[i + 1] - m * rv[i]
        else:
            # swap rows i and i+1
            m = bv[i] / ev[i]
            uv[i] = ev[i]
            vv[i] = bv[i + 1]
            wv[i] = cv[i + 1]
            tmp = rv[i]
            rv[i] = rv[i + 1]
            rv[i + 1] = tmp - m * rv[i]
            bv[i + 1] = cv[i] - m * vv[i]
            cv[i + 1] = -m * wv[i]
    uv[n - 1] = bv[n - 1]
    if fabs(uv[n - 1]) < piv:
        uv[n - 1] = piv if uv[n - 1] >= 0 else -piv

    xv[n - 1] = rv[n - 1] / uv[n - 1]
    if n > 1:
        xv[n - 2] = (rv[n - 2] - vv[n - 2] * xv[n - 1]) / uv[n - 2]
    for i in range(n - 3, -1, -1):
        xv[i] = (rv[i] - vv[i] * xv[i + 1] - wv[i] * xv[i + 2]) / uv[i]
    return x
