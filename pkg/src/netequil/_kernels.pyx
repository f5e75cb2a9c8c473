# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: behavioural twin of ``netequil._kernels_py``.

Same pivot rule, same termination rule, same pattern encoding.  Any change
here must be mirrored in the pure-python module.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()

BACKEND = "cython"
PIVOT_RTOL = 1e-12


cdef int _eliminate(double[:, ::1] m, double[:] rhs, double[:] out,
                    Py_ssize_t n, double threshold) nogil:
    """In-place partial-pivot elimination of ``m y = rhs``.

    Returns 0 on success (solution in ``out``) or the 1-based pivot step at
    which elimination broke down.
    """
    cdef Py_ssize_t k, i, j, p
    cdef double best, factor, acc, tmp
    for k in range(n):
        p = k
        best = fabs(m[k, k])
        for i in range(k + 1, n):
            if fabs(m[i, k]) > best:
                best = fabs(m[i, k])
                p = i
        if best < threshold:
            return <int>(k + 1)
        if p != k:
            for j in range(k, n):
                tmp = m[k, j]
                m[k, j] = m[p, j]
                m[p, j] = tmp
            tmp = rhs[k]
            rhs[k] = rhs[p]
            rhs[p] = tmp
        for i in range(k + 1, n):
            factor = m[i, k] / m[k, k]
            for j in range(k, n):
                m[i, j] -= factor * m[k, j]
            rhs[i] -= factor * rhs[k]
    for k in range(n - 1, -1, -1):
        acc = rhs[k]
        for j in range(k + 1, n):
            acc -= m[k, j] * out[j]
        out[k] = acc / m[k, k]
    return 0


def gauss_solve(a, b):
    """Solve ``x A = b`` by partial-pivot elimination; see the python twin."""
    cdef cnp.ndarray[double, ndim=2] a_arr = np.ascontiguousarray(a, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] b_arr = np.array(b, dtype=np.float64)
    cdef Py_ssize_t n = a_arr.shape[0]
    if n == 0:
        return np.zeros(0), 0
    cdef double scale = np.max(np.abs(a_arr))
    if scale == 0.0:
        return None, 1
    cdef cnp.ndarray[double, ndim=2] m = np.ascontiguousarray(a_arr.T)
    cdef cnp.ndarray[double, ndim=1] x = np.zeros(n)
    cdef int pivot = _eliminate(m, b_arr, x, n, PIVOT_RTOL * scale)
    if pivot:
        return None, pivot
    return x, 0


def clamp_iterate(w, eps, off, gain, lo, hi, x0, double tol, long kmax):
    """Iterate ``x <- clip(off + gain * (x W + eps), lo, hi)``; python twin doc."""
    cdef const double[:, ::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef const double[:] ev = np.ascontiguousarray(eps, dtype=np.float64)
    cdef const double[:] av = np.ascontiguousarray(off, dtype=np.float64)
    cdef const double[:] bv = np.ascontiguousarray(gain, dtype=np.float64)
    cdef const double[:] lv = np.ascontiguousarray(lo, dtype=np.float64)
    cdef const double[:] uv = np.ascontiguousarray(hi, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] x_arr = np.array(x0, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] y_arr = np.zeros_like(x_arr)
    cdef double[:] x = x_arr
    cdef double[:] y = y_arr
    cdef Py_ssize_t n = x_arr.shape[0]
    cdef Py_ssize_t i, j
    cdef long k
    cdef double acc, diff, d
    diff = np.inf
    if n == 0:
        return x_arr, 0.0, 1
    for k in range(1, kmax + 1):
        diff = 0.0
        with nogil:
            for j in range(n):
                acc = ev[j]
                for i in range(n):
                    acc += x[i] * wv[i, j]
                acc = av[j] + bv[j] * acc
                if acc < lv[j]:
                    acc = lv[j]
                elif acc > uv[j]:
                    acc = uv[j]
                y[j] = acc
                d = fabs(acc - x[j])
                if d > diff:
                    diff = d
        if diff <= tol:
            return x_arr, diff, k
        x_arr, y_arr = y_arr, x_arr
        x = x_arr
        y = y_arr
    return x_arr, diff, kmax


def pattern_scan(w, eps, lo, hi, double tol):
    """Enumerate all 3^n boundary patterns; see the python twin for the contract."""
    cdef const double[:, ::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef const double[:] ev = np.ascontiguousarray(eps, dtype=np.float64)
    cdef const double[:] lv = np.ascontiguousarray(lo, dtype=np.float64)
    cdef const double[:] uv = np.ascontiguousarray(hi, dtype=np.float64)
    cdef Py_ssize_t n = wv.shape[0]

    cdef cnp.ndarray[long, ndim=1] tags_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.ndarray[long, ndim=1] interior_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] x_arr = np.zeros(n)
    cdef cnp.ndarray[double, ndim=2] m_arr = np.zeros((n, n))
    cdef cnp.ndarray[double, ndim=1] rhs_arr = np.zeros(n)
    cdef cnp.ndarray[double, ndim=1] sol_arr = np.zeros(n)
    cdef long[:] tags = tags_arr
    cdef long[:] interior = interior_arr
    cdef double[:] x = x_arr
    cdef double[:, ::1] m = m_arr
    cdef double[:] rhs = rhs_arr
    cdef double[:] sol = sol_arr

    cdef long total = 1
    cdef Py_ssize_t k
    for k in range(n):
        total *= 3

    points = []
    point_patterns = []
    singular = []

    cdef long code, rem
    cdef Py_ssize_t i, j, p, q, ni
    cdef double acc, scale, entry
    cdef bint ok
    for code in range(total):
        rem = code
        ni = 0
        for k in range(n):
            tags[k] = rem % 3
            rem //= 3
            if tags[k] == 0:
                interior[ni] = k
                ni += 1
                x[k] = 0.0
            elif tags[k] == 1:
                x[k] = lv[k]
            else:
                x[k] = uv[k]
        ok = True
        if ni > 0:
            # m = (I - W_II)^T, rhs = (v W + eps) on the interior block
            scale = 0.0
            for p in range(ni):
                for q in range(ni):
                    entry = -wv[interior[q], interior[p]]
                    if p == q:
                        entry += 1.0
                    m[p, q] = entry
                    if fabs(entry) > scale:
                        scale = fabs(entry)
            if scale == 0.0:
                singular.append(code)
                continue
            for p in range(ni):
                j = interior[p]
                acc = ev[j]
                for i in range(n):
                    acc += x[i] * wv[i, j]
                rhs[p] = acc
            if _eliminate(m, rhs, sol, ni, PIVOT_RTOL * scale):
                singular.append(code)
                continue
            for p in range(ni):
                if sol[p] <= lv[interior[p]] or sol[p] >= uv[interior[p]]:
                    ok = False
                    break
            if not ok:
                continue
            for p in range(ni):
                x[interior[p]] = sol[p]
        for j in range(n):
            if tags[j] == 0:
                continue
            acc = ev[j]
            for i in range(n):
                acc += x[i] * wv[i, j]
            if tags[j] == 2 and acc < uv[j] - tol:
                ok = False
                break
            if tags[j] == 1 and acc > lv[j] + tol:
                ok = False
                break
        if not ok:
            continue
        points.append(x_arr.copy())
        point_patterns.append(code)
    return points, point_patterns, singular
