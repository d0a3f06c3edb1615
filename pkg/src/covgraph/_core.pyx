# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Signatures mirror covgraph._fallback exactly."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64


def power_embed(const i64[::1] indptr, const i64[::1] indices, int k):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t i, p, t
    cdef double acc, s
    cdef double dn = <double>n
    out = np.empty((n, k), dtype=np.float64)
    cdef double[:, ::1] M = out
    cdef double[::1] x = np.ones(n, dtype=np.float64)
    cdef double[::1] y = np.empty(n, dtype=np.float64)
    for t in range(k):
        s = 0.0
        for i in range(n):
            acc = 0.0
            for p in range(indptr[i], indptr[i + 1]):
                acc += x[indices[p]]
            y[i] = acc
            s += acc
        if s == 0.0:
            raise FloatingPointError(f"iterate {t + 1} has zero L1 norm")
        for i in range(n):
            x[i] = dn * y[i] / s
            M[i, t] = x[i]
    return out


def covariance(const double[:, ::1] M):
    cdef Py_ssize_t n = M.shape[0], k = M.shape[1]
    cdef Py_ssize_t r, a, b
    cdef double da
    out = np.zeros((k, k), dtype=np.float64)
    cdef double[:, ::1] C = out
    cdef double[::1] d = np.empty(k, dtype=np.float64)
    for r in range(n):
        for a in range(k):
            d[a] = M[r, a] - 1.0
        for a in range(k):
            da = d[a]
            for b in range(a, k):
                C[a, b] += da * d[b]
    for a in range(k):
        for b in range(a, k):
            C[a, b] /= n
            C[b, a] = C[a, b]
    return out


def node_triangles(const i64[::1] indptr, const i64[::1] indices):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t u, v, pu, pv, qu, qv, eu, ev
    out = np.zeros(n, dtype=np.int64)
    cdef i64[::1] tri = out
    for u in range(n):
        eu = indptr[u + 1]
        for pu in range(indptr[u], eu):
            v = indices[pu]
            if v <= u:
                continue
            # w > v common to both lists
            qu = pu + 1
            qv = indptr[v]
            ev = indptr[v + 1]
            while qv < ev and indices[qv] <= v:
                qv += 1
            while qu < eu and qv < ev:
                if indices[qu] < indices[qv]:
                    qu += 1
                elif indices[qu] > indices[qv]:
                    qv += 1
                else:
                    tri[u] += 1
                    tri[v] += 1
                    tri[indices[qu]] += 1
                    qu += 1
                    qv += 1
    return out


cdef inline bint _adjacent(const i64[::1] indptr, const i64[::1] indices, i64 u, i64 v) nogil:
    cdef i64 lo = indptr[u], hi = indptr[u + 1], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if indices[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return lo < indptr[u + 1] and indices[lo] == v


def induced_codes(const i64[::1] indptr, const i64[::1] indices, const i64[:, ::1] nodes):
    cdef Py_ssize_t s = nodes.shape[0], kappa = nodes.shape[1]
    cdef Py_ssize_t r, a, b
    cdef i64 code
    out = np.empty(s, dtype=np.int64)
    cdef i64[::1] codes = out
    for r in range(s):
        code = 0
        for a in range(kappa):
            for b in range(a + 1, kappa):
                code = (code << 1) | _adjacent(indptr, indices, nodes[r, a], nodes[r, b])
        codes[r] = code
    return out
