"""Pure numpy/scipy implementations of the hot kernels.

Used when the compiled ``_core`` extension is unavailable or when
``COVGRAPH_PURE_PYTHON=1`` is set. Every function here has a twin in
``_core.pyx`` with the same signature and output.
"""

import numpy as np


def power_embed(indptr, indices, k):
    n = len(indptr) - 1
    rows = np.repeat(np.arange(n), np.diff(indptr))
    M = np.empty((n, k), dtype=np.float64)
    x = np.ones(n, dtype=np.float64)
    for t in range(k):
        y = np.bincount(rows, weights=x[indices], minlength=n)
        s = y.sum()
        if s == 0.0:
            raise FloatingPointError(f"iterate {t + 1} has zero L1 norm")
        x = n * y / s
        M[:, t] = x
    return M


def covariance(M):
    n = M.shape[0]
    D = M - 1.0
    C = D.T @ D / n
    return (C + C.T) / 2


def node_triangles(indptr, indices):
    import scipy.sparse as sp

    n = len(indptr) - 1
    A = sp.csr_matrix((np.ones(len(indices), dtype=np.int64), indices, indptr), shape=(n, n))
    closed = (A @ A).multiply(A)
    return np.asarray(closed.sum(axis=1)).ravel().astype(np.int64) // 2


def induced_codes(indptr, indices, nodes):
    n = len(indptr) - 1
    keys = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr)) * n + indices
    nodes = np.asarray(nodes, dtype=np.int64)
    kappa = nodes.shape[1]
    codes = np.zeros(len(nodes), dtype=np.int64)
    for a in range(kappa):
        for b in range(a + 1, kappa):
            q = nodes[:, a] * n + nodes[:, b]
            pos = np.minimum(np.searchsorted(keys, q), max(len(keys) - 1, 0))
            hit = keys[pos] == q if len(keys) else np.zeros(len(q), dtype=bool)
            codes = (codes << 1) | hit
    return codes
