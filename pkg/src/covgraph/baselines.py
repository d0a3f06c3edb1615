"""Competing graph similarities: subgraph frequencies, top eigenvalues, random walks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Sequence

import numpy as np

from . import _backend
from .graph import Graph, GraphError
from .kernel import GramMatrix

DEFAULT_SAMPLES = 1000
CLASS_COUNTS = {3: 4, 4: 11, 5: 34}


@dataclass(frozen=True, eq=False)
class CanonicalTable:
    """Isomorphism classes of graphs on ``kappa`` labeled nodes.

    Adjacency is encoded as an integer whose bits, most significant first,
    are the node pairs ``(0,1), (0,2), ..., (kappa-2, kappa-1)``. ``lookup``
    maps every such code to its class index; ``canonical`` lists the
    canonical (lexicographically minimal) code of each class in class order.
    """

    kappa: int
    canonical: tuple[int, ...]
    lookup: np.ndarray

    @property
    def n_classes(self) -> int:
        return len(self.canonical)

    def bitstring(self, cls: int) -> str:
        width = self.kappa * (self.kappa - 1) // 2
        return format(self.canonical[cls], f"0{width}b")

    @property
    def map(self) -> dict[str, int]:
        return {self.bitstring(c): c for c in range(self.n_classes)}

    def classify(self, codes) -> np.ndarray:
        return self.lookup[np.asarray(codes)]


@lru_cache(maxsize=None)
def build_canonical_table(kappa: int) -> CanonicalTable:
    if kappa not in CLASS_COUNTS:
        raise ValueError("kappa must be 3, 4 or 5")
    pairs = list(combinations(range(kappa), 2))
    width = len(pairs)
    pos = {p: i for i, p in enumerate(pairs)}
    # for each relabeling, where bit i of the original lands
    moves = []
    for perm in permutations(range(kappa)):
        moves.append([pos[tuple(sorted((perm[a], perm[b])))] for a, b in pairs])
    canon = np.empty(1 << width, dtype=np.int64)
    for code in range(1 << width):
        bits = [(code >> (width - 1 - i)) & 1 for i in range(width)]
        best = None
        for mv in moves:
            c = 0
            for i, b in enumerate(bits):
                if b:
                    c |= 1 << (width - 1 - mv[i])
            if best is None or c < best:
                best = c
        canon[code] = best
    classes = tuple(int(c) for c in np.unique(canon))
    index = {c: i for i, c in enumerate(classes)}
    lookup = np.array([index[int(c)] for c in canon], dtype=np.int64)
    lookup.setflags(write=False)
    return CanonicalTable(kappa, classes, lookup)


@dataclass(frozen=True, eq=False)
class SubgraphHistogram:
    kappa: int
    counts: np.ndarray

    @property
    def normalized(self) -> np.ndarray:
        return self.counts / self.counts.sum()


def _census_kappa3(g: Graph) -> np.ndarray:
    n, m = g.n, g.m
    deg = g.degrees.astype(np.int64)
    tri = int(_backend.node_triangles(g.indptr, g.indices).sum()) // 3
    wedges = int((deg * (deg - 1) // 2).sum())
    paths = wedges - 3 * tri
    one_edge = m * (n - 2) - 2 * paths - 3 * tri
    empty = math.comb(n, 3) - one_edge - paths - tri
    return np.array([empty, one_edge, paths, tri], dtype=np.int64)


def subgraph_histogram_exact(g: Graph, kappa: int = 3) -> SubgraphHistogram:
    """Census of all induced ``kappa``-node subgraphs.

    ``kappa=3`` uses closed-form counts from degrees and triangles;
    larger ``kappa`` enumerates every node subset and is meant for small
    graphs only.
    """
    if g.n < kappa:
        raise GraphError(f"graph has {g.n} nodes, need at least {kappa}")
    if kappa == 3:
        return SubgraphHistogram(3, _census_kappa3(g))
    table = build_canonical_table(kappa)
    counts = np.zeros(table.n_classes, dtype=np.int64)
    it = combinations(range(g.n), kappa)
    while True:
        chunk = np.array(list(_take(it, 65536)), dtype=np.int64)
        if chunk.size == 0:
            break
        codes = _backend.induced_codes(g.indptr, g.indices, chunk.reshape(-1, kappa))
        counts += np.bincount(table.classify(codes), minlength=table.n_classes)
    return SubgraphHistogram(kappa, counts)


def _take(it, n):
    for _, x in zip(range(n), it):
        yield x


def _sample_subsets(rng: np.random.Generator, n: int, kappa: int, samples: int) -> np.ndarray:
    if n < 2 * kappa:
        return np.argsort(rng.random((samples, n)), axis=1)[:, :kappa].astype(np.int64)
    out = rng.integers(0, n, size=(samples, kappa))
    while True:
        s = np.sort(out, axis=1)
        bad = np.flatnonzero((s[:, 1:] == s[:, :-1]).any(axis=1))
        if bad.size == 0:
            return out.astype(np.int64)
        out[bad] = rng.integers(0, n, size=(bad.size, kappa))


def subgraph_histogram_sampled(
    g: Graph, kappa: int = 4, samples: int = DEFAULT_SAMPLES, seed=None
) -> SubgraphHistogram:
    """Histogram of induced subgraphs on uniformly sampled ``kappa``-node sets."""
    if g.n < kappa:
        raise GraphError(f"graph has {g.n} nodes, need at least {kappa}")
    if samples < 1:
        raise ValueError("samples must be positive")
    table = build_canonical_table(kappa)
    nodes = _sample_subsets(np.random.default_rng(seed), g.n, kappa, samples)
    codes = _backend.induced_codes(g.indptr, g.indices, np.ascontiguousarray(nodes))
    return SubgraphHistogram(kappa, np.bincount(table.classify(codes), minlength=table.n_classes))


def histogram_similarity(h1: SubgraphHistogram, h2: SubgraphHistogram) -> float:
    if h1.kappa != h2.kappa:
        raise ValueError(f"histogram sizes differ: kappa {h1.kappa} vs {h2.kappa}")
    return float(h1.normalized @ h2.normalized)


def top_eigenvalues(g: Graph, k: int) -> np.ndarray:
    if k < 1:
        raise ValueError("k must be positive")
    lam = np.linalg.eigvalsh(g.to_dense().astype(np.float64))[::-1]
    out = np.zeros(k)
    out[: min(k, g.n)] = lam[:k]
    return out


def eigs_similarity(v1, v2) -> float:
    v1, v2 = np.asarray(v1, dtype=float), np.asarray(v2, dtype=float)
    if v1.shape != v2.shape:
        raise ValueError("eigenvalue vectors differ in length")
    n1, n2 = np.linalg.norm(v1), np.linalg.norm(v2)
    if n1 == 0 or n2 == 0:
        return 0.0
    return float(v1 @ v2 / (n1 * n2))


def spectral_radius_bound(g: Graph, iters: int = 100) -> float:
    """Power-iteration estimate of the largest adjacency eigenvalue.

    Iterates on ``A + I`` so the iterate stays strictly positive; the
    Collatz-Wielandt ratio ``max_i ((A+I)x)_i / x_i - 1`` is then an upper
    bound on the spectral radius that tightens as the iteration converges.
    """
    A = g.to_scipy()
    x = np.ones(g.n)
    bound = float(g.degrees.max())
    for _ in range(iters):
        y = A @ x + x
        bound = min(bound, float((y / x).max()) - 1.0)
        x = y / y.max()
        if x.min() < 1e-200:
            # small components decay toward underflow; x must stay positive
            break
    return max(bound, 0.0)


def default_rw_decay(a: Graph, b: Graph) -> float:
    lam = spectral_radius_bound(a) * spectral_radius_bound(b)
    return min(0.1, 0.5 / lam) if lam > 0 else 0.1


class ConvergenceError(RuntimeError):
    pass


def random_walk_similarity(
    a: Graph, b: Graph, decay: float | None = None, tol: float = 1e-12, max_iters: int = 10_000
) -> float:
    """Random-walk similarity via fixed-point iteration.

    Solves ``M = decay * A^T M B + e e^T`` starting from ``M = e e^T`` and
    returns ``e^T M e / (n_a n_b)``. The update contracts when
    ``decay * rho(A) * rho(B) < 1``.
    """
    if decay is None:
        decay = default_rw_decay(a, b)
    if not 0 < decay < 1:
        raise ValueError("decay must lie in (0, 1)")
    A, B = a.to_scipy(), b.to_scipy()
    J = np.ones((a.n, b.n))
    M = J.copy()
    for _ in range(max_iters):
        nxt = decay * (A.T @ (B.T @ M.T).T) + J
        delta = np.abs(nxt - M).max()
        M = nxt
        if delta < tol:
            return float(M.sum() / (a.n * b.n))
    raise ConvergenceError("decay too large for spectral radii")


def _seeds(seed, count):
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(count)]


def histogram_gram(graphs: Sequence[Graph], kappa: int, samples: int = DEFAULT_SAMPLES, seed=0, names=None, labels=None):
    if kappa == 3:
        hists = [subgraph_histogram_exact(g, 3) for g in graphs]
    else:
        hists = [subgraph_histogram_sampled(g, kappa, samples, s) for g, s in zip(graphs, _seeds(seed, len(graphs)))]
    H = np.array([h.normalized for h in hists])
    return _gram(H @ H.T, graphs, names, labels, method=f"subfreq{kappa}")


def eigs_gram(graphs: Sequence[Graph], k: int, names=None, labels=None):
    V = np.array([top_eigenvalues(g, k) for g in graphs])
    N = len(graphs)
    K = np.empty((N, N))
    for i in range(N):
        for j in range(i, N):
            K[i, j] = K[j, i] = eigs_similarity(V[i], V[j])
    return _gram(K, graphs, names, labels, method=f"eigs{k}")


def rw_gram(graphs: Sequence[Graph], decay=None, names=None, labels=None):
    N = len(graphs)
    radii = [spectral_radius_bound(g) for g in graphs]
    K = np.empty((N, N))
    for i in range(N):
        for j in range(i, N):
            d = decay
            if d is None:
                lam = radii[i] * radii[j]
                d = min(0.1, 0.5 / lam) if lam > 0 else 0.1
            K[i, j] = K[j, i] = random_walk_similarity(graphs[i], graphs[j], d)
    return _gram(K, graphs, names, labels, method="rw")


def _gram(K, graphs, names, labels, method):
    if names is None:
        names = [f"g{i}" for i in range(len(graphs))]
    return GramMatrix(K, list(names), None if labels is None else list(labels), {"method": method})


METHODS = ("subfreq3", "subfreq4", "subfreq5", "eigs5", "eigs10", "rw")


def baseline_gram(method: str, graphs, seed=0, samples=DEFAULT_SAMPLES, names=None, labels=None):
    if method == "subfreq3":
        return histogram_gram(graphs, 3, names=names, labels=labels)
    if method in ("subfreq4", "subfreq5"):
        return histogram_gram(graphs, int(method[-1]), samples, seed, names, labels)
    if method.startswith("eigs"):
        return eigs_gram(graphs, int(method[4:]), names, labels)
    if method == "rw":
        return rw_gram(graphs, names=names, labels=labels)
    raise ValueError(f"unknown baseline method {method!r}")
