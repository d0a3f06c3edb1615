"""Independent reference computations used to certify the fast paths.

Nothing here shares code with :mod:`covgraph.embedding`: descriptors are
rebuilt from a dense eigendecomposition, and walk sums, path counts and
triangles come from explicit enumeration on small graphs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .embedding import CovarianceDescriptor
from .graph import Graph, GraphError, from_edges

DENSE_CAP = 2000
ENUM_CAP = 12


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    eigenvalues: np.ndarray  # descending
    component_sums: np.ndarray

    @property
    def n(self) -> int:
        return len(self.eigenvalues)


def dense_spectral(g: Graph) -> SpectralDecomposition:
    if g.n > DENSE_CAP:
        raise GraphError(f"dense eigendecomposition capped at n={DENSE_CAP}, got {g.n}")
    lam, vec = np.linalg.eigh(g.to_dense().astype(np.float64))
    order = np.argsort(lam)[::-1]
    return SpectralDecomposition(lam[order], vec[:, order].sum(axis=0))


def closed_form_descriptor(sd: SpectralDecomposition, k: int) -> CovarianceDescriptor:
    """Descriptor entries from eigenvalues and eigenvector component sums.

    ``C[i][j] = n S(i+j+2) / (S(i+1) S(j+1)) - 1`` with
    ``S(t) = sum_r lambda_r^t s_r^2`` (0-based ``i, j``).
    """
    n = sd.n
    s2 = sd.component_sums ** 2
    # all weight on one eigenvector: e is an eigenvector, the graph is regular
    if s2.sum() - s2.max() <= 1e-12 * n:
        return CovarianceDescriptor(np.zeros((k, k)))
    powers = sd.eigenvalues[None, :] ** np.arange(1, 2 * k + 1)[:, None]
    S = powers @ s2  # S[t-1] = e^T A^t e
    if np.any(S[:k] <= 0):
        raise FloatingPointError("vanishing walk sum in closed-form descriptor")
    C = np.empty((k, k))
    for i in range(k):
        for j in range(k):
            C[i, j] = n * S[i + j + 1] / (S[i] * S[j]) - 1.0
    return CovarianceDescriptor(C)


@dataclass(frozen=True)
class PathCensus:
    P2: int
    P3: int
    triangles: int
    walk_sums: dict = field(default_factory=dict)


def _simple_paths(adj: np.ndarray, length: int) -> set[frozenset]:
    """Distinct simple paths of the given length, each keyed by its edge set."""
    n = len(adj)
    found = set()

    def extend(seq):
        if len(seq) == length + 1:
            found.add(frozenset(frozenset(e) for e in zip(seq, seq[1:])))
            return
        for w in range(n):
            if adj[seq[-1], w] and w not in seq:
                extend(seq + [w])

    for v in range(n):
        extend([v])
    return found


def simple_path_sequences(g: Graph, length: int) -> int:
    """Number of vertex sequences forming simple paths (both directions counted)."""
    adj = g.to_dense()
    count = 0

    def extend(seq):
        nonlocal count
        if len(seq) == length + 1:
            count += 1
            return
        for w in range(g.n):
            if adj[seq[-1], w] and w not in seq:
                extend(seq + [w])

    for v in range(g.n):
        extend([v])
    return count


def brute_force_census(g: Graph, max_t: int = 3) -> PathCensus:
    if g.n > ENUM_CAP:
        raise GraphError(f"enumeration capped at n={ENUM_CAP}, got {g.n}")
    adj = g.to_dense()
    tri = sum(
        1 for a, b, c in combinations(range(g.n), 3) if adj[a, b] and adj[b, c] and adj[a, c]
    )
    rows = [[int(x) for x in r] for r in adj]
    w = [1] * g.n
    walks = {}
    for t in range(1, max_t + 1):
        w = [sum(r[j] * w[j] for j in range(g.n)) for r in rows]
        walks[t] = sum(w)
    return PathCensus(
        P2=len(_simple_paths(adj, 2)),
        P3=len(_simple_paths(adj, 3)),
        triangles=tri,
        walk_sums=walks,
    )


def _degree_variance(g: Graph) -> Fraction:
    d = [int(x) for x in g.degrees]
    n = len(d)
    mean = Fraction(sum(d), n)
    return Fraction(sum(x * x for x in d), n) - mean * mean


def c01_from_counts(g: Graph, census: PathCensus) -> float:
    """``C[0][1]`` from triangle, path and degree-variance counts."""
    n, m = g.n, g.m
    var = _degree_variance(g)
    num = 3 * census.triangles + census.P3 + n * var + m * (Fraction(4 * m, n) - 1)
    return float(Fraction(n, 2 * m) * num / (census.P2 + m) - 1)


@dataclass
class WalkIdentityReport:
    walk1: int
    walk2: int
    walk3: int
    two_edges_ok: bool  # e^T A e == 2m
    walk2_ok: bool  # e^T A^2 e == 2m + 2 P2
    walk3_ok: bool  # exact rational form
    walk3_float_ok: bool  # floating-point Var(deg) form, 1e-9
    census: PathCensus

    @property
    def ok(self) -> bool:
        return self.two_edges_ok and self.walk2_ok and self.walk3_ok and self.walk3_float_ok


def verify_walk_identities(g: Graph) -> WalkIdentityReport:
    c = brute_force_census(g, 3)
    n, m = g.n, g.m
    w1, w2, w3 = c.walk_sums[1], c.walk_sums[2], c.walk_sums[3]
    var = _degree_variance(g)
    rhs3 = 6 * c.triangles + 2 * c.P3 + 2 * n * var + 2 * m * (Fraction(4 * m, n) - 1)
    deg = g.degrees.astype(np.float64)
    var_f = float(np.mean(deg**2) - np.mean(deg) ** 2)
    rhs3_f = 6 * c.triangles + 2 * c.P3 + 2 * n * var_f + 2 * m * (4 * m / n - 1)
    return WalkIdentityReport(
        walk1=w1,
        walk2=w2,
        walk3=w3,
        two_edges_ok=w1 == 2 * m,
        walk2_ok=w2 == 2 * m + 2 * c.P2,
        walk3_ok=rhs3 == w3,
        walk3_float_ok=abs(rhs3_f - w3) <= 1e-9 * max(1, w3),
        census=c,
    )


def random_walk_dense(a: Graph, b: Graph, decay: float) -> float:
    """Random-walk similarity from a direct solve of the vectorized fixed point.

    With column-major ``vec``, ``vec(A^T M B) = (B^T kron A^T) vec(M)``, so
    ``(I - decay * B^T kron A^T) vec(M) = 1``.
    """
    n1, n2 = a.n, b.n
    if n1 * n2 > 4000:
        raise GraphError("dense random-walk oracle capped at n1*n2=4000")
    A = a.to_dense().astype(np.float64)
    B = b.to_dense().astype(np.float64)
    system = np.eye(n1 * n2) - decay * np.kron(B.T, A.T)
    x = np.linalg.solve(system, np.ones(n1 * n2))
    return float(x.sum() / (n1 * n2))


def connected_graphs(max_nodes: int = 7):
    """Every connected graph on 2..max_nodes nodes, one per isomorphism class."""
    import networkx as nx

    if max_nodes > 7:
        raise ValueError("graph atlas covers up to 7 nodes")
    for h in nx.graph_atlas_g():
        if 2 <= h.number_of_nodes() <= max_nodes and nx.is_connected(h):
            yield from_edges(h.number_of_nodes(), list(h.edges()))
