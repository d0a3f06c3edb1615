"""Sparse undirected graph model, edge-list I/O, statistics and generators."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _backend

log = logging.getLogger(__name__)


class GraphError(ValueError):
    """Raised for malformed graph input or invalid graph operations."""


class EdgeListParseError(GraphError):
    def __init__(self, lineno: int, line: str, reason: str):
        super().__init__(f"line {lineno}: {reason}: {line!r}")
        self.lineno = lineno


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple undirected graph in compressed neighbor-list form.

    ``indptr``/``indices`` follow the CSR convention: the neighbors of node
    ``i`` are ``indices[indptr[i]:indptr[i + 1]]``, sorted ascending.
    ``ids[i]`` is the original identifier of dense node ``i``.
    """

    indptr: np.ndarray
    indices: np.ndarray
    ids: tuple[str, ...]

    def __post_init__(self):
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def index_of(self, node_id) -> int:
        try:
            return self._id_index[str(node_id)]
        except KeyError:
            raise GraphError(f"unknown node id {node_id!r}") from None

    @property
    def _id_index(self) -> dict[str, int]:
        cache = self.__dict__.get("_id_cache")
        if cache is None:
            cache = {s: i for i, s in enumerate(self.ids)}
            object.__setattr__(self, "_id_cache", cache)
        return cache

    def edges(self) -> np.ndarray:
        """Return the ``(m, 2)`` array of edges ``(u, v)`` with ``u < v``."""
        rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        mask = rows < self.indices
        return np.column_stack([rows[mask], self.indices[mask]])

    def to_scipy(self):
        import scipy.sparse as sp

        data = np.ones(len(self.indices), dtype=np.float64)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        e = self.edges()
        a[e[:, 0], e[:, 1]] = 1
        a[e[:, 1], e[:, 0]] = 1
        return a

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = np.zeros(self.n, dtype=bool)
        seen[0] = True
        frontier = [0]
        while frontier:
            nxt = []
            for u in frontier:
                for v in self.neighbors(u):
                    if not seen[v]:
                        seen[v] = True
                        nxt.append(int(v))
            frontier = nxt
        return bool(seen.all())

    def same_structure(self, other: "Graph") -> bool:
        """True when both graphs have identical dense adjacency (ids ignored)."""
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def from_edges(n: int, edges, ids: Sequence[str] | None = None) -> Graph:
    """Build a :class:`Graph` on ``n`` dense nodes from an iterable of pairs.

    Edges are symmetrized, self-loops dropped and duplicates merged.
    """
    e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
    if e.size == 0:
        e = e.reshape(0, 2)
    if e.ndim != 2 or e.shape[1] != 2:
        raise GraphError("edges must be pairs")
    if len(e) and (e.min() < 0 or e.max() >= n):
        raise GraphError("edge endpoint out of range")
    e = e[e[:, 0] != e[:, 1]]
    both = np.concatenate([e, e[:, ::-1]])
    keys = np.unique(both[:, 0] * n + both[:, 1])
    rows, cols = np.divmod(keys, n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
    if ids is None:
        ids = tuple(str(i) for i in range(n))
    elif len(ids) != n:
        raise GraphError("ids length does not match node count")
    return Graph(indptr, cols.astype(np.int64), tuple(str(s) for s in ids))


def parse_edge_list(text: str | Iterable[str]) -> Graph:
    """Parse a SNAP-style edge list.

    Lines starting with ``#`` are comments, except ``# isolated: <id>`` which
    declares a node without edges (written by :func:`serialize_edge_list`).
    Dense indices are assigned in order of first appearance.
    """
    lines = text.splitlines() if isinstance(text, str) else text
    index: dict[str, int] = {}
    pairs: list[tuple[int, int]] = []
    selfloops = 0

    def intern(tok: str) -> int:
        i = index.get(tok)
        if i is None:
            i = index[tok] = len(index)
        return i

    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("isolated:"):
                for tok in body[len("isolated:"):].split():
                    intern(tok)
            continue
        toks = line.split()
        if len(toks) < 2:
            raise EdgeListParseError(lineno, raw, "expected two node identifiers")
        if len(toks) > 2:
            # SNAP files occasionally carry a weight/timestamp column
            try:
                [float(t) for t in toks[2:]]
            except ValueError:
                raise EdgeListParseError(lineno, raw, "expected two node identifiers") from None
        u, v = intern(toks[0]), intern(toks[1])
        if u == v:
            selfloops += 1
            continue
        pairs.append((u, v))

    if not pairs:
        raise GraphError("graph has no edges")
    g = from_edges(len(index), pairs, ids=list(index))
    dupes = len(pairs) - g.m
    if dupes or selfloops:
        log.warning("edge list: merged %d duplicate/reverse edges, dropped %d self-loops", dupes, selfloops)
    if not g.is_connected():
        log.warning("graph with n=%d, m=%d is disconnected", g.n, g.m)
    return g


def serialize_edge_list(g: Graph) -> str:
    """Inverse of :func:`parse_edge_list` (node ids preserved)."""
    out = [f"# nodes: {g.n} edges: {g.m}"]
    isolated = [g.ids[i] for i in np.flatnonzero(g.degrees == 0)]
    if isolated:
        out.append("# isolated: " + " ".join(isolated))
    for u, v in g.edges():
        out.append(f"{g.ids[u]} {g.ids[v]}")
    return "\n".join(out) + "\n"


def apply_permutation(g: Graph, perm) -> Graph:
    """Relabel ``g`` so that node ``i`` becomes node ``perm[i]``."""
    p = np.asarray(perm, dtype=np.int64)
    if p.shape != (g.n,):
        raise GraphError(f"permutation has size {p.size}, graph has {g.n} nodes")
    if not np.array_equal(np.sort(p), np.arange(g.n)):
        raise GraphError("permutation is not a bijection")
    ids = [""] * g.n
    for i, s in enumerate(g.ids):
        ids[p[i]] = s
    return from_edges(g.n, p[g.edges()], ids=ids)


def random_permutation(n: int, seed=None) -> np.ndarray:
    return np.random.default_rng(seed).permutation(n)


@dataclass(frozen=True)
class GraphStats:
    n: int
    m: int
    degree_mean: float
    degree_variance: float
    clustering_coefficient: float
    triangle_count: int


def node_triangles(g: Graph) -> np.ndarray:
    """Number of triangles through each node."""
    return _backend.node_triangles(g.indptr, g.indices)


def triangle_count(g: Graph) -> int:
    return int(node_triangles(g).sum()) // 3


def degree_variance_exact(g: Graph) -> Fraction:
    """Population variance of the degree sequence as an exact rational."""
    d = [int(x) for x in g.degrees]
    n = len(d)
    s1, s2 = sum(d), sum(x * x for x in d)
    return Fraction(n * s2 - s1 * s1, n * n)


def compute_stats(g: Graph) -> GraphStats:
    deg = g.degrees
    tri = node_triangles(g)
    pairs = deg * (deg - 1)
    local = np.divide(2.0 * tri, pairs, out=np.zeros(g.n), where=pairs > 0)
    return GraphStats(
        n=g.n,
        m=g.m,
        degree_mean=2 * g.m / g.n,
        degree_variance=float(degree_variance_exact(g)),
        # fsum is exactly rounded, so the mean does not depend on node order
        clustering_coefficient=math.fsum(local.tolist()) / g.n,
        triangle_count=int(tri.sum()) // 3,
    )


def _pair_keys(n: int, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    lo, hi = np.minimum(u, v), np.maximum(u, v)
    return lo * n + hi


def generate_matched_random(n: int, m: int, seed=None) -> Graph:
    """Erdős–Rényi graph with exactly ``n`` nodes and ``m`` edges.

    Node pairs are drawn uniformly at random; pairs that are self-loops or
    already present are rejected, until ``m`` distinct edges exist. Draws are
    batched but accepted in draw order, so the result is the same as the
    one-at-a-time process for a given random stream.
    """
    total = n * (n - 1) // 2
    if not 1 <= m <= total:
        raise GraphError(f"edge count {m} outside [1, {total}] for n={n}")
    rng = np.random.default_rng(seed)
    complement = m > 0.75 * total
    target = total - m if complement else m
    keys = np.empty(0, dtype=np.int64)
    while len(keys) < target:
        batch = max(2 * (target - len(keys)), 64)
        u = rng.integers(0, n, size=batch)
        v = rng.integers(0, n, size=batch)
        ok = u != v
        cand = np.concatenate([keys, _pair_keys(n, u[ok], v[ok])])
        _, first = np.unique(cand, return_index=True)
        keys = cand[np.sort(first)][:target]
    if complement:
        iu, ju = np.triu_indices(n, 1)
        allkeys = iu.astype(np.int64) * n + ju
        keys = np.setdiff1d(allkeys, keys, assume_unique=True)
    u, v = np.divmod(keys, n)
    return from_edges(n, np.column_stack([u, v]))


def complete_graph(n: int) -> Graph:
    iu, ju = np.triu_indices(n, 1)
    return from_edges(n, np.column_stack([iu, ju]))


def cycle_graph(n: int) -> Graph:
    i = np.arange(n)
    return from_edges(n, np.column_stack([i, (i + 1) % n]))


def path_graph(n: int) -> Graph:
    i = np.arange(n - 1)
    return from_edges(n, np.column_stack([i, i + 1]))


def star_graph(n: int) -> Graph:
    """Star on ``n`` nodes with hub 0."""
    return from_edges(n, [(0, i) for i in range(1, n)])


def extract_ego_network(g: Graph, center, min_degree: int) -> Graph | None:
    """Induced subgraph on ``center`` and its neighbors.

    Returns ``None`` when ``degree(center) <= min_degree``. ``center`` is an
    original node id. The center becomes node 0, neighbors follow in index
    order.
    """
    c = g.index_of(center)
    nbrs = g.neighbors(c)
    if len(nbrs) <= min_degree:
        return None
    return induced_subgraph(g, np.concatenate([[c], nbrs]))


def induced_subgraph(g: Graph, nodes) -> Graph:
    nodes = np.asarray(nodes, dtype=np.int64)
    local = np.full(g.n, -1, dtype=np.int64)
    local[nodes] = np.arange(len(nodes))
    e = g.edges()
    keep = (local[e[:, 0]] >= 0) & (local[e[:, 1]] >= 0)
    return from_edges(len(nodes), local[e[keep]], ids=[g.ids[i] for i in nodes])


def generate_social(n: int, edges_per_node: int, triad_prob: float, seed=None) -> Graph:
    """Synthetic social-style graph: preferential attachment with triadic closure.

    Each arriving node links to one existing node chosen proportionally to
    degree, then adds ``edges_per_node - 1`` further links; each is a triadic
    closure step (a random neighbor of that first target) with probability
    ``triad_prob`` and another preferential-attachment step otherwise.
    """
    if edges_per_node < 1 or n <= edges_per_node:
        raise GraphError("need n > edges_per_node >= 1")
    rng = np.random.default_rng(seed)
    adj: list[set[int]] = [set() for _ in range(n)]
    seed_nodes = edges_per_node + 1
    for i in range(seed_nodes):
        for j in range(i + 1, seed_nodes):
            adj[i].add(j)
            adj[j].add(i)
    # endpoint multiset: sampling from it is degree-proportional
    stubs = [u for u in range(seed_nodes) for _ in adj[u]]
    for new in range(seed_nodes, n):
        targets: list[int] = []
        target = stubs[rng.integers(len(stubs))]
        targets.append(target)
        while len(targets) < edges_per_node:
            cand = None
            if rng.random() < triad_prob:
                pool = [w for w in adj[target] if w not in targets]
                if pool:
                    cand = pool[rng.integers(len(pool))]
            if cand is None:
                for _ in range(32):
                    c = stubs[rng.integers(len(stubs))]
                    if c not in targets:
                        cand = c
                        break
                else:
                    pool = [w for w in range(new) if w not in targets]
                    cand = pool[rng.integers(len(pool))]
            targets.append(cand)
        for t in targets:
            adj[new].add(t)
            adj[t].add(new)
            stubs.extend((new, t))
    edges = [(u, v) for u in range(n) for v in adj[u] if u < v]
    return from_edges(n, edges)
