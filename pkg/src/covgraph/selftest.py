"""Oracle suite behind ``covgraph selftest``.

Each check returns ``(name, passed, detail)``; details carry fixed-precision
numbers only, so the printed table is reproducible for a given seed.
"""

from __future__ import annotations

import numpy as np

from . import baselines, oracle
from .embedding import embed_graph
from .graph import (
    apply_permutation,
    complete_graph,
    compute_stats,
    cycle_graph,
    generate_matched_random,
)
from .kernel import bhattacharyya_similarity, build_gram


def _random_graph(rng, n_lo, n_hi, nonregular=False):
    while True:
        n = int(rng.integers(n_lo, n_hi + 1))
        m = int(rng.integers(max(1, n - 1), n * (n - 1) // 2 + 1))
        g = generate_matched_random(n, m, seed=int(rng.integers(2**32)))
        if not nonregular or len(set(g.degrees.tolist())) > 1:
            return g


def check_permutation_invariance(rng, count=40, k=5):
    worst = 0.0
    for _ in range(count):
        g = _random_graph(rng, 5, 120)
        c = embed_graph(g, k).values
        p = rng.permutation(g.n)
        worst = max(worst, float(np.abs(c - embed_graph(apply_permutation(g, p), k).values).max()))
    return "permutation invariance", worst <= 1e-9, f"max |dC| = {worst:.1e}"


def check_spectral(rng, count=30, k=6):
    worst = 0.0
    for _ in range(count):
        g = _random_graph(rng, 4, 50, nonregular=True)
        a = embed_graph(g, k).values
        b = oracle.closed_form_descriptor(oracle.dense_spectral(g), k).values
        worst = max(worst, float((np.abs(a - b) / np.maximum(1.0, np.abs(b))).max()))
    return "spectral closed form", worst <= 1e-8, f"max rel err = {worst:.1e}"


def check_combinatorial(rng, count=60):
    worst, identity_fail, graphs = 0.0, 0, 0
    corpus = list(oracle.connected_graphs(6)) + [_random_graph(rng, 4, 10) for _ in range(count)]
    for g in corpus:
        rep = oracle.verify_walk_identities(g)
        identity_fail += not rep.ok
        c01 = embed_graph(g, 2).values[0, 1]
        worst = max(worst, abs(c01 - oracle.c01_from_counts(g, rep.census)))
        graphs += 1
    ok = worst <= 1e-10 and identity_fail == 0
    return "triangle/path identity", ok, f"{graphs} graphs, max err = {worst:.1e}, identity failures = {identity_fail}"


def check_regular_zero():
    bad = 0
    for n in range(3, 21):
        for g in (complete_graph(n), cycle_graph(n)):
            bad += int(np.any(embed_graph(g, 5).values != 0.0))
    return "regular graphs map to zero", bad == 0, f"{bad} nonzero descriptors"


def check_kernel(rng, count=30, k=5):
    graphs = [_random_graph(rng, 6, 60) for _ in range(count)]
    gm = build_gram(graphs, k)
    lo = float(np.linalg.eigvalsh(gm.values).min())
    diag_ok = bool(np.all(np.diag(gm.values) == 1.0))
    g = graphs[0]
    s = bhattacharyya_similarity(embed_graph(g, k), embed_graph(apply_permutation(g, rng.permutation(g.n)), k))
    ok = lo >= -1e-8 * count and diag_ok and abs(s - 1.0) <= 1e-9
    return "kernel validity", ok, f"min eig = {lo:.1e}, permuted sim = {s:.12f}"


def check_canonical_tables():
    sizes = [baselines.build_canonical_table(kappa).n_classes for kappa in (3, 4, 5)]
    return "isomorphism class counts", sizes == [4, 11, 34], "/".join(map(str, sizes))


def check_sampled_census(rng, count=5):
    worst = 0.0
    for _ in range(count):
        g = _random_graph(rng, 5, 10)
        exact = baselines.subgraph_histogram_exact(g, 4).normalized
        sampled = baselines.subgraph_histogram_sampled(g, 4, 200_000, int(rng.integers(2**32))).normalized
        worst = max(worst, float(np.abs(exact - sampled).max()))
    return "sampled 4-node census", worst <= 0.01, f"max L-inf = {worst:.4f}"


def check_random_walk(rng, count=10):
    worst = 0.0
    for _ in range(count):
        a, b = _random_graph(rng, 3, 20), _random_graph(rng, 3, 20)
        d = baselines.default_rw_decay(a, b)
        worst = max(worst, abs(baselines.random_walk_similarity(a, b, d) - oracle.random_walk_dense(a, b, d)))
    return "random walk vs dense solve", worst <= 1e-8, f"max err = {worst:.1e}"


def check_stats_invariance(rng, count=20):
    bad = 0
    for _ in range(count):
        g = _random_graph(rng, 3, 40)
        bad += compute_stats(g) != compute_stats(apply_permutation(g, rng.permutation(g.n)))
    return "graph stats invariance", bad == 0, f"{bad} mismatches"


def run_selftest(seed=0):
    rng = np.random.default_rng(seed)
    return [
        check_stats_invariance(rng),
        check_permutation_invariance(rng),
        check_spectral(rng),
        check_combinatorial(rng),
        check_regular_zero(),
        check_kernel(rng),
        check_canonical_tables(),
        check_sampled_census(rng),
        check_random_walk(rng),
    ]
