"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

The lines are collected into the terminal summary ("acceptance criteria"),
so ``pytest tests/test_acceptance.py`` ends with a one-line verdict per
criterion even without ``-s``.
"""

import math
import os
import subprocess
import sys
import time
import tracemalloc
from pathlib import Path

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from covgraph import _backend, baselines, oracle
from covgraph.embedding import embed_graph
from covgraph.graph import (
    apply_permutation,
    complete_graph,
    cycle_graph,
    generate_matched_random,
    generate_social,
    path_graph,
    serialize_edge_list,
    star_graph,
)
from covgraph.kernel import bhattacharyya_similarity, build_gram
from covgraph.pipeline import generate_social_vs_random, run_method_comparison


def report(number, title, ok, detail):
    line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def sample_graph(rng, n_lo, n_hi):
    """Random graph whose density is drawn log-uniformly, so sparse and dense cases both occur."""
    n = int(rng.integers(n_lo, n_hi + 1))
    top = n * (n - 1) // 2
    m = int(round(math.exp(rng.uniform(0.0, math.log(top)))))
    return generate_matched_random(n, min(max(m, 1), top), seed=int(rng.integers(2**32)))


def is_regular(g):
    return len(set(g.degrees.tolist())) == 1


@pytest.fixture(scope="module")
def social_corpus():
    return generate_social_vs_random(200, seed=0)


def test_c01_permutation_invariance():
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        g = sample_graph(rng, 5, 200)
        c = embed_graph(g, 5).values
        for _ in range(5):
            cp = embed_graph(apply_permutation(g, rng.permutation(g.n)), 5).values
            worst = max(worst, float(np.abs(c - cp).max()))
    elapsed = time.perf_counter() - t0
    report(1, "permutation invariance", worst <= 1e-9 and elapsed < 10.0,
           f"200 graphs x 5 permutations, max |dC| = {worst:.2e} (<= 1e-9), {elapsed:.2f}s (< 10s)")


def test_c02_spectral_equivalence():
    rng = np.random.default_rng(202)
    worst, graphs = 0.0, 0
    while graphs < 100:
        g = sample_graph(rng, 4, 50)
        if is_regular(g):
            continue
        a = embed_graph(g, 6).values
        b = oracle.closed_form_descriptor(oracle.dense_spectral(g), 6).values
        worst = max(worst, float((np.abs(a - b) / np.maximum(1.0, np.abs(b))).max()))
        graphs += 1
    report(2, "spectral equivalence", worst <= 1e-8,
           f"100 non-regular graphs, k=6, max entrywise rel err = {worst:.2e} (<= 1e-8)")


def test_c03_combinatorial_equivalence():
    rng = np.random.default_rng(303)
    corpus = list(oracle.connected_graphs(7))
    exhaustive = len(corpus)
    corpus += [sample_graph(rng, 3, 12) for _ in range(500)]
    worst, identity_fail = 0.0, 0
    for g in corpus:
        rep = oracle.verify_walk_identities(g)
        identity_fail += not (rep.two_edges_ok and rep.walk2_ok and rep.walk3_ok)
        c01 = embed_graph(g, 2).values[0, 1]
        worst = max(worst, abs(c01 - oracle.c01_from_counts(g, rep.census)))
    report(3, "combinatorial equivalence", worst <= 1e-10 and identity_fail == 0,
           f"{exhaustive} connected graphs (n <= 7) + 500 random (n <= 12), "
           f"max |C01 - formula| = {worst:.2e} (<= 1e-10), exact identity failures = {identity_fail}")


def test_c04_regular_degeneracy():
    nonzero = []
    for n in range(3, 21):
        for name, g in (("K", complete_graph(n)), ("C", cycle_graph(n))):
            if np.any(embed_graph(g, 5).values != 0.0):
                nonzero.append(f"{name}{n}")
    report(4, "regular-graph degeneracy", not nonzero,
           f"36 graphs (K_n, C_n, n = 3..20), nonzero descriptors: {', '.join(nonzero) or 'none'}")


def test_c05_kernel_validity():
    rng = np.random.default_rng(505)
    graphs = []
    for _ in range(20):
        n = int(rng.integers(30, 80))
        s = generate_social(n, int(rng.integers(2, 6)), rng.uniform(0.5, 1.0), seed=int(rng.integers(2**32)))
        graphs += [s, generate_matched_random(s.n, s.m, seed=int(rng.integers(2**32)))]
    for n in (6, 10, 15, 21, 30):
        graphs += [path_graph(n), star_graph(n), cycle_graph(n), complete_graph(n)]
    N = len(graphs)
    gm = build_gram(graphs, 5)
    lo = float(np.linalg.eigvalsh(gm.values).min())
    diag_err = float(np.abs(np.diag(gm.values) - 1.0).max())
    perm_err = 0.0
    for g in graphs:
        gp = apply_permutation(g, rng.permutation(g.n))
        perm_err = max(perm_err, abs(bhattacharyya_similarity(embed_graph(g, 5), embed_graph(gp, 5)) - 1.0))
    ok = N == 60 and lo >= -1e-8 * N and diag_err == 0.0 and perm_err <= 1e-9
    report(5, "kernel validity", ok,
           f"N = {N}, min eig = {lo:.2e} (>= {-1e-8 * N:.1e}), max |diag - 1| = {diag_err:.1e}, "
           f"max |Sim(g, Pg) - 1| = {perm_err:.1e} (<= 1e-9)")


def test_c06_social_vs_random_direction(social_corpus):
    c01 = {label: np.array([embed_graph(g, 2).values[0, 1] for g in social_corpus.subset(label)])
           for label in ("social", "random")}
    s, r = c01["social"], c01["random"]
    pooled = math.sqrt(s.var(ddof=1) / len(s) + r.var(ddof=1) / len(r))
    sep = (s.mean() - r.mean()) / pooled
    report(6, "social-vs-random direction", sep >= 3.0,
           f"mean C01 social = {s.mean():.4f}, random = {r.mean():.4f}, separation = {sep:.1f} pooled SE (>= 3)")


def test_c07_classification(social_corpus):
    t0 = time.perf_counter()
    reports = run_method_comparison(social_corpus, ["proposed-k5", "subfreq3"], folds=10, repetitions=10, seed=0)
    elapsed = time.perf_counter() - t0
    acc = {r.method: r.mean_accuracy for r in reports}
    ok = acc["proposed-k5"] > 0.9 and acc["proposed-k5"] >= acc["subfreq3"] and elapsed < 120.0
    report(7, "classification", ok,
           f"200 graphs, 10x10-fold 1-NN: proposed-k5 = {acc['proposed-k5']:.4f} (> 0.9), "
           f"subfreq3 = {acc['subfreq3']:.4f}, {elapsed:.1f}s (< 120s)")


@pytest.mark.slow
def test_c08_linear_scaling():
    sizes = [10**4, 10**5, 10**6]
    times, mem_ratio = [], {}
    backends = _backend.available()
    for m in sizes:
        g = generate_matched_random(m // 10, m, seed=m)
        embed_graph(g, 5)
        best = math.inf
        for _ in range(7):
            t0 = time.perf_counter()
            embed_graph(g, 5)
            best = min(best, time.perf_counter() - t0)
        times.append(best)
        units = g.n * 5 + g.m
        for name, mod in backends.items():
            tracemalloc.start()
            mod.power_embed(g.indptr, g.indices, 5)
            peak = tracemalloc.get_traced_memory()[1]
            tracemalloc.stop()
            mem_ratio[name] = max(mem_ratio.get(name, 0.0), peak / units)
    # least-squares slope through the origin on the two smaller sizes
    c = (times[0] * sizes[0] + times[1] * sizes[1]) / (sizes[0] ** 2 + sizes[1] ** 2)
    predicted = c * sizes[2]
    rel = abs(times[2] - predicted) / predicted
    mem_ok = all(v <= 64.0 for v in mem_ratio.values())
    mem = ", ".join(f"{k} {v:.1f}" for k, v in sorted(mem_ratio.items()))
    report(8, "linear scaling", rel <= 0.30 and mem_ok,
           f"backend {_backend.BACKEND}, t(1e6) = {times[2] * 1e3:.2f}ms vs c*m = {predicted * 1e3:.2f}ms "
           f"(off by {rel:.0%}, <= 30%); peak bytes per (n*k + m): {mem} (<= 64)")


def test_c09_baseline_correctness():
    sizes = [baselines.build_canonical_table(kappa).n_classes for kappa in (3, 4, 5)]

    rng = np.random.default_rng(909)
    small = [g for g in oracle.connected_graphs(5) if g.n >= 4]
    small += [sample_graph(rng, 6, 10) for _ in range(40)]
    census_err = 0.0
    for g in small:
        exact = baselines.subgraph_histogram_exact(g, 4).normalized
        sampled = baselines.subgraph_histogram_sampled(g, 4, 200_000, int(rng.integers(2**32))).normalized
        census_err = max(census_err, float(np.abs(exact - sampled).max()))

    rw_err, pairs = 0.0, 0
    while pairs < 60:
        a, b = sample_graph(rng, 2, 30), sample_graph(rng, 2, 30)
        if a.n * b.n > 400:
            continue
        d = baselines.default_rw_decay(a, b)
        rw_err = max(rw_err, abs(baselines.random_walk_similarity(a, b, d) - oracle.random_walk_dense(a, b, d)))
        pairs += 1

    ok = sizes == [4, 11, 34] and census_err <= 0.01 and rw_err <= 1e-8
    report(9, "baseline correctness", ok,
           f"class counts {'/'.join(map(str, sizes))} (4/11/34); sampled 4-census on {len(small)} graphs "
           f"max L-inf = {census_err:.4f} (<= 0.01); RW vs dense on {pairs} pairs max err = {rw_err:.1e} (<= 1e-8)")


def _run_cli(args, cwd, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    proc = subprocess.run([sys.executable, "-m", "covgraph.cli", *args], cwd=cwd, env=env,
                          capture_output=True, check=False)
    files = {p.relative_to(cwd).as_posix(): p.read_bytes() for p in sorted(Path(cwd).rglob("*")) if p.is_file()}
    return proc.returncode, proc.stdout, files


def _seed_workspace(root: Path):
    root.mkdir(parents=True)
    big = generate_social(120, 4, 0.9, seed=7)
    (root / "big.txt").write_text(serialize_edge_list(big), encoding="utf-8")
    corpus = generate_social_vs_random(20, seed=3)
    (root / "corpus").mkdir()
    for g, name in zip(corpus.graphs, corpus.names):
        (root / "corpus" / name).write_text(serialize_edge_list(g), encoding="utf-8")
    (root / "corpus" / "labels.csv").write_text("".join(f"{n},{l}\n" for n, l in zip(corpus.names, corpus.labels)))


CLI_RUNS = {
    "embed": ["embed", "big.txt", "--k", "6"],
    "kernel": ["kernel", "corpus", "--format", "dense-csv"],
    "baseline": ["baseline", "corpus", "--method", "subfreq4", "--samples", "500", "--seed", "5"],
    "ego-extract": ["ego-extract", "big.txt", "--min-degree", "10", "--max-egos", "4", "--seed", "5", "--out-dir", "egos"],
    "gen-random": ["gen-random", "--n", "50", "--m", "200", "--seed", "5"],
    "gen-random --like": ["gen-random", "--like", "corpus", "--out-dir", "matched", "--seed", "5"],
    "gen-social": ["gen-social", "--n-graphs", "10", "--out-dir", "social", "--seed", "5"],
    "classify": ["classify", "corpus", "--folds", "5", "--reps", "3", "--seed", "5"],
    "compare": ["compare", "corpus", "--methods", "proposed-k4,subfreq4,eigs5,rw", "--folds", "5", "--reps", "3", "--seed", "5", "--csv"],
    "stats": ["stats", "big.txt"],
    "selftest": ["selftest", "--seed", "5"],
}


@pytest.mark.slow
def test_c10_cli_determinism(tmp_path):
    differing, failed = [], []
    for label, args in CLI_RUNS.items():
        outputs = []
        for run in range(2):
            root = tmp_path / f"{label.replace(' ', '_')}_{run}"
            _seed_workspace(root)
            outputs.append(_run_cli(args, root, hashseed=run))
        (rc0, out0, files0), (rc1, out1, files1) = outputs
        if rc0 != 0 or rc1 != 0:
            failed.append(label)
        elif out0 != out1 or files0 != files1 or not out0:
            differing.append(label)
    ok = not differing and not failed
    report(10, "determinism", ok,
           f"{len(CLI_RUNS)} commands run twice in fresh processes (different hash seeds): "
           f"non-identical = {differing or 'none'}, nonzero exit = {failed or 'none'}")
