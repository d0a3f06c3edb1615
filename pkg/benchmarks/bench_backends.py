"""Compare the compiled and pure-Python kernels on synthetic graphs.

    python3 benchmarks/bench_backends.py [--edges 10000 100000 1000000] [--repeat 5] [--csv]

Reports the best-of-``repeat`` wall time per kernel and backend, plus the
speedup of the compiled core. Graphs are Erdős–Rényi with ``n = m / 10``.
"""

import argparse
import sys
import time

import numpy as np

from covgraph import _backend
from covgraph.graph import generate_matched_random
from covgraph.pipeline import format_table


def best_of(fn, repeat):
    fn()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(g, k, samples, rng):
    M = _backend.available()["python"].power_embed(g.indptr, g.indices, k)
    nodes = np.stack([rng.choice(g.n, size=4, replace=False) for _ in range(samples)])
    return {
        "power_embed": lambda mod: mod.power_embed(g.indptr, g.indices, k),
        "covariance": lambda mod: mod.covariance(M),
        "node_triangles": lambda mod: mod.node_triangles(g.indptr, g.indices),
        "induced_codes": lambda mod: mod.induced_codes(g.indptr, g.indices, nodes),
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--edges", type=int, nargs="+", default=[10**4, 10**5, 10**6])
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--samples", type=int, default=100_000, help="4-node sets for induced_codes")
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", action="store_true")
    args = p.parse_args(argv)

    backends = _backend.available()
    if "cython" not in backends:
        print("compiled core not built; only the python backend is timed", file=sys.stderr)
    rng = np.random.default_rng(args.seed)
    header = ["kernel", "edges"] + [f"{name}_ms" for name in sorted(backends)]
    if "cython" in backends:
        header.append("speedup")
    rows = []
    for m in args.edges:
        g = generate_matched_random(max(m // 10, 50), m, seed=args.seed)
        for kernel, fn in cases(g, args.k, args.samples, rng).items():
            t = {name: best_of(lambda: fn(mod), args.repeat) for name, mod in backends.items()}
            row = [kernel, str(m)] + [f"{t[name] * 1e3:.3f}" for name in sorted(backends)]
            if "cython" in backends:
                row.append(f"{t['python'] / t['cython']:.1f}x")
            rows.append(row)
    sys.stdout.write(format_table(header, rows, args.csv))


if __name__ == "__main__":
    main()
