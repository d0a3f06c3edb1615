"""Command-line interface: ``covgraph <command> ...``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import baselines
from .embedding import DEFAULT_K, embed_graph, format_descriptor
from .graph import (
    compute_stats,
    extract_ego_network,
    generate_matched_random,
    parse_edge_list,
    serialize_edge_list,
)
from .kernel import build_gram, export_gram
from .pipeline import (
    LabeledGraphSet,
    build_corpus,
    corpus_summary,
    cross_validate,
    format_reports,
    format_table,
    generate_social_vs_random,
    method_gram,
    run_method_comparison,
    write_corpus,
)


def _ridge(value: str):
    if value == "auto":
        return "auto"
    r = float(value)
    if r < 0:
        raise argparse.ArgumentTypeError("ridge must be non-negative")
    return r


def _read_graph(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    return parse_edge_list(text)


def _emit(args, text: str):
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_embed(args):
    c = embed_graph(_read_graph(args.graph), args.k)
    if args.csv:
        text = "\n".join(",".join(f"{v:.17g}" for v in row) for row in c.values) + "\n"
    else:
        text = format_descriptor(c)
    _emit(args, text)


def cmd_kernel(args):
    gs = build_corpus(args.manifest)
    gm = build_gram(gs.graphs, args.k, args.ridge, names=gs.names, labels=gs.labels)
    _emit(args, export_gram(gm, "dense-csv" if args.csv else args.format))


def cmd_baseline(args):
    gs = build_corpus(args.manifest)
    gm = baselines.baseline_gram(args.method, gs.graphs, seed=args.seed, samples=args.samples, names=gs.names, labels=gs.labels)
    _emit(args, export_gram(gm, "dense-csv" if args.csv else args.format))


def cmd_ego_extract(args):
    g = _read_graph(args.graph)
    rng = np.random.default_rng(args.seed)
    centers = [i for i in range(g.n) if g.degrees[i] > args.min_degree]
    if args.max_egos is not None and len(centers) > args.max_egos:
        centers = sorted(rng.choice(centers, size=args.max_egos, replace=False).tolist())
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows, lines = [], []
    for c in centers:
        ego = extract_ego_network(g, g.ids[c], args.min_degree)
        name = f"{args.prefix}{g.ids[c]}.txt"
        (out / name).write_text(serialize_edge_list(ego), encoding="utf-8")
        lines.append(f"{name},{args.label}\n")
        rows.append([name, str(ego.n), str(ego.m)])
    with open(out / "labels.csv", "a", encoding="utf-8") as fh:
        fh.writelines(lines)
    sys.stdout.write(format_table(["file", "nodes", "edges"], rows, args.csv))


def cmd_gen_random(args):
    if args.like:
        src = build_corpus(args.like)
        seeds = np.random.SeedSequence(args.seed).spawn(len(src))
        graphs = [generate_matched_random(g.n, g.m, s.generate_state(1)[0]) for g, s in zip(src.graphs, seeds)]
        names = [f"random_{Path(n).stem}.txt" for n in src.names]
        gs = LabeledGraphSet(graphs, [args.label] * len(graphs), names)
        if not args.out_dir:
            raise SystemExit("--like requires --out-dir")
        write_corpus(gs, args.out_dir)
        _print_summary(args, gs)
        return
    if args.n is None or args.m is None:
        raise SystemExit("gen-random needs --n and --m, or --like MANIFEST")
    _emit(args, serialize_edge_list(generate_matched_random(args.n, args.m, args.seed)))


def _print_summary(args, gs):
    rows = [
        [r["label"], str(r["graphs"]), f"{r['mean_nodes']:.2f}", f"{r['mean_edges']:.2f}", f"{r['mean_clustering']:.4f}"]
        for r in corpus_summary(gs)
    ]
    sys.stdout.write(format_table(["label", "graphs", "mean_nodes", "mean_edges", "mean_clustering"], rows, args.csv))


def cmd_gen_social(args):
    gs = generate_social_vs_random(args.n_graphs, args.seed)
    write_corpus(gs, args.out_dir)
    _print_summary(args, gs)


def cmd_classify(args):
    gs = build_corpus(args.manifest)
    method = args.method if args.method != "proposed" else f"proposed-k{args.k}"
    gram = method_gram(gs, method, args.seed, args.ridge)
    rep = cross_validate(gram, args.folds, args.reps, args.seed, method=method)
    sys.stdout.write(format_reports([rep], args.csv, args.timings))


def cmd_compare(args):
    gs = build_corpus(args.manifest)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    reports = run_method_comparison(gs, methods, args.folds, args.reps, args.seed, args.ridge)
    sys.stdout.write(format_reports(reports, args.csv, args.timings))


def cmd_stats(args):
    st = compute_stats(_read_graph(args.graph))
    header = ["n", "m", "degree_mean", "degree_variance", "clustering", "triangles"]
    row = [str(st.n), str(st.m), f"{st.degree_mean:.6f}", f"{st.degree_variance:.6f}", f"{st.clustering_coefficient:.6f}", str(st.triangle_count)]
    sys.stdout.write(format_table(header, [row], args.csv))


def cmd_selftest(args):
    from .selftest import run_selftest

    results = run_selftest(args.seed)
    rows = [[name, "PASS" if ok else "FAIL", detail] for name, ok, detail in results]
    sys.stdout.write(format_table(["check", "result", "detail"], rows, args.csv))
    if not all(ok for _, ok, _ in results):
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--k", type=int, default=DEFAULT_K, help="power-iteration depth")
    common.add_argument("--ridge", type=_ridge, default="auto", help="'auto' or a non-negative number")
    common.add_argument("--csv", action="store_true", help="machine-readable CSV output")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="covgraph", description="Graph covariance descriptors, the Bhattacharyya graph kernel and baseline similarities.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("embed", parents=[common], help="covariance descriptor of one graph")
    s.add_argument("graph", help="edge-list file or '-' for stdin")
    s.add_argument("--out")
    s.set_defaults(func=cmd_embed)

    s = sub.add_parser("kernel", parents=[common], help="Gram matrix of the proposed kernel")
    s.add_argument("manifest")
    s.add_argument("--format", choices=["dense-csv", "precomputed-kernel"], default="precomputed-kernel")
    s.add_argument("--out")
    s.set_defaults(func=cmd_kernel)

    s = sub.add_parser("baseline", parents=[common], help="Gram matrix of a baseline similarity")
    s.add_argument("manifest")
    s.add_argument("--method", choices=baselines.METHODS, required=True)
    s.add_argument("--samples", type=int, default=baselines.DEFAULT_SAMPLES)
    s.add_argument("--format", choices=["dense-csv", "precomputed-kernel"], default="precomputed-kernel")
    s.add_argument("--out")
    s.set_defaults(func=cmd_baseline)

    s = sub.add_parser("ego-extract", parents=[common], help="write ego networks of high-degree nodes")
    s.add_argument("graph")
    s.add_argument("--min-degree", type=int, default=50)
    s.add_argument("--out-dir", required=True)
    s.add_argument("--label", default="ego")
    s.add_argument("--prefix", default="ego_")
    s.add_argument("--max-egos", type=int)
    s.set_defaults(func=cmd_ego_extract)

    s = sub.add_parser("gen-random", parents=[common], help="Erdős–Rényi graph with fixed node and edge count")
    s.add_argument("--n", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--like", help="manifest whose graphs to match one-for-one")
    s.add_argument("--label", default="random")
    s.add_argument("--out-dir")
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen_random)

    s = sub.add_parser("gen-social", parents=[common], help="synthetic social-vs-random corpus")
    s.add_argument("--n-graphs", type=int, default=200)
    s.add_argument("--out-dir", required=True)
    s.set_defaults(func=cmd_gen_social)

    for name, fn, hlp in (("classify", cmd_classify, "cross-validated 1-NN accuracy of one method"),
                          ("compare", cmd_compare, "cross-validated accuracy of several methods")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("manifest")
        if name == "classify":
            s.add_argument("--method", default="proposed", help="proposed, proposed-k<k> or a baseline name")
        else:
            s.add_argument("--methods", default="proposed-k4,proposed-k5,proposed-k6,subfreq3,subfreq4,subfreq5,eigs5,eigs10,rw")
        s.add_argument("--folds", type=int, default=10)
        s.add_argument("--reps", type=int, default=10)
        s.add_argument("--timings", action="store_true", help="add wall-clock columns (not reproducible)")
        s.set_defaults(func=fn)

    s = sub.add_parser("stats", parents=[common], help="node/edge counts, degree variance, clustering, triangles")
    s.add_argument("graph")
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("selftest", parents=[common], help="run the oracle suite")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (ValueError, OSError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"covgraph {args.command}: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
