"""Corpus assembly, 1-NN kernel cross-validation and method comparison."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import baselines
from .embedding import DEFAULT_K
from .graph import (
    Graph,
    compute_stats,
    generate_matched_random,
    generate_social,
    parse_edge_list,
    serialize_edge_list,
)
from .kernel import GramMatrix, build_gram

log = logging.getLogger(__name__)

LABELS_FILE = "labels.csv"


class ManifestError(ValueError):
    pass


@dataclass(eq=False)
class LabeledGraphSet:
    graphs: list[Graph]
    labels: list[str]
    names: list[str]

    def __post_init__(self):
        if not len(self.graphs) == len(self.labels) == len(self.names):
            raise ValueError("graphs, labels and names must have equal lengths")

    def __len__(self):
        return len(self.graphs)

    def subset(self, label) -> list[Graph]:
        return [g for g, l in zip(self.graphs, self.labels) if l == label]


def read_labels(path: Path) -> list[tuple[str, str]]:
    entries = []
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2 or not all(parts):
            raise ManifestError(f"{path.name}:{lineno}: expected 'filename,label', got {line!r}")
        entries.append((parts[0], parts[1]))
    return entries


def build_corpus(manifest, labels_file: str = LABELS_FILE) -> LabeledGraphSet:
    """Load every graph listed in ``<manifest>/labels.csv``."""
    root = Path(manifest)
    lp = root / labels_file
    if not lp.is_file():
        raise ManifestError(f"labels file {lp} not found")
    graphs, labels, names = [], [], []
    seen = set()
    for fname, label in read_labels(lp):
        if fname in seen:
            raise ManifestError(f"duplicate entry {fname!r} in {labels_file}")
        seen.add(fname)
        f = root / fname
        if not f.is_file():
            raise ManifestError(f"entry {fname!r} in {labels_file} has no file in {root}")
        g = parse_edge_list(f.read_text(encoding="utf-8"))
        st = compute_stats(g)
        log.info("%s: n=%d m=%d clustering=%.4f label=%s", fname, st.n, st.m, st.clustering_coefficient, label)
        graphs.append(g)
        labels.append(label)
        names.append(fname)
    if not graphs:
        raise ManifestError(f"{labels_file} lists no graphs")
    return LabeledGraphSet(graphs, labels, names)


def write_corpus(gs: LabeledGraphSet, directory, labels_file: str = LABELS_FILE) -> None:
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    for g, name in zip(gs.graphs, gs.names):
        (root / name).write_text(serialize_edge_list(g), encoding="utf-8")
    (root / labels_file).write_text("".join(f"{n},{l}\n" for n, l in zip(gs.names, gs.labels)))


def corpus_summary(gs: LabeledGraphSet) -> list[dict]:
    """Per-label mean node count, edge count and clustering coefficient."""
    rows = []
    for label in sorted(set(gs.labels)):
        stats = [compute_stats(g) for g, l in zip(gs.graphs, gs.labels) if l == label]
        rows.append({
            "label": label,
            "graphs": len(stats),
            "mean_nodes": float(np.mean([s.n for s in stats])),
            "mean_edges": float(np.mean([s.m for s in stats])),
            "mean_clustering": float(np.mean([s.clustering_coefficient for s in stats])),
        })
    return rows


def generate_social_vs_random(n_graphs: int, seed=0, min_nodes: int = 60, max_nodes: int = 140) -> LabeledGraphSet:
    """Synthetic stand-in for the Twitter-vs-random task.

    Half the graphs come from :func:`~covgraph.graph.generate_social`
    (preferential attachment with triadic closure); each is paired with an
    Erdős–Rényi graph of identical node and edge count.
    """
    if n_graphs < 2 or n_graphs % 2:
        raise ValueError("n_graphs must be even and at least 2")
    rng = np.random.default_rng(seed)
    graphs, labels, names = [], [], []
    width = len(str(n_graphs // 2 - 1))
    for i in range(n_graphs // 2):
        n = int(rng.integers(min_nodes, max_nodes + 1))
        density = rng.uniform(0.10, 0.22)
        per_node = max(2, round(density * n / 2))
        triad = rng.uniform(0.85, 1.0)
        s_seed, r_seed = rng.integers(0, 2**63, size=2)
        social = generate_social(n, per_node, triad, seed=int(s_seed))
        random = generate_matched_random(social.n, social.m, seed=int(r_seed))
        graphs += [social, random]
        labels += ["social", "random"]
        names += [f"social_{i:0{width}d}.txt", f"random_{i:0{width}d}.txt"]
    return LabeledGraphSet(graphs, labels, names)


@dataclass
class EvaluationReport:
    method: str
    fold_accuracies: list[float]
    repetition_accuracies: list[float]
    timings: dict = field(default_factory=dict)

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.repetition_accuracies))

    @property
    def standard_error(self) -> float:
        r = self.repetition_accuracies
        if len(r) < 2:
            return 0.0
        return float(np.std(r, ddof=1) / math.sqrt(len(r)))


def stratified_folds(labels: Sequence, folds: int, seed) -> list[np.ndarray]:
    """Test-index arrays of a shuffled stratified k-fold split."""
    from sklearn.model_selection import StratifiedKFold

    y = np.asarray(labels)
    skf = StratifiedKFold(n_splits=folds, shuffle=True, random_state=seed)
    return [test for _, test in skf.split(np.zeros(len(y)), y)]


def nearest_neighbor_predict(K: np.ndarray, train: np.ndarray, test: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """1-NN in the kernel-induced metric ``K_ii + K_jj - 2 K_ij``; ties go to the lowest index."""
    diag = np.diag(K)
    d2 = diag[test][:, None] + diag[train][None, :] - 2 * K[np.ix_(test, train)]
    return labels[train][np.argmin(d2, axis=1)]


def cross_validate(gram: GramMatrix, folds: int = 10, repetitions: int = 10, seed=0, method: str = "") -> EvaluationReport:
    if gram.labels is None:
        raise ValueError("cross-validation needs a labeled Gram matrix")
    if folds < 2:
        raise ValueError("folds must be at least 2")
    y = np.asarray(gram.labels)
    classes, counts = np.unique(y, return_counts=True)
    if len(classes) < 2:
        raise ValueError("need at least two classes")
    small = classes[counts < folds]
    if small.size:
        raise ValueError(f"class {small[0]!r} has fewer members than folds ({folds})")
    K = gram.values
    rep_seeds = [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(repetitions)]
    fold_acc, rep_acc = [], []
    t0 = time.perf_counter()
    for rs in rep_seeds:
        correct = 0
        for test in stratified_folds(y, folds, rs):
            train = np.setdiff1d(np.arange(len(y)), test)
            pred = nearest_neighbor_predict(K, train, test, y)
            hits = int((pred == y[test]).sum())
            correct += hits
            fold_acc.append(hits / len(test))
        rep_acc.append(correct / len(y))
    return EvaluationReport(method, fold_acc, rep_acc, {"cv": time.perf_counter() - t0})


def method_gram(gs: LabeledGraphSet, method: str, seed=0, ridge="auto") -> GramMatrix:
    """Gram matrix for ``proposed-k<k>`` or any name in :data:`baselines.METHODS`."""
    if method.startswith("proposed"):
        k = int(method.split("-k", 1)[1]) if "-k" in method else DEFAULT_K
        return build_gram(gs.graphs, k, ridge, names=gs.names, labels=gs.labels)
    return baselines.baseline_gram(method, gs.graphs, seed=seed, names=gs.names, labels=gs.labels)


def run_method_comparison(
    gs: LabeledGraphSet,
    methods: Sequence[str],
    folds: int = 10,
    repetitions: int = 10,
    seed=0,
    ridge="auto",
) -> list[EvaluationReport]:
    """Evaluate each method on the same fold partitions (shared seed)."""
    if not methods:
        raise ValueError("no methods given")
    reports = []
    for method in methods:
        t0 = time.perf_counter()
        gram = method_gram(gs, method, seed, ridge)
        t_gram = time.perf_counter() - t0
        rep = cross_validate(gram, folds, repetitions, seed, method=method)
        rep.timings["gram"] = t_gram
        log.info("%s: accuracy %.4f (%.4f), gram %.2fs", method, rep.mean_accuracy, rep.standard_error, t_gram)
        reports.append(rep)
    return reports


def format_reports(reports: Sequence[EvaluationReport], csv: bool = False, timings: bool = False) -> str:
    header = ["method", "mean_accuracy", "standard_error", "repetitions"]
    if timings:
        header += ["gram_seconds", "cv_seconds"]
    rows = []
    for r in reports:
        row = [r.method, f"{r.mean_accuracy:.4f}", f"{r.standard_error:.4f}", str(len(r.repetition_accuracies))]
        if timings:
            row += [f"{r.timings.get('gram', 0.0):.3f}", f"{r.timings.get('cv', 0.0):.3f}"]
        rows.append(row)
    return format_table(header, rows, csv)


def format_table(header, rows, csv: bool = False) -> str:
    if csv:
        return "\n".join(",".join(r) for r in [header, *rows]) + "\n"
    widths = [max(len(str(c)) for c in col) for col in zip(header, *rows)]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() for r in [header, *rows]]
    return "\n".join(lines) + "\n"
