"""Bhattacharyya similarity between covariance descriptors and Gram matrices."""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import solve_triangular

from .embedding import DEFAULT_K, CovarianceDescriptor, embed_graph
from .graph import Graph

log = logging.getLogger(__name__)

RIDGE_SCALE = 1e-8


class SingularDescriptorError(np.linalg.LinAlgError):
    pass


def auto_ridge(*descriptors: CovarianceDescriptor) -> float:
    """``1e-8 * max(trace(C) for C in descriptors, 1)``."""
    return RIDGE_SCALE * max([d.trace() for d in descriptors] + [1.0])


def _cholesky(a: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        raise SingularDescriptorError("singular descriptor; increase ridge or decrease k") from None


def _resolve_ridge(ridge, ca, cb) -> float:
    if ridge is None or ridge == "auto":
        return auto_ridge(ca, cb)
    ridge = float(ridge)
    if ridge < 0:
        raise ValueError("ridge must be non-negative")
    return ridge


def bhattacharyya_distance(ca: CovarianceDescriptor, cb: CovarianceDescriptor, ridge="auto") -> float:
    r"""Bhattacharyya distance between two zero-mean Gaussians.

    .. math::
        D = \tfrac12 \log \frac{\det \Sigma}{\sqrt{\det C_a \det C_b}},
        \qquad \Sigma = (C_a + C_b) / 2

    Both matrices are shifted by ``ridge * I`` first. Rather than subtracting
    three log-determinants, which cancel badly when ``C_a`` and ``C_b`` are
    close and ill-conditioned, ``D`` is evaluated from the eigenvalues
    ``w`` of ``L^{-1} C_b L^{-T}`` (``L`` the Cholesky factor of ``C_a``):

    .. math::
        D = \tfrac12 \sum_i \Big[\log\tfrac{1 + w_i}{2} - \tfrac12 \log w_i\Big]

    Each term is ``O((w_i - 1)^2)``, so rounding in nearly equal inputs
    stays second order. ``D >= 0`` holds mathematically; rounding noise
    below zero is clipped.
    """
    if ca.k != cb.k:
        raise ValueError(f"descriptor sizes differ: {ca.k} vs {cb.k}")
    r = _resolve_ridge(ridge, ca, cb)
    eye = r * np.eye(ca.k)
    a = ca.values + eye
    b = cb.values + eye
    La = _cholesky(a)
    _cholesky(b)
    x = solve_triangular(La, b, lower=True)
    wm = solve_triangular(La, x.T, lower=True)
    dw = np.linalg.eigvalsh((wm + wm.T) / 2) - 1.0  # w - 1
    if np.any(dw <= -1.0):
        raise SingularDescriptorError("singular descriptor; increase ridge or decrease k")
    d = 0.5 * float(np.sum(np.log1p(dw / 2) - 0.5 * np.log1p(dw)))
    return max(d, 0.0)


def bhattacharyya_similarity(ca: CovarianceDescriptor, cb: CovarianceDescriptor, ridge="auto") -> float:
    return float(np.exp(-bhattacharyya_distance(ca, cb, ridge)))


def similarity_between_graphs(a: Graph, b: Graph, k: int = DEFAULT_K, ridge="auto") -> float:
    return bhattacharyya_similarity(embed_graph(a, k), embed_graph(b, k), ridge)


@dataclass(eq=False)
class GramMatrix:
    values: np.ndarray
    graph_names: list[str]
    labels: list[str] | None = None
    meta: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.graph_names)


def gram_from_descriptors(
    descs: Sequence[CovarianceDescriptor],
    names: Sequence[str],
    labels=None,
    ridge="auto",
) -> GramMatrix:
    """Pairwise similarity over precomputed descriptors.

    With ``ridge="auto"`` a single ridge, scaled by the largest trace in the
    collection, is used for every pair so the matrix stays a valid kernel.
    """
    if ridge is None or ridge == "auto":
        r = auto_ridge(*descs)
    else:
        r = float(ridge)
    N = len(descs)
    K = np.eye(N)
    for i in range(N):
        for j in range(i + 1, N):
            try:
                K[i, j] = K[j, i] = bhattacharyya_similarity(descs[i], descs[j], r)
            except SingularDescriptorError as exc:
                raise SingularDescriptorError(f"{exc} (graphs {names[i]!r}, {names[j]!r})") from None
    return GramMatrix(K, list(names), None if labels is None else list(labels), {"ridge": r})


def build_gram(
    graphs: Sequence[Graph],
    k: int = DEFAULT_K,
    ridge="auto",
    names: Sequence[str] | None = None,
    labels=None,
) -> GramMatrix:
    if len(graphs) < 2:
        raise ValueError("need at least two graphs")
    if names is None:
        names = [f"g{i}" for i in range(len(graphs))]
    descs = []
    for g, name in zip(graphs, names):
        try:
            descs.append(embed_graph(g, k))
        except Exception as exc:
            raise type(exc)(f"graph {name!r}: {exc}") from exc
    gm = gram_from_descriptors(descs, names, labels, ridge)
    gm.meta["k"] = k
    return gm


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def export_gram(gm: GramMatrix, format: str = "dense-csv") -> str:
    """Serialize a Gram matrix.

    ``dense-csv``: a header row of graph names, then one row of values per
    graph. ``precomputed-kernel``: ``<label> 0:<i> 1:<K(i,1)> ...`` with
    1-based row indices, the text convention of SVM tools that accept a
    precomputed kernel.
    """
    if format == "dense-csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(gm.graph_names)
        for row in gm.values:
            w.writerow([_fmt(v) for v in row])
        return buf.getvalue()
    if format == "precomputed-kernel":
        if gm.labels is None:
            raise ValueError("precomputed-kernel export requires labels")
        lines = []
        for i, (label, row) in enumerate(zip(gm.labels, gm.values), 1):
            fields = [str(label), f"0:{i}"] + [f"{j}:{_fmt(v)}" for j, v in enumerate(row, 1)]
            lines.append(" ".join(fields))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {format!r}")


def parse_dense_csv(text: str) -> GramMatrix:
    rows = list(csv.reader(io.StringIO(text)))
    names = rows[0]
    values = np.array([[float(v) for v in r] for r in rows[1:]])
    if values.shape != (len(names), len(names)):
        raise ValueError("dense-csv body is not square with the header")
    return GramMatrix(values, names)
