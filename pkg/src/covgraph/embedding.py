"""Covariance descriptors of graphs from truncated power iteration.

A graph with adjacency ``A`` is mapped to the ``k x k`` covariance matrix of
the rows of ``M``, where column ``t`` of ``M`` is ``n * A^t e / ||A^t e||_1``.
Entry ``[i][j]`` (0-based) is the covariance of the normalized ``A^(i+1) e``
and ``A^(j+1) e``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .graph import Graph, GraphError

DEFAULT_K = 5
MAX_K = 32


@dataclass(frozen=True, eq=False)
class EmbeddingMatrix:
    values: np.ndarray

    @property
    def k(self) -> int:
        return self.values.shape[1]

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True, eq=False)
class CovarianceDescriptor:
    values: np.ndarray

    @property
    def k(self) -> int:
        return self.values.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.values))


def power_embed(g: Graph, k: int = DEFAULT_K) -> EmbeddingMatrix:
    """Run ``k`` steps of power iteration from the all-ones vector.

    Each step is one sparse matrix-vector product, so the cost is O(mk).
    """
    if not 1 <= k <= MAX_K:
        raise ValueError(f"k must be in [1, {MAX_K}], got {k}")
    if g.m < 1:
        raise GraphError("graph has no edges")
    return EmbeddingMatrix(_backend.power_embed(g.indptr, g.indices, k))


def covariance_descriptor(M: EmbeddingMatrix) -> CovarianceDescriptor:
    # mean is the fixed ones-vector; columns sum to n so it is also the sample mean
    return CovarianceDescriptor(_backend.covariance(np.ascontiguousarray(M.values)))


def embed_graph(g: Graph, k: int = DEFAULT_K) -> CovarianceDescriptor:
    return covariance_descriptor(power_embed(g, k))


def format_descriptor(c: CovarianceDescriptor) -> str:
    """Plain text: ``k`` on the first line, then ``k`` rows of 17-digit values."""
    lines = [str(c.k)]
    for row in c.values:
        lines.append(" ".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"


def parse_descriptor(text: str) -> CovarianceDescriptor:
    toks = text.split()
    if not toks:
        raise ValueError("empty descriptor text")
    k = int(toks[0])
    vals = np.array([float(t) for t in toks[1:]])
    if vals.size != k * k:
        raise ValueError(f"expected {k * k} values, found {vals.size}")
    return CovarianceDescriptor(vals.reshape(k, k))
