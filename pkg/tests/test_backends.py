"""The compiled core and the numpy fallback must agree."""

import numpy as np
import pytest

from covgraph import _backend, _fallback
from covgraph.graph import complete_graph

from conftest import random_graph

cython = pytest.importorskip("covgraph._core")


def _graphs(count=25, seed=0):
    rng = np.random.default_rng(seed)
    return [random_graph(rng, 2, 80) for _ in range(count)]


def test_active_backend_name():
    assert _backend.BACKEND in ("cython", "python")
    assert "python" in _backend.available()


@pytest.mark.parametrize("k", [1, 3, 6])
def test_power_embed_agrees(k):
    for g in _graphs():
        a = cython.power_embed(g.indptr, g.indices, k)
        b = _fallback.power_embed(g.indptr, g.indices, k)
        np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-13)


def test_covariance_agrees():
    for g in _graphs():
        M = _fallback.power_embed(g.indptr, g.indices, 5)
        a, b = cython.covariance(M), _fallback.covariance(M)
        np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-13)
        assert np.array_equal(a, a.T) and np.array_equal(b, b.T)


def test_triangles_agree():
    for g in _graphs():
        assert np.array_equal(
            cython.node_triangles(g.indptr, g.indices), _fallback.node_triangles(g.indptr, g.indices)
        )


@pytest.mark.parametrize("kappa", [3, 4, 5])
def test_induced_codes_agree(kappa):
    rng = np.random.default_rng(kappa)
    for g in _graphs(10):
        if g.n < kappa:
            continue
        nodes = np.array([rng.choice(g.n, kappa, replace=False) for _ in range(200)], dtype=np.int64)
        assert np.array_equal(
            cython.induced_codes(g.indptr, g.indices, nodes), _fallback.induced_codes(g.indptr, g.indices, nodes)
        )


def test_zero_iterate_raises(backend):
    # a graph with no edges gives A e = 0
    indptr = np.zeros(4, dtype=np.int64)
    indices = np.zeros(0, dtype=np.int64)
    with pytest.raises(FloatingPointError):
        backend.power_embed(indptr, indices, 2)


def test_regular_graph_exact_ones(backend):
    g = complete_graph(7)
    M = backend.power_embed(g.indptr, g.indices, 4)
    assert np.all(M == 1.0)
    assert np.all(backend.covariance(M) == 0.0)
