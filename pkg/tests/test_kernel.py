import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from covgraph.embedding import CovarianceDescriptor, embed_graph
from covgraph.graph import apply_permutation, complete_graph, generate_matched_random
from covgraph.kernel import (
    GramMatrix,
    SingularDescriptorError,
    auto_ridge,
    bhattacharyya_distance,
    bhattacharyya_similarity,
    build_gram,
    export_gram,
    parse_dense_csv,
    similarity_between_graphs,
)

from conftest import random_graph


def _desc(a):
    return CovarianceDescriptor(np.atleast_2d(np.asarray(a, dtype=float)))


def _random_pd(rng, k):
    X = rng.normal(size=(k + 3, k))
    return _desc(X.T @ X / (k + 3) + 1e-3 * np.eye(k))


def test_self_similarity_is_one():
    rng = np.random.default_rng(0)
    c = _random_pd(rng, 4)
    for ridge in (0.0, 1e-6, "auto", 3.0):
        assert bhattacharyya_similarity(c, c, ridge) == 1.0


def test_scalar_case():
    # Sigma = 2.5, D = 0.5 * log(2.5 / sqrt(1 * 4))
    d = bhattacharyya_distance(_desc([[1.0]]), _desc([[4.0]]), ridge=0)
    assert d == pytest.approx(0.5 * math.log(1.25), rel=1e-15)
    assert d == pytest.approx(0.1115717756571048, rel=1e-12)
    s = bhattacharyya_similarity(_desc([[1.0]]), _desc([[4.0]]), ridge=0)
    assert s == pytest.approx(1 / math.sqrt(1.25), rel=1e-14)
    assert s == pytest.approx(0.894427191, rel=1e-9)


def test_symmetric_in_arguments():
    rng = np.random.default_rng(1)
    for _ in range(50):
        a, b = _random_pd(rng, 5), _random_pd(rng, 5)
        assert bhattacharyya_similarity(a, b, 0) == pytest.approx(bhattacharyya_similarity(b, a, 0), rel=1e-13)


def test_matches_determinant_formula():
    rng = np.random.default_rng(2)
    for _ in range(20):
        a, b = _random_pd(rng, 3), _random_pd(rng, 3)
        S = (a.values + b.values) / 2
        d = 0.5 * math.log(np.linalg.det(S) / math.sqrt(np.linalg.det(a.values) * np.linalg.det(b.values)))
        assert bhattacharyya_distance(a, b, 0) == pytest.approx(d, rel=1e-10, abs=1e-14)


def test_range():
    rng = np.random.default_rng(3)
    for _ in range(50):
        s = bhattacharyya_similarity(_random_pd(rng, 4), _random_pd(rng, 4), 0)
        assert 0 < s <= 1


def test_large_ridge_tends_to_one():
    rng = np.random.default_rng(4)
    a, b = _random_pd(rng, 4), _random_pd(rng, 4)
    sims = [bhattacharyya_similarity(a, b, r) for r in (0, 1, 100, 1e6)]
    assert all(x <= y + 1e-15 for x, y in zip(sims, sims[1:]))
    assert sims[-1] == pytest.approx(1.0, abs=1e-9)


def test_singular_without_ridge():
    z = _desc(np.zeros((3, 3)))
    with pytest.raises(SingularDescriptorError, match="increase ridge or decrease k"):
        bhattacharyya_similarity(z, z, ridge=0)


def test_size_mismatch():
    with pytest.raises(ValueError):
        bhattacharyya_similarity(_desc(np.eye(2)), _desc(np.eye(3)))


def test_auto_ridge():
    assert auto_ridge(_desc(np.zeros((2, 2)))) == 1e-8
    assert auto_ridge(_desc(np.diag([3.0, 4.0])), _desc(np.eye(2))) == pytest.approx(7e-8)


def test_graph_similarity_self_and_permuted():
    rng = np.random.default_rng(5)
    for _ in range(10):
        g = random_graph(rng, 6, 80)
        assert similarity_between_graphs(g, g, 5) == 1.0
        q = apply_permutation(g, rng.permutation(g.n))
        assert similarity_between_graphs(g, q, 5) == pytest.approx(1.0, abs=1e-9)


def test_gram_of_identical_pair():
    g = generate_matched_random(20, 50, seed=1)
    assert np.array_equal(build_gram([g, g], 5).values, np.ones((2, 2)))


def test_gram_of_two_regular_graphs():
    gm = build_gram([complete_graph(3), complete_graph(4)], 4)
    assert np.array_equal(gm.values, np.ones((2, 2)))


def test_gram_psd_and_unit_diagonal():
    rng = np.random.default_rng(6)
    graphs = [random_graph(rng, 5, 80) for _ in range(50)] + [complete_graph(5)]
    gm = build_gram(graphs, 5)
    N = len(graphs)
    assert np.all(np.diag(gm.values) == 1.0)
    assert np.array_equal(gm.values, gm.values.T)
    assert np.all((gm.values > 0) & (gm.values <= 1))
    assert np.linalg.eigvalsh(gm.values).min() >= -1e-8 * N


def test_gram_deterministic():
    rng = np.random.default_rng(7)
    graphs = [random_graph(rng, 5, 40) for _ in range(8)]
    assert export_gram(build_gram(graphs, 5)) == export_gram(build_gram(graphs, 5))


def test_gram_needs_two_graphs():
    with pytest.raises(ValueError):
        build_gram([complete_graph(3)], 3)


def test_gram_error_names_graph():
    from covgraph.graph import from_edges

    with pytest.raises(Exception, match="'empty'"):
        build_gram([complete_graph(3), from_edges(3, [])], 3, names=["ok", "empty"])


def test_export_dense_csv_fixture():
    gm = GramMatrix(np.array([[1.0, 0.0], [0.0, 1.0]]), ["a", "b"], ["x", "y"])
    assert export_gram(gm, "dense-csv") == "a,b\n1,0\n0,1\n"


def test_export_precomputed_fixture():
    gm = GramMatrix(np.array([[1.0, 0.25], [0.25, 1.0]]), ["a", "b"], ["1", "-1"])
    assert export_gram(gm, "precomputed-kernel") == "1 0:1 1:1 2:0.25\n-1 0:2 1:0.25 2:1\n"


def test_export_precomputed_field_count():
    rng = np.random.default_rng(8)
    graphs = [random_graph(rng, 5, 20) for _ in range(3)]
    gm = build_gram(graphs, 4, labels=["a", "b", "a"])
    lines = export_gram(gm, "precomputed-kernel").splitlines()
    assert len(lines) == 3
    assert all(len(l.split()) == 5 for l in lines)
    assert [l.split()[1] for l in lines] == ["0:1", "0:2", "0:3"]


def test_export_precomputed_requires_labels():
    gm = GramMatrix(np.eye(2), ["a", "b"])
    with pytest.raises(ValueError, match="labels"):
        export_gram(gm, "precomputed-kernel")


def test_dense_csv_roundtrip():
    rng = np.random.default_rng(9)
    graphs = [random_graph(rng, 5, 30) for _ in range(6)]
    gm = build_gram(graphs, 5, names=[f"n{i}" for i in range(6)])
    back = parse_dense_csv(export_gram(gm, "dense-csv"))
    assert back.graph_names == gm.graph_names
    assert np.array_equal(back.values, gm.values)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_similarity_bounds_property(k, seed):
    rng = np.random.default_rng(seed)
    a, b = _random_pd(rng, k), _random_pd(rng, k)
    s = bhattacharyya_similarity(a, b, 0)
    assert 0 < s <= 1


def test_nearly_equal_ill_conditioned_descriptors_give_unit_similarity():
    rng = np.random.default_rng(3)
    q, _ = np.linalg.qr(rng.standard_normal((5, 5)))
    c = (q * np.array([1.0, 1e-2, 1e-5, 1e-8, 1e-9])) @ q.T
    jitter = 1e-15 * rng.standard_normal((5, 5))
    a = CovarianceDescriptor((c + c.T) / 2)
    b = CovarianceDescriptor((c + c.T) / 2 + (jitter + jitter.T))
    assert abs(bhattacharyya_similarity(a, b) - 1.0) <= 1e-12
