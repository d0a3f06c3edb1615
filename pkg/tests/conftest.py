import numpy as np
import pytest

from covgraph import _backend
from covgraph.graph import from_edges, generate_matched_random, parse_edge_list, star_graph


@pytest.fixture
def path3():
    return parse_edge_list("1 2\n2 3")


@pytest.fixture
def k3():
    return parse_edge_list("a b\nb c\nc a")


@pytest.fixture
def star4():
    return star_graph(4)


@pytest.fixture(params=sorted(_backend.available()))
def backend(request):
    return _backend.available()[request.param]


def random_graph(rng, n_lo, n_hi, connected=False):
    while True:
        n = int(rng.integers(n_lo, n_hi + 1))
        m = int(rng.integers(max(1, n - 1), n * (n - 1) // 2 + 1))
        g = generate_matched_random(n, m, seed=int(rng.integers(2**32)))
        if not connected or g.is_connected():
            return g


def edge_set(g):
    """Edges as a set of id pairs, independent of dense indexing."""
    return {frozenset((g.ids[u], g.ids[v])) for u, v in g.edges()}


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
