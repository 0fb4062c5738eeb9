from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rendezvous.graphs import (
    GraphError,
    GraphFormatError,
    GraphGenerationError,
    RegularGraph,
    TorusCoord,
    build_circle,
    build_complete,
    build_torus,
    random_regular,
    read_graph,
    write_graph,
)


def test_triangle_is_circle_of_three():
    g = build_circle(3)
    assert (g.n, g.d) == (3, 2)
    assert g.edges() == [(0, 1), (0, 2), (1, 2)]


def test_circle_neighbors_wrap():
    assert build_circle(4).neighbors(0) == (1, 3)


def test_circle_eight_connected():
    g = build_circle(8)
    assert g.is_connected()
    assert (g.n * g.d) % 2 == 0


@pytest.mark.parametrize("N", [0, 1, 2])
def test_circle_too_small(N):
    with pytest.raises(GraphError):
        build_circle(N)


def test_circle_adjacency_is_circulant():
    A = build_circle(7).adjacency_matrix()
    gen = np.zeros(7)
    gen[[1, 6]] = 1
    for i in range(7):
        assert np.array_equal(A[i], np.roll(gen, i))


def test_torus_three():
    g = build_torus(3)
    assert (g.n, g.d) == (9, 4)
    assert set(g.neighbors(TorusCoord(0, 0).index(3))) == {3, 6, 1, 2}


def test_torus_four_connected():
    g = build_torus(4)
    assert g.is_connected()
    assert g.degree_histogram() == {4: 16}


def test_torus_too_small():
    with pytest.raises(GraphError):
        build_torus(2)


@given(st.integers(3, 20).flatmap(lambda N: st.tuples(st.just(N), st.integers(0, N - 1),
                                                        st.integers(0, N - 1))))
def test_torus_coord_roundtrip(args):
    N, x, y = args
    c = TorusCoord(x, y)
    assert TorusCoord.from_index(c.index(N), N) == c


def test_complete_graph():
    g = build_complete(4)
    assert (g.n, g.d) == (4, 3)
    assert len(g.edges()) == 6


@pytest.mark.parametrize("seed", range(5))
def test_only_cubic_graph_on_four_vertices_is_k4(seed):
    assert random_regular(4, 3, seed=seed) == build_complete(4)


def test_random_cubic_ten():
    g = random_regular(10, 3, seed=42)
    assert g.degree_histogram() == {3: 10}
    assert g.is_connected()


def test_random_regular_is_deterministic():
    assert random_regular(12, 4, seed=7) == random_regular(12, 4, seed=7)


@pytest.mark.parametrize("n,d", [(5, 3), (4, 4), (3, 5), (6, 1)])
def test_random_regular_rejects_infeasible(n, d):
    with pytest.raises(GraphError):
        random_regular(n, d, seed=0)


def test_random_regular_retry_cap():
    with pytest.raises(GraphGenerationError):
        random_regular(10, 3, seed=0, max_attempts=0)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(6, 3), (8, 3), (8, 4), (10, 5), (12, 3)]), st.integers(0, 2**32))
def test_random_regular_properties(nd, seed):
    n, d = nd
    g = random_regular(n, d, seed=seed)
    A = g.adjacency_matrix()
    assert np.array_equal(A, A.T)
    assert np.all(np.diag(A) == 0)
    assert np.all(A.sum(axis=1) == d)
    assert g.is_connected()


def test_read_triangle():
    g = read_graph("3 2\n0 1\n1 2\n2 0\n")
    assert g.edges() == [(0, 1), (0, 2), (1, 2)]


def test_read_accepts_crlf_and_trailing_blank_lines():
    g = read_graph("3 2\r\n0 1\r\n1 2\r\n2 0\r\n\r\n\n")
    assert g.d == 2


def test_read_self_loop_reports_line():
    with pytest.raises(GraphFormatError, match="line 4"):
        read_graph("4 2\n0 1\n1 2\n2 2\n3 0\n")


@pytest.mark.parametrize("text", [
    "",
    "3\n",
    "3 2\n0 1\n1 2\n",          # too few edges
    "3 2\n0 1\n1 2\n2 0\n0 1\n",  # too many / duplicate
    "3 2\n0 1\n1 3\n2 0\n",     # out of range
    "3 2\n0 1\n1 x\n2 0\n",     # not an integer
    "4 2\n0 1\n1 0\n2 3\n3 2\n",  # duplicate edge
    "4 2\n0 1\n0 2\n0 3\n1 2\n",  # wrong degrees
])
def test_read_rejects_bad_input(text):
    with pytest.raises(GraphFormatError):
        read_graph(text)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([(4, 3), (8, 3), (10, 4), (12, 5)]), st.integers(0, 2**32))
def test_write_read_roundtrip(nd, seed):
    g = random_regular(*nd, seed=seed)
    assert read_graph(write_graph(g)) == g


def test_write_format():
    assert write_graph(build_circle(3)) == "3 2\n0 1\n0 2\n1 2\n"


def test_constructor_validates_symmetry():
    with pytest.raises(GraphError):
        RegularGraph(3, 1, ((1,), (2,), (0,)))


def test_describe():
    assert build_circle(8).describe() == "circle(N=8)"
    assert build_torus(3).describe() == "torus(N=3)"
