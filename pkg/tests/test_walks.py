from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rendezvous.graphs import build_circle, build_complete, build_torus, random_regular
from rendezvous.linalg import sym_eigen
from rendezvous.walks import (
    CircleWalk,
    LazinessWarning,
    SimpleWalk,
    TorusWalk,
    WalkError,
    circle_coefficients,
    describe_walk,
    laplacian,
    relative_chain,
    relative_chain_for,
    transition_matrix,
)

THIRD = CircleWalk(1 / 3, 1 / 3, 1 / 3)

lazy_triples = st.tuples(st.floats(0.01, 1), st.floats(0.01, 1), st.floats(0.01, 1)).map(
    lambda t: tuple(x / sum(t) for x in t))


def circle_walk(t):
    p1, p2 = t[0], t[1]
    return CircleWalk(p1, p2, 1.0 - p1 - p2)


def test_triangle_simple_walk():
    assert np.allclose(transition_matrix(build_circle(3), SimpleWalk()), 1 / 3)


def test_circle_four_first_row():
    P = transition_matrix(build_circle(4), THIRD)
    assert np.allclose(P[0], [1 / 3, 1 / 3, 0, 1 / 3])


def test_torus_simple_rows():
    P = transition_matrix(build_torus(3), TorusWalk.simple())
    for row in P:
        nz = row[row > 0]
        assert len(nz) == 5 and np.allclose(nz, 0.2)


def test_incompatible_walk_and_graph():
    with pytest.raises(WalkError):
        transition_matrix(build_torus(3), THIRD)
    with pytest.raises(WalkError):
        transition_matrix(build_circle(5), TorusWalk.simple())


@pytest.mark.parametrize("probs", [(0.5, 0.6, -0.1), (0.5, 0.5, 0.5), (float("nan"), 0.5, 0.5)])
def test_invalid_probabilities(probs):
    with pytest.raises(WalkError):
        CircleWalk(*probs)


def test_non_lazy_walk_warns():
    with pytest.warns(LazinessWarning):
        transition_matrix(build_circle(4), CircleWalk(0.5, 0.5, 0.0))


def test_relative_chain_circle_five_row():
    rc = relative_chain_for(build_circle(5), THIRD)
    assert np.allclose(rc.M[0], [1 / 3, 2 / 9, 1 / 9, 1 / 9, 2 / 9])


def test_relative_chain_circle_four_by_hand():
    P = transition_matrix(build_circle(4), THIRD)
    M = relative_chain(P).M
    # oracle: Pr(both land on the same offset) summed explicitly
    manual = sum(P[0, k] * P[2, k] for k in range(4))
    assert M[0, 2] == pytest.approx(2 / 9, abs=1e-15)
    assert M[0, 2] == pytest.approx(manual, abs=1e-15)


def test_relative_chain_torus_meeting_state_is_last():
    rc = relative_chain_for(build_torus(3), TorusWalk.simple())
    assert rc.meeting_state == 8


@settings(max_examples=40, deadline=None)
@given(lazy_triples, st.integers(3, 12))
def test_relative_chain_is_stochastic_and_psd(t, N):
    w = circle_walk(t)
    M = relative_chain_for(build_circle(N), w).M
    assert np.allclose(M.sum(axis=1), 1.0, atol=1e-12)
    assert np.allclose(M, M.T, atol=1e-14)
    assert sym_eigen(M).eigenvalues.min() >= -1e-9


@settings(max_examples=40, deadline=None)
@given(lazy_triples)
def test_circle_coefficients_sum_to_one(t):
    q0, q1, q2 = circle_coefficients(circle_walk(t))
    assert q0 + 2 * q1 + 2 * q2 == pytest.approx(1.0, abs=1e-12)


def test_triangle_laplacian():
    lap = laplacian(transition_matrix(build_circle(3), SimpleWalk()))
    assert np.allclose(lap.spectrum.eigenvalues, [0, 1, 1], atol=1e-12)
    assert lap.zero_multiplicity == 1


def test_circle_four_laplacian():
    lap = laplacian(transition_matrix(build_circle(4), THIRD))
    assert np.allclose(lap.spectrum.eigenvalues, [0, 8 / 9, 8 / 9, 8 / 9], atol=1e-12)
    assert np.allclose(lap.L.sum(axis=1), 0, atol=1e-14)


@pytest.mark.parametrize("n,d,seed", [(8, 3, 1), (10, 4, 2), (12, 5, 3)])
def test_simple_walk_laplacian_from_adjacency(n, d, seed):
    g = random_regular(n, d, seed=seed)
    mu = sym_eigen(g.adjacency_matrix()).eigenvalues
    beta = (mu + 1) / (d + 1)
    lap = laplacian(transition_matrix(g, SimpleWalk()))
    assert np.allclose(np.sort(1 - beta**2), lap.spectrum.eigenvalues, atol=1e-9)


def test_describe_walk():
    assert describe_walk(SimpleWalk()) == "simple"
    assert describe_walk(CircleWalk(0.5, 0.3, 0.2)) == "CircleWalk(0.5,0.3,0.2)"


def test_complete_graph_simple_walk_is_uniform():
    P = transition_matrix(build_complete(4), SimpleWalk())
    assert np.allclose(P, 0.25)
