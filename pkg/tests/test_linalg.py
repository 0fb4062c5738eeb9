from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rendezvous.linalg import (
    MAX_KRONECKER_DIM,
    ConvergenceError,
    LinAlgError,
    SingularMatrixError,
    inf_norm,
    kronecker,
    lu_factor,
    solve,
    sym_eigen,
)


def random_symmetric(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n, n))
    return (A + A.T) / 2


def test_identity_spectrum():
    s = sym_eigen(np.eye(3))
    assert np.allclose(s.eigenvalues, 1.0, atol=1e-14)
    assert np.allclose(np.abs(s.eigenvectors.T @ s.eigenvectors), np.eye(3), atol=1e-14)


def test_swap_matrix():
    s = sym_eigen(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(s.eigenvalues, [-1.0, 1.0], atol=1e-14)


def test_triangle_adjacency():
    A = np.ones((3, 3)) - np.eye(3)
    assert np.allclose(sym_eigen(A).eigenvalues, [-1, -1, 2], atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 5, 17, 40, 64])
def test_reconstruction_and_residual(n):
    A = random_symmetric(n, n)
    s = sym_eigen(A)
    V, lam = s.eigenvectors, s.eigenvalues
    bound = 1e-9 * (1 + inf_norm(A))
    assert inf_norm(V @ np.diag(lam) @ V.T - A) <= bound
    assert inf_norm(V.T @ V - np.eye(n)) <= 1e-9
    assert s.residual <= bound
    assert np.all(np.diff(lam) >= 0)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 24), st.integers(0, 2**32))
def test_matches_numpy_reference(n, seed):
    A = random_symmetric(n, seed)
    ref = np.linalg.eigvalsh(A)
    assert np.max(np.abs(sym_eigen(A).eigenvalues - ref)) <= 1e-9 * (1 + inf_norm(A))


def test_rejects_non_square_and_asymmetric():
    with pytest.raises(LinAlgError):
        sym_eigen(np.zeros((2, 3)))
    with pytest.raises(LinAlgError):
        sym_eigen(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_non_convergence_is_reported():
    with pytest.raises(ConvergenceError):
        sym_eigen(random_symmetric(6, 1), max_sweeps=0)


def test_solve_example():
    x = solve(np.array([[2.0, 1.0], [1.0, 3.0]]), np.array([3.0, 5.0]))
    assert np.allclose(x, [0.8, 1.4], atol=1e-14)


def test_solve_needs_pivoting():
    x = solve(np.array([[0.0, 1.0], [1.0, 0.0]]), np.array([2.0, 3.0]))
    assert np.allclose(x, [3.0, 2.0])


def test_singular_matrix():
    with pytest.raises(SingularMatrixError):
        lu_factor(np.array([[1.0, 2.0], [2.0, 4.0]]))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 30), st.integers(0, 2**32))
def test_solve_residual(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n, n)) + n * np.eye(n)
    b = rng.normal(size=n)
    x = solve(A, b)
    assert inf_norm(A @ x - b) <= 1e-10 * (1 + inf_norm(A)) * (1 + inf_norm(b))


def test_lu_solves_matrix_rhs():
    rng = np.random.default_rng(3)
    A = rng.normal(size=(5, 5)) + 5 * np.eye(5)
    B = rng.normal(size=(5, 3))
    X = lu_factor(A).solve(B)
    assert np.allclose(A @ X, B, atol=1e-12)


def test_kronecker_examples():
    I2 = np.eye(2)
    assert np.array_equal(kronecker(I2, I2), np.eye(4))
    A = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.array_equal(kronecker(A, np.ones((1, 1))), A)
    expected = np.array([[0, 1, 0, 2], [1, 0, 2, 0], [0, 3, 0, 4], [3, 0, 4, 0]], dtype=float)
    assert np.array_equal(kronecker(A, np.array([[0.0, 1.0], [1.0, 0.0]])), expected)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**32))
def test_kronecker_matches_numpy(m, n, seed):
    rng = np.random.default_rng(seed)
    A, B = rng.normal(size=(m, m)), rng.normal(size=(n, n))
    assert np.array_equal(kronecker(A, B), np.kron(A, B))


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32))
def test_kronecker_spectrum_is_products(n, seed):
    A = random_symmetric(n, seed)
    beta = sym_eigen(A).eigenvalues
    pair = sym_eigen(kronecker(A, A)).eigenvalues
    assert np.allclose(np.sort(np.outer(beta, beta).ravel()), pair, atol=1e-9 * (1 + inf_norm(A) ** 2))


def test_kronecker_size_cap():
    big = np.zeros((65, 65))
    assert 65 * 65 > MAX_KRONECKER_DIM
    with pytest.raises(LinAlgError):
        kronecker(big, big)
