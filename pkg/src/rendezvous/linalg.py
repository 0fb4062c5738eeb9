"""Dense real linear algebra used by every meeting-time oracle.

Matrices are plain 2-D float ``numpy`` arrays. The eigensolver is a cyclic
Jacobi method and the linear solver is Gaussian elimination with partial
pivoting; both are small enough to audit and accurate to ~1e-13 on the
matrices this package builds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "LinAlgError",
    "SingularMatrixError",
    "ConvergenceError",
    "Spectrum",
    "LUFactor",
    "sym_eigen",
    "lu_factor",
    "solve",
    "kronecker",
    "inf_norm",
    "zero_threshold",
    "symmetry_defect",
    "MAX_KRONECKER_DIM",
]

MAX_KRONECKER_DIM = 4096
SYMMETRY_TOL = 1e-10
PIVOT_TOL = 1e-13


class LinAlgError(ValueError):
    pass


class SingularMatrixError(LinAlgError):
    pass


class ConvergenceError(LinAlgError):
    pass


def inf_norm(A) -> float:
    """Maximum absolute row sum (vector infinity norm for 1-D input)."""
    A = np.asarray(A, dtype=float)
    if A.ndim == 1:
        return float(np.max(np.abs(A))) if A.size else 0.0
    return float(np.max(np.sum(np.abs(A), axis=1))) if A.size else 0.0


def zero_threshold(A) -> float:
    """Eigenvalues below this magnitude count as zero for ``A``."""
    return 1e-9 * (1.0 + inf_norm(A))


def symmetry_defect(A) -> float:
    A = np.asarray(A, dtype=float)
    return float(np.max(np.abs(A - A.T))) if A.size else 0.0


def _as_square(A) -> np.ndarray:
    A = np.array(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise LinAlgError(f"expected a non-empty square matrix, got shape {A.shape}")
    return A


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in ascending order with matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual: float

    def nonzero(self, threshold: float) -> np.ndarray:
        return self.eigenvalues[np.abs(self.eigenvalues) >= threshold]


def sym_eigen(A, tol: float | None = None, max_sweeps: int = 100) -> Spectrum:
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    A : array_like, shape (n, n)
        Symmetric within 1e-10.
    tol : float, optional
        Stop once the off-diagonal Frobenius norm is at most ``tol``.
        Defaults to ``1e-12 * ||A||_F``.
    max_sweeps : int
        Cap on full sweeps over the upper triangle.

    Returns
    -------
    Spectrum
    """
    A = _as_square(A)
    if symmetry_defect(A) > SYMMETRY_TOL:
        raise LinAlgError(f"matrix is not symmetric (defect {symmetry_defect(A):.3e})")
    A = 0.5 * (A + A.T)
    n = A.shape[0]
    if tol is None:
        tol = 1e-12 * float(np.linalg.norm(A))
    a = A.copy()
    V = np.eye(n)

    off_mask = ~np.eye(n, dtype=bool)

    def off_norm() -> float:
        # direct sum; ||a||^2 - ||diag||^2 cancels far above tol
        return float(np.linalg.norm(a[off_mask]))

    for _ in range(max_sweeps):
        if off_norm() <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < 1e-300 * abs(diff):
                    # rotation angle underflows; annihilate directly
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = diff / (2.0 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q]
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :]
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q]
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    else:
        if off_norm() > tol:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    V = V[:, order]
    residual = float(np.max(np.abs(A @ V - V * w))) if n else 0.0
    return Spectrum(w, V, residual)


@dataclass(frozen=True)
class LUFactor:
    """Packed ``PA = LU`` factors; ``perm[i]`` is the original row now at ``i``."""

    lu: np.ndarray
    perm: np.ndarray

    def solve(self, rhs) -> np.ndarray:
        b = np.asarray(rhs, dtype=float)
        n = self.lu.shape[0]
        if b.shape[0] != n:
            raise LinAlgError(f"rhs has {b.shape[0]} rows, matrix has {n}")
        y = b[self.perm].copy()
        lu = self.lu
        for i in range(1, n):
            y[i] -= lu[i, :i] @ y[:i]
        for i in range(n - 1, -1, -1):
            y[i] = (y[i] - lu[i, i + 1:] @ y[i + 1:]) / lu[i, i]
        return y


def lu_factor(A) -> LUFactor:
    """Gaussian elimination with partial pivoting.

    Raises SingularMatrixError naming the column whose pivot falls below 1e-13.
    """
    a = _as_square(A)
    n = a.shape[0]
    perm = np.arange(n)
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) < PIVOT_TOL:
            raise SingularMatrixError(f"pivot {abs(a[p, k]):.3e} below {PIVOT_TOL} at column {k}")
        if p != k:
            a[[k, p]] = a[[p, k]]
            perm[[k, p]] = perm[[p, k]]
        a[k + 1:, k] /= a[k, k]
        a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    return LUFactor(a, perm)


def solve(A, rhs) -> np.ndarray:
    """Solve ``A x = rhs``; ``rhs`` may be a vector or a matrix of columns."""
    return lu_factor(A).solve(rhs)


def kronecker(A, B) -> np.ndarray:
    """``(A ⊗ B)[i*rB + k, j*cB + l] = A[i, j] * B[k, l]``."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.ndim != 2 or B.ndim != 2:
        raise LinAlgError("kronecker expects 2-D operands")
    rows = A.shape[0] * B.shape[0]
    cols = A.shape[1] * B.shape[1]
    if max(rows, cols) > MAX_KRONECKER_DIM:
        raise LinAlgError(f"kronecker product {rows}x{cols} exceeds cap {MAX_KRONECKER_DIM}")
    return (A[:, None, :, None] * B[None, :, None, :]).reshape(rows, cols)
