"""Closed-form spectra of symmetric circulant and block-circulant matrices.

A circulant matrix with first row ``a`` has ``C[r, c] = a[(c - r) % n]``.
A block-circulant matrix of order ``n*n`` is indexed by ``x*n + y`` and has
``C[(x, y), (x', y')] = a[(x' - x) % n, (y' - y) % n]``; block ``l`` of the
first block row is the circulant generated by ``a[l]``.

Only real symmetric matrices are handled, so every eigenvalue is a cosine sum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .walks import CircleWalk, TorusWalk, circle_coefficients

__all__ = [
    "CirculantError",
    "CirculantSpec",
    "BlockCirculantSpec",
    "circulant_eigenvalues",
    "block_circulant_eigenvalues",
    "circle_walk_generator",
    "circle_laplacian_spec",
    "torus_walk_blocks",
    "torus_laplacian_spec",
]

SYMMETRY_TOL = 1e-12


class CirculantError(ValueError):
    pass


@dataclass(frozen=True)
class CirculantSpec:
    generator: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.generator, dtype=float)
        if a.ndim != 1 or a.size == 0:
            raise CirculantError("generator must be a non-empty vector")
        mirrored = np.roll(a[::-1], 1)  # a[(n - k) % n]
        if np.max(np.abs(a - mirrored)) > SYMMETRY_TOL:
            raise CirculantError("generator is not symmetric: a[k] != a[n-k]")
        object.__setattr__(self, "generator", a)

    @property
    def n(self) -> int:
        return self.generator.size

    def matrix(self) -> np.ndarray:
        n = self.n
        idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
        return self.generator[idx]


@dataclass(frozen=True)
class BlockCirculantSpec:
    """``blocks[l, k]`` is entry ``k`` of the generator of block ``l``.

    Symmetry of the full matrix requires ``blocks[l, k] == blocks[-l, -k]``.
    """

    blocks: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.blocks, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.size == 0:
            raise CirculantError("blocks must be a non-empty square array")
        n = a.shape[0]
        neg = (-np.arange(n)) % n
        if np.max(np.abs(a - a[np.ix_(neg, neg)])) > SYMMETRY_TOL:
            raise CirculantError("blocks are not symmetric: a[l, k] != a[n-l, n-k]")
        object.__setattr__(self, "blocks", a)

    @property
    def n(self) -> int:
        return self.blocks.shape[0]

    def matrix(self) -> np.ndarray:
        n = self.n
        r = np.arange(n)
        dx = (r[None, :] - r[:, None]) % n
        # rows (x, y), columns (x', y')
        full = self.blocks[dx[:, None, :, None], dx[None, :, None, :]]
        return full.reshape(n * n, n * n)


def circulant_eigenvalues(spec: CirculantSpec) -> np.ndarray:
    """``lam[i] = a0 + sum_k 2 a_k cos(2 pi i k / n) (+ a_{n/2} (-1)^i)``, in index order."""
    a = spec.generator
    n = a.size
    i = np.arange(n)[:, None]
    lam = np.full(n, a[0])
    half = (n - 1) // 2
    if half:
        k = np.arange(1, half + 1)[None, :]
        lam = lam + 2.0 * np.cos(2.0 * np.pi * i * k / n) @ a[1:half + 1]
    if n % 2 == 0:
        lam = lam + a[n // 2] * (-1.0) ** np.arange(n)
    return lam


def block_circulant_eigenvalues(spec: BlockCirculantSpec) -> np.ndarray:
    """``lam[i*n + j] = sum_{l,k} a[l, k] cos(2 pi (i l + j k) / n)``.

    Evaluated as ``C a C^T - S a S^T`` with ``C``/``S`` the cosine/sine tables,
    which is the same double sum in O(n^3).
    """
    a = spec.blocks
    n = a.shape[0]
    phase = 2.0 * np.pi * np.outer(np.arange(n), np.arange(n)) / n
    C = np.cos(phase)
    S = np.sin(phase)
    lam = C @ a @ C.T - S @ a @ S.T
    return lam.reshape(n * n)


def circle_walk_generator(w: CircleWalk, N: int) -> np.ndarray:
    """First row of the (generally asymmetric) single-walker circulant ``P``."""
    a = np.zeros(N)
    a[0] += w.p3
    a[1 % N] += w.p2
    a[-1 % N] += w.p1
    return a


def circle_laplacian_spec(w: CircleWalk, N: int) -> CirculantSpec:
    """Generator ``(1 - q0, -q1, -q2, 0, ..., 0, -q2, -q1)`` of ``I - P P^T``, folded mod ``N``."""
    q0, q1, q2 = circle_coefficients(w)
    a = np.zeros(N)
    a[0] += 1.0
    for offset, coeff in zip((0, 1, -1, 2, -2), (q0, q1, q1, q2, q2)):
        a[offset % N] -= coeff
    return CirculantSpec(a)


def torus_walk_blocks(w: TorusWalk, N: int) -> np.ndarray:
    """Generator of the single-walker block-circulant ``P``; ``c[dx, dy]``."""
    c = np.zeros((N, N))
    c[0, 0] += w.stay
    c[-1 % N, 0] += w.x_minus
    c[1 % N, 0] += w.x_plus
    c[0, -1 % N] += w.y_minus
    c[0, 1 % N] += w.y_plus
    return c


def torus_laplacian_spec(w: TorusWalk, N: int) -> BlockCirculantSpec:
    """Generator of ``I - P P^T`` via the 2-D cyclic autocorrelation of ``P``'s generator."""
    c = torus_walk_blocks(w, N)
    support = list(zip(*np.nonzero(c)))
    m = np.zeros((N, N))
    # (P P^T)[0, (l, k)] = sum_{a, b} c[a, b] c[a - l, b - k]
    for a, b in support:
        for a2, b2 in support:
            m[(a - a2) % N, (b - b2) % N] += c[a, b] * c[a2, b2]
    lap = -m
    lap[0, 0] += 1.0
    return BlockCirculantSpec(lap)
