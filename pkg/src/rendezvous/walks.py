"""Single-walker transition matrices and the two-walker relative-position chain.

Meeting means co-location after a simultaneous step. Two walkers that swap
endpoints of an edge do not meet; ``M = P @ P.T`` encodes exactly that.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, fields
from typing import Union

import numpy as np

from .graphs import RegularGraph
from .linalg import Spectrum, sym_eigen, zero_threshold

__all__ = [
    "WalkError",
    "LazinessWarning",
    "CircleWalk",
    "TorusWalk",
    "SimpleWalk",
    "WalkSpec",
    "RelativeChain",
    "Laplacian",
    "transition_matrix",
    "relative_chain",
    "relative_chain_for",
    "laplacian",
    "circle_coefficients",
    "stay_probability",
    "describe_walk",
]

PROB_TOL = 1e-12


class WalkError(ValueError):
    pass


class LazinessWarning(UserWarning):
    """A walk that never stays put may fail to meet on bipartite structure."""


def _check_distribution(spec) -> None:
    values = [getattr(spec, f.name) for f in fields(spec)]
    if any(not math.isfinite(v) or v < 0 for v in values):
        raise WalkError(f"probabilities must be finite and nonnegative: {values}")
    if abs(sum(values) - 1.0) > PROB_TOL:
        raise WalkError(f"probabilities must sum to 1, got {sum(values)!r}")


@dataclass(frozen=True)
class CircleWalk:
    """Move to ``i - 1`` with ``p1``, to ``i + 1`` with ``p2``, stay with ``p3``."""

    p1: float
    p2: float
    p3: float

    def __post_init__(self):
        _check_distribution(self)


@dataclass(frozen=True)
class TorusWalk:
    """Axis moves on the torus plus staying put."""

    x_minus: float
    x_plus: float
    y_minus: float
    y_plus: float
    stay: float

    def __post_init__(self):
        _check_distribution(self)

    @classmethod
    def simple(cls) -> "TorusWalk":
        return cls(0.2, 0.2, 0.2, 0.2, 0.2)


@dataclass(frozen=True)
class SimpleWalk:
    """Uniform over the current vertex and its ``d`` neighbours."""


WalkSpec = Union[CircleWalk, TorusWalk, SimpleWalk]


def stay_probability(walk: WalkSpec, d: int | None = None) -> float:
    if isinstance(walk, CircleWalk):
        return walk.p3
    if isinstance(walk, TorusWalk):
        return walk.stay
    if d is None:
        raise WalkError("simple walk stay probability needs the degree")
    return 1.0 / (d + 1)


def describe_walk(walk: WalkSpec) -> str:
    if isinstance(walk, SimpleWalk):
        return "simple"
    values = ",".join(f"{getattr(walk, f.name):.12g}" for f in fields(walk))
    return f"{type(walk).__name__}({values})"


def transition_matrix(g: RegularGraph, w: WalkSpec) -> np.ndarray:
    """Row-stochastic single-walker matrix ``P[i, j] = Pr(i -> j)``."""
    n = g.n
    P = np.zeros((n, n))
    if isinstance(w, SimpleWalk):
        P = (np.eye(n) + g.adjacency_matrix()) / (g.d + 1)
    elif isinstance(w, CircleWalk):
        if g.family != "circle":
            raise WalkError(f"CircleWalk needs a circle, got {g.describe()}")
        for i in range(n):
            P[i, (i - 1) % n] += w.p1
            P[i, (i + 1) % n] += w.p2
            P[i, i] += w.p3
    elif isinstance(w, TorusWalk):
        if g.family != "torus":
            raise WalkError(f"TorusWalk needs a torus, got {g.describe()}")
        N = g.side
        for x in range(N):
            for y in range(N):
                i = x * N + y
                P[i, ((x - 1) % N) * N + y] += w.x_minus
                P[i, ((x + 1) % N) * N + y] += w.x_plus
                P[i, x * N + (y - 1) % N] += w.y_minus
                P[i, x * N + (y + 1) % N] += w.y_plus
                P[i, i] += w.stay
    else:
        raise WalkError(f"unknown walk specification {w!r}")
    if stay_probability(w, g.d) == 0.0:
        warnings.warn(
            f"{describe_walk(w)} never stays put; walkers may be unable to meet",
            LazinessWarning,
            stacklevel=2,
        )
    return P


def circle_coefficients(w: CircleWalk) -> tuple[float, float, float]:
    """``(q0, q1, q2)``: relative displacement 0, +-1, +-2 per step."""
    q0 = w.p1**2 + w.p2**2 + w.p3**2
    q1 = w.p3 * (w.p1 + w.p2)
    q2 = w.p1 * w.p2
    return q0, q1, q2


@dataclass(frozen=True)
class RelativeChain:
    """Transition matrix of one walker's position seen from the other.

    ``meeting_state`` is the vertex the fixed walker occupies: 0 on the
    circle, the last cell ``N*N - 1`` on the torus.
    """

    M: np.ndarray
    meeting_state: int = 0
    q: tuple[float, float, float] | None = None


def relative_chain(P, walk: WalkSpec | None = None, meeting_state: int = 0) -> RelativeChain:
    P = np.asarray(P, dtype=float)
    if np.max(np.abs(P.sum(axis=1) - 1.0)) > PROB_TOL or np.min(P) < 0:
        raise WalkError("P must be row-stochastic")
    M = P @ P.T
    q = None
    if isinstance(walk, CircleWalk):
        q = circle_coefficients(walk)
        n = M.shape[0]
        expected = np.zeros(n)
        for offset, coeff in zip((0, 1, -1, 2, -2), (q[0], q[1], q[1], q[2], q[2])):
            expected[offset % n] += coeff
        gap = float(np.max(np.abs(expected - M[0])))
        if gap > PROB_TOL:
            raise WalkError(f"first row of P P^T disagrees with (q0, q1, q2) by {gap:.3e}")
    return RelativeChain(M, meeting_state, q)


def relative_chain_for(g: RegularGraph, w: WalkSpec) -> RelativeChain:
    meeting_state = g.n - 1 if g.family == "torus" else 0
    return relative_chain(transition_matrix(g, w), w, meeting_state)


@dataclass(frozen=True)
class Laplacian:
    L: np.ndarray
    spectrum: Spectrum
    zero_multiplicity: int

    @property
    def threshold(self) -> float:
        return zero_threshold(self.L)


def laplacian(P) -> Laplacian:
    """``L = I - P P^T`` with its dense spectrum."""
    P = np.asarray(P, dtype=float)
    L = np.eye(P.shape[0]) - P @ P.T
    L = 0.5 * (L + L.T)
    spectrum = sym_eigen(L)
    zeros = int(np.sum(np.abs(spectrum.eigenvalues) < zero_threshold(L)))
    return Laplacian(L, spectrum, zeros)
