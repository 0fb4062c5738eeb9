"""Estimators of the expected meeting time ``E[tau]`` of two independent walkers.

Both walkers start independently and uniformly at random; ``tau = 0`` when
they start on the same vertex, otherwise it counts simultaneous steps until
they first share a vertex.

* ``spectral``  - sum of reciprocals of the nonzero eigenvalues of ``I - P P^T``.
* ``absorbing`` - exact expectation of the pair chain ``Q = P ⊗ P`` absorbed
  on the diagonal states.
* ``relative``  - hitting times of the relative-position chain ``M = P P^T``
  (valid on vertex-transitive graphs such as the circle and torus).
* ``montecarlo`` - see :mod:`rendezvous.montecarlo`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .circulant import (
    block_circulant_eigenvalues,
    circle_laplacian_spec,
    circulant_eigenvalues,
    torus_laplacian_spec,
)
from .graphs import RegularGraph
from .linalg import LinAlgError, inf_norm, kronecker, lu_factor
from .walks import CircleWalk, Laplacian, RelativeChain, TorusWalk, WalkSpec, transition_matrix

__all__ = [
    "MeetingError",
    "MeetingEstimate",
    "TwoWalkerChain",
    "MeetingVector",
    "spectral_meeting_time",
    "spectral_from_eigenvalues",
    "circle_spectral_meeting_time",
    "torus_spectral_meeting_time",
    "two_walker_chain",
    "absorbing_meeting_time",
    "absorbing_from_transition",
    "pair_hitting_times",
    "meeting_vector",
    "relative_meeting_time",
    "verify_laplacian_system",
    "METHODS",
]

METHODS = ("spectral", "absorbing", "relative", "montecarlo")


class MeetingError(ArithmeticError):
    pass


@dataclass
class MeetingEstimate:
    value: float
    method: str
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")


def spectral_from_eigenvalues(eigenvalues, threshold: float) -> MeetingEstimate:
    """Sum ``1/lam`` over eigenvalues with ``|lam| >= threshold``; exactly one must be dropped."""
    lam = np.asarray(eigenvalues, dtype=float)
    zero = np.abs(lam) < threshold
    dropped = int(zero.sum())
    if dropped != 1:
        raise MeetingError(
            f"expected exactly one zero eigenvalue, found {dropped} (threshold {threshold:.3e}); "
            "graph disconnected or walk degenerate"
        )
    kept = lam[~zero]
    return MeetingEstimate(
        float(np.sum(1.0 / kept)),
        "spectral",
        {"dropped_zero_eigenvalues": dropped, "min_nonzero_eigenvalue": float(kept.min())},
    )


def spectral_meeting_time(lap: Laplacian) -> MeetingEstimate:
    est = spectral_from_eigenvalues(lap.spectrum.eigenvalues, lap.threshold)
    est.diagnostics["eigen_residual"] = lap.spectrum.residual
    est.diagnostics["eigen_source"] = "jacobi"
    return est


def circle_spectral_meeting_time(w: CircleWalk, N: int) -> MeetingEstimate:
    """Spectral estimate on the ``N``-circle from the circulant closed form."""
    spec = circle_laplacian_spec(w, N)
    threshold = 1e-9 * (1.0 + float(np.abs(spec.generator).sum()))
    est = spectral_from_eigenvalues(circulant_eigenvalues(spec), threshold)
    est.diagnostics["eigen_source"] = "circulant"
    return est


def torus_spectral_meeting_time(w: TorusWalk, N: int) -> MeetingEstimate:
    """Spectral estimate on the ``N x N`` torus from the block-circulant closed form."""
    spec = torus_laplacian_spec(w, N)
    # all rows of a (block-)circulant matrix share one absolute row sum
    threshold = 1e-9 * (1.0 + float(np.abs(spec.blocks).sum()))
    est = spectral_from_eigenvalues(block_circulant_eigenvalues(spec), threshold)
    est.diagnostics["eigen_source"] = "block_circulant"
    return est


@dataclass(frozen=True)
class TwoWalkerChain:
    """Pair chain on states ``i*n + j`` (first walker at ``i``, second at ``j``).

    ``B`` is ``Q`` restricted to the transient (off-diagonal) states and
    ``exit[t]`` is the probability of stepping from transient state ``t``
    straight into the absorbing diagonal.
    """

    n: int
    Q: np.ndarray
    absorbing: np.ndarray
    transient: np.ndarray
    B: np.ndarray
    exit: np.ndarray
    p0: np.ndarray

    @property
    def p0_transient(self) -> np.ndarray:
        return self.p0[self.transient]


def two_walker_chain(P) -> TwoWalkerChain:
    P = np.asarray(P, dtype=float)
    n = P.shape[0]
    Q = kronecker(P, P)
    absorbing = np.arange(n) * (n + 1)
    mask = np.ones(n * n, dtype=bool)
    mask[absorbing] = False
    transient = np.flatnonzero(mask)
    B = Q[np.ix_(transient, transient)]
    exit_ = Q[np.ix_(transient, absorbing)].sum(axis=1)
    p0 = np.full(n * n, 1.0 / (n * n))
    return TwoWalkerChain(n, Q, absorbing, transient, B, exit_, p0)


def _stranded_states(chain: TwoWalkerChain) -> list[int]:
    """Transient states from which the diagonal is unreachable."""
    support = chain.Q > 0
    reached = np.zeros(chain.n * chain.n, dtype=bool)
    reached[chain.absorbing] = True
    queue = deque(chain.absorbing.tolist())
    while queue:
        s = queue.popleft()
        for r in np.flatnonzero(support[:, s] & ~reached):
            reached[r] = True
            queue.append(int(r))
    return [int(s) for s in chain.transient if not reached[s]]


def absorbing_from_transition(P) -> tuple[MeetingEstimate, TwoWalkerChain]:
    """Exact ``E[tau] = p0 (I - B)^-2 b`` over the transient states.

    ``(I - B)^-2 b`` comes from two solves against one LU factorisation.
    The same value is recomputed as ``p0 (I - B)^-1 1`` and the gap is
    reported as ``form_discrepancy``.
    """
    chain = two_walker_chain(P)
    stranded = _stranded_states(chain)
    if stranded:
        i, j = divmod(stranded[0], chain.n)
        raise MeetingError(
            f"I - B is singular: walkers starting at ({i}, {j}) can never meet "
            f"({len(stranded)} such states)"
        )
    m = chain.transient.size
    K = np.eye(m) - chain.B
    lu = lu_factor(K)
    ones = np.ones(m)
    first = lu.solve(np.column_stack([chain.exit, ones]))
    x1, hitting = first[:, 0], first[:, 1]
    x2 = lu.solve(x1)
    p0t = chain.p0_transient
    value = float(p0t @ x2)
    via_hitting = float(p0t @ hitting)
    diagnostics = {
        "form_discrepancy": abs(value - via_hitting),
        "identity_residual": inf_norm(K @ ones - chain.exit),
        "solver_residual": max(inf_norm(K @ x1 - chain.exit), inf_norm(K @ x2 - x1),
                               inf_norm(K @ hitting - ones)),
        # B >= 0 and (I - B) h = 1 with h > 0 bound the Perron root of B
        "spectral_radius_bound": 1.0 - 1.0 / float(hitting.max()),
        "transient_states": int(m),
    }
    return MeetingEstimate(value, "absorbing", diagnostics), chain


def absorbing_meeting_time(g: RegularGraph, w: WalkSpec) -> MeetingEstimate:
    return absorbing_from_transition(transition_matrix(g, w))[0]


def pair_hitting_times(P) -> np.ndarray:
    """Expected meeting time from every ordered pair, as an ``n x n`` array (zero diagonal)."""
    chain = two_walker_chain(P)
    if _stranded_states(chain):
        raise MeetingError("some starting pairs can never meet")
    m = chain.transient.size
    T = np.zeros(chain.n * chain.n)
    T[chain.transient] = lu_factor(np.eye(m) - chain.B).solve(np.ones(m))
    return T.reshape(chain.n, chain.n)


@dataclass(frozen=True)
class MeetingVector:
    """Hitting times ``T`` of the meeting state and the right-hand side ``delta_t``.

    ``delta_t`` is 1 everywhere except ``-(n - 1)`` at the meeting state, so
    that ``(I - M) T = delta_t`` holds in every row.
    """

    T: np.ndarray
    delta_t: np.ndarray
    meeting_state: int


def meeting_vector(rc: RelativeChain) -> MeetingVector:
    M = np.asarray(rc.M, dtype=float)
    n = M.shape[0]
    s = rc.meeting_state
    keep = np.array([i for i in range(n) if i != s], dtype=int)
    T = np.zeros(n)
    if keep.size:
        K = np.eye(keep.size) - M[np.ix_(keep, keep)]
        T[keep] = lu_factor(K).solve(np.ones(keep.size))
    delta_t = np.ones(n)
    delta_t[s] = -(n - 1)
    return MeetingVector(T, delta_t, s)


def relative_meeting_time(rc: RelativeChain) -> MeetingEstimate:
    """``E[tau] = mean(T)`` for the relative-position hitting times ``T``."""
    try:
        mv = meeting_vector(rc)
    except LinAlgError as exc:
        raise MeetingError(f"relative hitting-time system is singular: {exc}") from exc
    M = np.asarray(rc.M, dtype=float)
    L = np.eye(M.shape[0]) - M
    return MeetingEstimate(
        float(mv.T.mean()),
        "relative",
        {"laplacian_residual": verify_laplacian_system(L, mv), "meeting_state": mv.meeting_state},
    )


def verify_laplacian_system(L, mv: MeetingVector) -> float:
    """``||L T - delta_t||_inf``."""
    L = L.L if isinstance(L, Laplacian) else np.asarray(L, dtype=float)
    return inf_norm(L @ mv.T - mv.delta_t)
