"""Numerical checks of the growth rates and conjectures about meeting times.

* order of growth: ``E[tau] / N^2`` on the circle and ``E[tau] / (N^2 ln N)``
  on the torus over a dyadic range of ``N``;
* the cosine inequality and dyadic-shell sums used to bound the torus sum;
* the general regular graph experiment (spectral vs exact vs simulation);
* the eigenvector-basis checker and the Kronecker argument built on it.

The conjecture checkers report; they never assert. A graph on which the
spectral formula misses the exact value is a finding, not an error.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .circulant import block_circulant_eigenvalues, torus_laplacian_spec
from .graphs import GraphError, RegularGraph, random_regular
from .linalg import kronecker, sym_eigen
from .meeting import (
    MeetingError,
    absorbing_from_transition,
    circle_spectral_meeting_time,
    pair_hitting_times,
    spectral_meeting_time,
    torus_spectral_meeting_time,
)
from .montecarlo import McConfig, simulate_meeting
from .walks import CircleWalk, SimpleWalk, TorusWalk, WalkSpec, laplacian, transition_matrix

__all__ = [
    "ScalingRow",
    "scaling_study",
    "ratio_spread",
    "lemma1_check",
    "lemma1_grid",
    "PartitionSums",
    "torus_partition_sums",
    "boundary_sum",
    "torus_eigenvalue_forms",
    "kronecker_bridge",
    "Conjecture1Row",
    "conjecture1_experiment",
    "derive_seed",
    "Conjecture2Report",
    "conjecture2_check",
    "proposition1_pipeline",
    "MAX_TORUS_SIDE",
]

MAX_TORUS_SIDE = 128


# --------------------------------------------------------------------------
# growth rates
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalingRow:
    N: int
    e_tau: float
    normalizer: float
    ratio: float
    wall_time: float


def scaling_study(family: str, N_list, walk: WalkSpec | None = None) -> list[ScalingRow]:
    """Closed-form ``E[tau]`` against ``N^2`` (circle) or ``N^2 ln N`` (torus)."""
    rows = []
    for N in N_list:
        start = time.perf_counter()
        if family == "circle":
            w = walk if walk is not None else CircleWalk(1 / 3, 1 / 3, 1 / 3)
            if not isinstance(w, CircleWalk):
                raise ValueError("circle scaling needs a CircleWalk")
            e_tau = circle_spectral_meeting_time(w, N).value
            normalizer = float(N * N)
        elif family == "torus":
            if N > MAX_TORUS_SIDE:
                raise ValueError(f"torus side {N} exceeds cap {MAX_TORUS_SIDE}")
            w = walk if walk is not None else TorusWalk.simple()
            if not isinstance(w, TorusWalk):
                raise ValueError("torus scaling needs a TorusWalk")
            e_tau = torus_spectral_meeting_time(w, N).value
            normalizer = N * N * math.log(N)
        else:
            raise ValueError(f"unknown family {family!r}")
        rows.append(ScalingRow(N, e_tau, normalizer, e_tau / normalizer,
                               time.perf_counter() - start))
    return rows


def ratio_spread(rows: list[ScalingRow]) -> float:
    ratios = [r.ratio for r in rows]
    return max(ratios) / min(ratios)


# --------------------------------------------------------------------------
# cosine inequality and dyadic shells
# --------------------------------------------------------------------------


def lemma1_check(theta1: float, theta2: float) -> bool:
    """``1/(1 - cos t1 cos t2) <= 4/(1 - cos 2t1 cos 2t2)`` for ``t1, t2`` in ``(0, pi/4]``."""
    quarter = math.pi / 4 * (1 + 1e-15)
    for t in (theta1, theta2):
        if not 0 < t <= quarter:
            raise ValueError(f"angle {t!r} outside (0, pi/4]")
    lhs = 1.0 / (1.0 - math.cos(theta1) * math.cos(theta2))
    rhs = 4.0 / (1.0 - math.cos(2 * theta1) * math.cos(2 * theta2))
    return lhs <= rhs * (1 + 1e-12)


def lemma1_grid(resolution: int = 100) -> tuple[bool, int]:
    """Check every pair of ``k pi / (4 resolution)``, ``k = 1..resolution``; returns (all hold, count)."""
    angles = [k * math.pi / (4 * resolution) for k in range(1, resolution + 1)]
    results = [lemma1_check(a, b) for a in angles for b in angles]
    return all(results), len(results)


@dataclass(frozen=True)
class PartitionSums:
    """Shell sums ``S[k]`` of ``(1 - cos(p pi/2N) cos(q pi/2N))^-1``.

    Shell ``k`` holds the pairs ``1 <= p, q <= N`` with ``max(p, q)`` in
    ``(2^(k-1), 2^k]``; shell 0 is ``(1, 1)``. The outermost shell includes
    the ``2N - 1`` pairs touching ``p = N`` or ``q = N``, each contributing 1.
    """

    N: int
    S: tuple[float, ...]
    shell_sizes: tuple[int, ...]
    term_min: tuple[float, ...]
    term_max: tuple[float, ...]

    @property
    def monotone(self) -> bool:
        return all(a <= b for a, b in zip(self.S, self.S[1:]))

    @property
    def first_ratio(self) -> float:
        return self.S[0] / self.N**2

    @property
    def last_ratio(self) -> float:
        return self.S[-1] / self.N**2

    @property
    def last_shell_mean(self) -> float:
        return self.S[-1] / self.shell_sizes[-1]


def _shell_term(p, q, N):
    return 1.0 / (1.0 - np.cos(p * np.pi / (2 * N)) * np.cos(q * np.pi / (2 * N)))


def torus_partition_sums(N: int) -> PartitionSums:
    if N < 2 or N & (N - 1):
        raise ValueError(f"N must be a power of two >= 2, got {N}")
    K = N.bit_length() - 1
    p, q = np.meshgrid(np.arange(1, N + 1), np.arange(1, N + 1), indexing="ij")
    level = np.ceil(np.log2(np.maximum(p, q))).astype(int)
    terms = _shell_term(p, q, N)
    S, sizes, lo, hi = [], [], [], []
    for k in range(K + 1):
        shell = terms[level == k]
        S.append(float(shell.sum()))
        sizes.append(int(shell.size))
        lo.append(float(shell.min()))
        hi.append(float(shell.max()))
    return PartitionSums(N, tuple(S), tuple(sizes), tuple(lo), tuple(hi))


def boundary_sum(N: int) -> float:
    """``sum_{q=1}^{N-1} (1 - cos(q pi / 2N))^-1``; grows like ``N^2``."""
    q = np.arange(1, N)
    return float(np.sum(1.0 / (1.0 - np.cos(q * np.pi / (2 * N)))))


def torus_eigenvalue_forms(N: int) -> dict:
    """Compare the simple torus Laplacian spectrum with its two trigonometric forms.

    ``expanded_error`` is the largest gap between the closed-form eigenvalue at
    ``(i, j)`` and ``(20 - 2(cos 4pi i/N + cos 4pi j/N) - 4(cos 2pi i/N + cos 2pi j/N)
    - 8 cos 2pi i/N cos 2pi j/N) / 25``. ``factored_constant`` is the ratio of the
    eigenvalue to ``(2ts + 3)(1 - ts)`` with ``t = cos(pi(i+j)/N)``,
    ``s = cos(pi(i-j)/N)``; its min and max are reported over ``(i, j) != (0, 0)``.
    """
    lam = block_circulant_eigenvalues(torus_laplacian_spec(TorusWalk.simple(), N)).reshape(N, N)
    i, j = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    ci, cj = np.cos(2 * np.pi * i / N), np.cos(2 * np.pi * j / N)
    expanded = (20 - 2 * (np.cos(4 * np.pi * i / N) + np.cos(4 * np.pi * j / N))
                - 4 * (ci + cj) - 8 * ci * cj) / 25
    ts = np.cos(np.pi * (i + j) / N) * np.cos(np.pi * (i - j) / N)
    factored = (2 * ts + 3) * (1 - ts)
    off = (i != 0) | (j != 0)
    ratio = lam[off] / factored[off]
    return {
        "N": N,
        "expanded_error": float(np.max(np.abs(lam - expanded))),
        "factored_constant_min": float(ratio.min()),
        "factored_constant_max": float(ratio.max()),
    }


# --------------------------------------------------------------------------
# Kronecker product chain
# --------------------------------------------------------------------------


def kronecker_bridge(P) -> dict:
    """Spectrum of ``I - P ⊗ P`` against ``{1 - b_i b_j}`` for symmetric ``P``.

    Returns the multiset gap for the full family and for the diagonal family
    ``{1 - b_i^2}`` against the spectrum of ``I - P P^T``.
    """
    P = np.asarray(P, dtype=float)
    n = P.shape[0]
    beta = sym_eigen(P).eigenvalues
    pair = np.sort(sym_eigen(np.eye(n * n) - kronecker(P, P)).eigenvalues)
    predicted = np.sort((1.0 - np.outer(beta, beta)).ravel())
    lap = laplacian(P).spectrum.eigenvalues
    diagonal = np.sort(1.0 - beta**2)
    return {
        "pair_gap": float(np.max(np.abs(pair - predicted))),
        "diagonal_gap": float(np.max(np.abs(np.sort(lap) - diagonal))),
    }


# --------------------------------------------------------------------------
# general regular graphs
# --------------------------------------------------------------------------


def derive_seed(seed: int, *key: int) -> int:
    """Deterministic 63-bit seed for a sub-experiment labelled by ``key``."""
    state = np.random.SeedSequence(seed, spawn_key=tuple(key)).generate_state(1, np.uint64)[0]
    return int(state) >> 1


@dataclass(frozen=True)
class Conjecture1Row:
    n: int
    d: int
    index: int
    graph_seed: int | None = None
    mc_seed: int | None = None
    spectral: float | None = None
    exact: float | None = None
    discrepancy: float | None = None
    mc_mean: float | None = None
    mc_half_width: float | None = None
    mc_stderr: float | None = None
    mc_covered: bool | None = None
    truncated: int | None = None
    error: str | None = None


def conjecture1_row(g: RegularGraph, trials: int, mc_seed: int, *, index: int = 0,
                    graph_seed: int | None = None, z: float = 3.9) -> Conjecture1Row:
    w = SimpleWalk()
    P = transition_matrix(g, w)
    spectral = spectral_meeting_time(laplacian(P)).value
    exact = absorbing_from_transition(P)[0].value
    mc = None
    if trials > 0:
        mc = simulate_meeting(g, w, McConfig(trials, mc_seed))
    return Conjecture1Row(
        n=g.n, d=g.d, index=index, graph_seed=graph_seed, mc_seed=mc_seed if mc else None,
        spectral=spectral, exact=exact, discrepancy=abs(spectral - exact) / exact,
        mc_mean=mc.mean if mc else None,
        mc_half_width=mc.half_width if mc else None,
        mc_stderr=mc.stderr if mc else None,
        mc_covered=mc.covers(exact, z) if mc else None,
        truncated=mc.truncated if mc else None,
    )


def conjecture1_experiment(n_list, d_list, graphs_per_cell: int, trials: int, seed: int,
                           z: float = 3.9) -> list[Conjecture1Row]:
    """Spectral value, exact value and simulation for random simple walks.

    One row per sampled graph, ordered by ``(n, d, index)``. Graph and
    simulation seeds are derived from ``seed`` and the row key, so any
    single row can be reproduced on its own.
    """
    rows = []
    for n in sorted(n_list):
        for d in sorted(d_list):
            for k in range(graphs_per_cell):
                graph_seed = derive_seed(seed, n, d, k, 0)
                mc_seed = derive_seed(seed, n, d, k, 1)
                try:
                    g = random_regular(n, d, graph_seed)
                except GraphError as exc:
                    rows.append(Conjecture1Row(n, d, k, graph_seed, error=str(exc)))
                    continue
                rows.append(conjecture1_row(g, trials, mc_seed, index=k,
                                            graph_seed=graph_seed, z=z))
    return rows


@dataclass
class Conjecture2Report:
    """Outcome of searching for an eigenvector basis with properties (a)-(e).

    ``basis`` holds the assembled vectors as columns, the all-ones vector
    last; ``eigenvalues`` are the adjacency eigenvalues they belong to.
    Property (d) is read as ``sum_i xi_i(j) = n`` for the last vertex and
    ``0`` elsewhere, which (b) and (e) force.
    """

    a: bool
    b: bool
    c: bool
    d: bool
    e: bool
    status: str
    basis: np.ndarray
    eigenvalues: np.ndarray
    column_sums: np.ndarray
    witness: dict = field(default_factory=dict)

    @property
    def properties(self) -> dict[str, bool]:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d, "e": self.e}


def _clusters(values: np.ndarray, tol: float) -> list[list[int]]:
    groups = [[0]]
    for k in range(1, len(values)):
        if values[k] - values[groups[-1][-1]] <= tol:
            groups[-1].append(k)
        else:
            groups.append([k])
    return groups


def conjecture2_check(g: RegularGraph, tol: float = 1e-8) -> Conjecture2Report:
    """Try to build the orthogonal adjacency eigenbasis described by (a)-(e).

    Every vector must have squared norm ``n`` and last entry 1, with the
    all-ones vector for eigenvalue ``d``. Simple eigenvalues admit only a
    sign choice. A 2-dimensional eigenspace with orthonormal basis ``W``
    admits a valid pair iff the last row ``w`` of ``W`` has ``|w|^2 = 2/n``;
    the pair is then ``W c`` for ``c`` at angles ``phi -+ pi/4`` from ``w``.
    Larger eigenspaces are left unsearched (status ``indeterminate``).
    """
    n, last = g.n, g.n - 1
    root_n = math.sqrt(n)
    spectrum = sym_eigen(g.adjacency_matrix())
    mu, V = spectrum.eigenvalues, spectrum.eigenvectors
    groups = _clusters(mu, tol * (1 + g.d))

    vectors: list[np.ndarray] = []
    values: list[float] = []
    failures: list[dict] = []
    blocked: list[dict] = []
    top = None
    weights = {}
    for idx in groups:
        value = float(mu[idx].mean())
        W = V[:, idx]
        w = W[last, :]
        weights[f"{value:.12g}"] = {"dimension": len(idx), "weight": float(w @ w),
                                    "required": len(idx) / n}
        if abs(value - g.d) <= tol * (1 + g.d) and len(idx) == 1:
            top = value
            continue
        if len(idx) == 1:
            v = W[:, 0]
            sign = 1.0 if v[last] >= 0 else -1.0
            xi = sign * root_n * v
            if abs(xi[last] - 1.0) > tol:
                failures.append({"property": "b", "eigenvalue": value, "dimension": 1,
                                 "last_entry": float(xi[last])})
            vectors.append(xi)
            values.append(value)
        elif len(idx) == 2:
            r2 = float(w @ w)
            phi = math.atan2(w[1], w[0])
            theta = phi - math.pi / 4
            c1 = np.array([math.cos(theta), math.sin(theta)])
            c2 = np.array([-math.sin(theta), math.cos(theta)])
            if abs(r2 - 2.0 / n) > tol:
                failures.append({"property": "b", "eigenvalue": value, "dimension": 2,
                                 "projection_sq": r2, "required": 2.0 / n})
            vectors.extend([root_n * W @ c1, root_n * W @ c2])
            values.extend([value, value])
        else:
            blocked.append({"eigenvalue": value, "dimension": len(idx)})
            vectors.extend(root_n * W[:, k] for k in range(len(idx)))
            values.extend([value] * len(idx))

    ones = np.ones(n)
    vectors.append(ones)
    values.append(float(g.d) if top is None else top)
    basis = np.column_stack(vectors)
    eigenvalues = np.array(values)

    A = g.adjacency_matrix()
    prop_a = top is not None and bool(np.allclose(A @ ones, g.d * ones, atol=tol))
    prop_b = bool(np.all(np.abs(basis[last, :] - 1.0) <= tol))
    prop_c = bool(np.all(np.abs(basis[:, :-1].sum(axis=0)) <= tol * n))
    column_sums = basis.sum(axis=1)
    target = np.zeros(n)
    target[last] = n
    prop_d = bool(np.all(np.abs(column_sums - target) <= tol * n))
    prop_e = bool(np.max(np.abs(basis.T @ basis - n * np.eye(n))) <= tol * n)

    if failures:
        status = "violated"
    elif blocked:
        status = "indeterminate"
    else:
        status = "satisfied" if all((prop_a, prop_b, prop_c, prop_d, prop_e)) else "violated"
    witness = {"failures": failures, "unsearched": blocked, "last_vertex_weights": weights}
    return Conjecture2Report(prop_a, prop_b, prop_c, prop_d, prop_e, status, basis,
                             eigenvalues, column_sums, witness)


def proposition1_pipeline(g: RegularGraph, report: Conjecture2Report) -> dict:
    """Run the Kronecker-basis argument on a concrete graph.

    With ``T`` the pair hitting times and ``b_i = (mu_i + 1)/(d + 1)``:

    * ``inner_residual``: max over ``(i, j) != (n, n)`` of
      ``|xi_i^T T xi_j + n^2 delta_ij / (1 - b_i b_j)|``;
    * ``delta_residual``: max of ``|xi_i^T Dt xi_j + n^2 delta_ij|``;
    * ``pair_system_residual``: how far the diagonal rows of
      ``(I - P ⊗ P) T`` are from ``-(n - 1)``; zero is what the argument needs;
    * ``basis_sum``: ``sum_{i != n} 1 / (1 - b_i^2)``, against the spectral
      and exact expectations.
    """
    n, d = g.n, g.d
    P = transition_matrix(g, SimpleWalk())
    T = pair_hitting_times(P)
    X = report.basis
    beta = (report.eigenvalues + 1.0) / (d + 1)
    lam = 1.0 - np.outer(beta, beta)
    inner = X.T @ T @ X
    delta = np.ones((n, n)) - n * np.eye(n)
    delta_inner = X.T @ delta @ X
    mask = np.ones((n, n), dtype=bool)
    mask[n - 1, n - 1] = False
    eye = np.eye(n)
    with np.errstate(divide="ignore", invalid="ignore"):
        expected = np.where(mask, -n * n * eye / np.where(mask, lam, 1.0), 0.0)
    inner_residual = float(np.max(np.abs(inner - expected)[mask]))
    delta_residual = float(np.max(np.abs(delta_inner + n * n * eye)[mask]))
    # diagonal rows of (I - P⊗P) vec(T): -(P T P^T)_kk
    pair_rows = -np.diag(P @ T @ P.T)
    basis_sum = float(np.sum(1.0 / (1.0 - beta[:-1] ** 2)))
    try:
        spectral = spectral_meeting_time(laplacian(P)).value
    except MeetingError:
        spectral = float("nan")
    return {
        "inner_residual": inner_residual,
        "delta_residual": delta_residual,
        "pair_system_residual": float(np.max(np.abs(pair_rows + (n - 1)))),
        "basis_sum": basis_sum,
        "spectral": spectral,
        "exact": float(T.mean()),
    }
