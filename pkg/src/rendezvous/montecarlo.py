"""Seeded simulation of two independent walkers until they share a vertex.

Trial ``t`` of a run with seed ``s`` draws from its own generator seeded by
``SeedSequence(s, spawn_key=(t,))``, so a trial's outcome does not depend on
which other trials ran or in what order.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .graphs import RegularGraph
from .walks import WalkSpec, transition_matrix

__all__ = [
    "McConfig",
    "McResult",
    "StepTable",
    "step_table",
    "trial_rng",
    "run_trial",
    "simulate_meeting",
    "meeting_time_histogram",
]

DEFAULT_MAX_STEPS = 10**7
_CHUNK = 256


@dataclass(frozen=True)
class McConfig:
    trials: int
    seed: int
    max_steps: int = DEFAULT_MAX_STEPS
    record: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")


@dataclass(frozen=True)
class McResult:
    mean: float
    stddev: float
    half_width: float
    trials: int
    truncated: int
    taus: np.ndarray | None = None

    @property
    def stderr(self) -> float:
        return self.stddev / math.sqrt(self.trials)

    def covers(self, value: float, z: float = 1.96) -> bool:
        return abs(self.mean - value) <= z * self.stderr


@dataclass(frozen=True)
class StepTable:
    """Per-vertex move targets with cumulative probabilities."""

    targets: tuple[tuple[int, ...], ...]
    cumulative: tuple[tuple[float, ...], ...]

    def step(self, v: int, u: float) -> int:
        cum = self.cumulative[v]
        k = bisect_right(cum, u)
        return self.targets[v][min(k, len(cum) - 1)]


def step_table(g: RegularGraph, w: WalkSpec) -> StepTable:
    P = transition_matrix(g, w)
    targets, cumulative = [], []
    for row in P:
        nz = np.flatnonzero(row)
        targets.append(tuple(int(j) for j in nz))
        cumulative.append(tuple(np.cumsum(row[nz]).tolist()))
    return StepTable(tuple(targets), tuple(cumulative))


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def run_trial(table: StepTable, n: int, rng: np.random.Generator, max_steps: int,
              trace: list | None = None) -> tuple[int, bool]:
    """One trial; returns ``(tau, truncated)``.

    If ``trace`` is a list, the pair of positions is appended after the
    initial draw and after every step.
    """
    a, b = (int(x) for x in rng.integers(0, n, size=2))
    if trace is not None:
        trace.append((a, b))
    if a == b:
        return 0, False
    step = table.step
    t = 0
    while t < max_steps:
        draws = rng.random(2 * min(_CHUNK, max_steps - t)).tolist()
        for k in range(0, len(draws), 2):
            a = step(a, draws[k])
            b = step(b, draws[k + 1])
            t += 1
            if trace is not None:
                trace.append((a, b))
            # co-location is only checked after both walkers have moved
            if a == b:
                return t, False
    return max_steps, True


def _run(g: RegularGraph, w: WalkSpec, cfg: McConfig) -> tuple[np.ndarray, int]:
    table = step_table(g, w)
    taus = np.empty(cfg.trials, dtype=np.int64)
    truncated = 0
    for t in range(cfg.trials):
        tau, cut = run_trial(table, g.n, trial_rng(cfg.seed, t), cfg.max_steps)
        taus[t] = tau
        truncated += cut
    return taus, truncated


def simulate_meeting(g: RegularGraph, w: WalkSpec, cfg: McConfig) -> McResult:
    """Monte Carlo estimate of ``E[tau]`` with a 95% normal half-width.

    Truncated trials enter the statistics at ``max_steps`` and are counted
    in ``truncated``.
    """
    taus, truncated = _run(g, w, cfg)
    mean = float(taus.mean())
    stddev = float(taus.std(ddof=1)) if cfg.trials > 1 else 0.0
    half_width = 1.96 * stddev / math.sqrt(cfg.trials)
    return McResult(mean, stddev, half_width, cfg.trials, truncated,
                    taus if cfg.record else None)


def meeting_time_histogram(g: RegularGraph, w: WalkSpec, cfg: McConfig) -> dict[int, int]:
    taus, _ = _run(g, w, cfg)
    return dict(sorted(Counter(taus.tolist()).items()))
