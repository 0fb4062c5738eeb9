"""Regular graph families: circle, torus, complete and random d-regular graphs.

Vertices are 0-based everywhere. A torus vertex ``(x, y)`` on an ``N x N``
grid has index ``x * N + y``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

__all__ = [
    "GraphError",
    "GraphFormatError",
    "GraphGenerationError",
    "RegularGraph",
    "TorusCoord",
    "build_circle",
    "build_torus",
    "build_complete",
    "random_regular",
    "read_graph",
    "write_graph",
    "MAX_GENERATION_ATTEMPTS",
]

MAX_GENERATION_ATTEMPTS = 10_000


class GraphError(ValueError):
    """Invalid graph parameters or structure."""


class GraphFormatError(GraphError):
    """Malformed edge-list text. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GraphGenerationError(GraphError):
    """Random generation gave up after the retry cap."""


@dataclass(frozen=True)
class RegularGraph:
    """Undirected simple d-regular graph.

    ``adjacency[v]`` is the sorted tuple of the ``d`` neighbours of ``v``.
    ``family`` and ``side`` record how the graph was built ("circle",
    "torus", "complete" or "general") and do not take part in equality.
    """

    n: int
    d: int
    adjacency: tuple[tuple[int, ...], ...]
    family: str = field(default="general", compare=False)
    side: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise GraphError(f"vertex count must be positive, got {self.n}")
        if self.d < 1:
            raise GraphError(f"degree must be positive, got {self.d}")
        if (self.n * self.d) % 2:
            raise GraphError(f"n*d must be even (n={self.n}, d={self.d})")
        if len(self.adjacency) != self.n:
            raise GraphError("adjacency must list every vertex")
        for v, nbrs in enumerate(self.adjacency):
            if len(nbrs) != self.d:
                raise GraphError(f"vertex {v} has degree {len(nbrs)}, expected {self.d}")
            if len(set(nbrs)) != len(nbrs):
                raise GraphError(f"vertex {v} has duplicate neighbours")
            if v in nbrs:
                raise GraphError(f"vertex {v} has a self-loop")
            if list(nbrs) != sorted(nbrs):
                raise GraphError(f"neighbours of vertex {v} are not sorted")
            for u in nbrs:
                if not 0 <= u < self.n:
                    raise GraphError(f"vertex {v} lists out-of-range neighbour {u}")
                if v not in self.adjacency[u]:
                    raise GraphError(f"edge {v}-{u} is not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges, *, family: str = "general", side: int | None = None):
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if v in nbrs[u]:
                raise GraphError(f"duplicate edge {u}-{v}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        degrees = {len(s) for s in nbrs}
        if len(degrees) != 1:
            raise GraphError(f"graph is not regular: degrees {sorted(degrees)}")
        adjacency = tuple(tuple(sorted(s)) for s in nbrs)
        return cls(n, degrees.pop(), adjacency, family=family, side=side)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, lexicographically sorted."""
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def adjacency_matrix(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for u, nbrs in enumerate(self.adjacency):
            A[u, list(nbrs)] = 1.0
        return A

    def degree_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for nbrs in self.adjacency:
            hist[len(nbrs)] = hist.get(len(nbrs), 0) + 1
        return hist

    def is_connected(self) -> bool:
        seen = [False] * self.n
        seen[0] = True
        queue = deque([0])
        count = 1
        while queue:
            v = queue.popleft()
            for u in self.adjacency[v]:
                if not seen[u]:
                    seen[u] = True
                    count += 1
                    queue.append(u)
        return count == self.n

    def describe(self) -> str:
        if self.family in ("circle", "torus"):
            return f"{self.family}(N={self.side})"
        return f"{self.family}(n={self.n},d={self.d})"


class TorusCoord(NamedTuple):
    x: int
    y: int

    def index(self, N: int) -> int:
        if not (0 <= self.x < N and 0 <= self.y < N):
            raise GraphError(f"coordinate {tuple(self)} outside {N}x{N} torus")
        return self.x * N + self.y

    @classmethod
    def from_index(cls, index: int, N: int) -> "TorusCoord":
        if not 0 <= index < N * N:
            raise GraphError(f"index {index} outside {N}x{N} torus")
        return cls(*divmod(index, N))


def build_circle(N: int) -> RegularGraph:
    """Cycle on ``N >= 3`` vertices; ``i`` is adjacent to ``i - 1`` and ``i + 1`` mod ``N``."""
    if N < 3:
        raise GraphError(f"circle needs N >= 3, got {N}")
    adjacency = tuple(tuple(sorted(((i - 1) % N, (i + 1) % N))) for i in range(N))
    return RegularGraph(N, 2, adjacency, family="circle", side=N)


def build_torus(N: int) -> RegularGraph:
    """``N x N`` torus with the four axis neighbours of each cell."""
    if N < 3:
        raise GraphError(f"torus needs N >= 3, got {N}")
    adjacency = []
    for x in range(N):
        for y in range(N):
            nbrs = {
                ((x - 1) % N) * N + y,
                ((x + 1) % N) * N + y,
                x * N + (y - 1) % N,
                x * N + (y + 1) % N,
            }
            adjacency.append(tuple(sorted(nbrs)))
    return RegularGraph(N * N, 4, tuple(adjacency), family="torus", side=N)


def build_complete(n: int) -> RegularGraph:
    if n < 2:
        raise GraphError(f"complete graph needs n >= 2, got {n}")
    adjacency = tuple(tuple(u for u in range(n) if u != v) for v in range(n))
    return RegularGraph(n, n - 1, adjacency, family="complete")


def random_regular(n: int, d: int, seed: int | None = None,
                   max_attempts: int = MAX_GENERATION_ATTEMPTS) -> RegularGraph:
    """Connected simple d-regular graph from the configuration model.

    All ``n * d`` stubs are shuffled into a perfect matching; the whole
    matching is rejected and redrawn whenever it contains a self-loop, a
    repeated edge, or leaves the graph disconnected.
    """
    if n < 2 or d < 1:
        raise GraphError(f"need n >= 2 and d >= 1, got n={n}, d={d}")
    if (n * d) % 2:
        raise GraphError(f"n*d must be even for a d-regular graph (n={n}, d={d})")
    if d >= n:
        raise GraphError(f"degree must be below vertex count (n={n}, d={d})")
    if d == 1 and n != 2:
        raise GraphError(f"no connected 1-regular graph on {n} vertices")

    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    for _ in range(max_attempts):
        rng.shuffle(stubs)
        pairs = stubs.reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        lo = np.minimum(pairs[:, 0], pairs[:, 1])
        hi = np.maximum(pairs[:, 0], pairs[:, 1])
        keys = lo * n + hi
        if len(np.unique(keys)) != len(keys):
            continue
        g = RegularGraph.from_edges(n, zip(lo.tolist(), hi.tolist()))
        if g.is_connected():
            return g
    raise GraphGenerationError(
        f"no connected simple {d}-regular graph on {n} vertices after {max_attempts} attempts"
    )


def read_graph(text: str) -> RegularGraph:
    """Parse the ``n d`` header + one ``u v`` edge per line format."""
    lines = text.replace("\r\n", "\n").split("\n")
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise GraphFormatError("empty graph file", 1)

    def ints(lineno: int) -> tuple[int, int]:
        parts = lines[lineno - 1].split()
        if len(parts) != 2:
            raise GraphFormatError(f"expected two integers, got {lines[lineno - 1]!r}", lineno)
        try:
            return int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"non-integer field in {lines[lineno - 1]!r}", lineno) from None

    n, d = ints(1)
    if n < 1 or d < 1:
        raise GraphFormatError(f"header needs positive n and d, got {n} {d}", 1)
    if (n * d) % 2:
        raise GraphFormatError(f"n*d must be even (n={n}, d={d})", 1)

    nbrs: list[set[int]] = [set() for _ in range(n)]
    for lineno in range(2, len(lines) + 1):
        u, v = ints(lineno)
        for w in (u, v):
            if not 0 <= w < n:
                raise GraphFormatError(f"vertex {w} out of range [0, {n})", lineno)
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno)
        if v in nbrs[u]:
            raise GraphFormatError(f"duplicate edge {u}-{v}", lineno)
        nbrs[u].add(v)
        nbrs[v].add(u)
        if len(nbrs[u]) > d or len(nbrs[v]) > d:
            bad = u if len(nbrs[u]) > d else v
            raise GraphFormatError(f"vertex {bad} exceeds degree {d}", lineno)

    edge_count = len(lines) - 1
    if edge_count != n * d // 2:
        raise GraphFormatError(f"expected {n * d // 2} edges, found {edge_count}")
    for v, s in enumerate(nbrs):
        if len(s) != d:
            raise GraphFormatError(f"vertex {v} has degree {len(s)}, expected {d}")
    return RegularGraph(n, d, tuple(tuple(sorted(s)) for s in nbrs))


def write_graph(g: RegularGraph) -> str:
    out = [f"{g.n} {g.d}"]
    out.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(out) + "\n"
