"""Reward processes, the two task landscapes, transition costs and arm graphs.

Arms are 0-based everywhere in the library.  Files on disk (edge lists) use
1-based indices and are converted on read.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

# Canonical 10-point profiles along the varying grid axis.  Only the figure
# shapes are known for the task landscapes, so these vectors are a
# reconstruction that meets the stated constraints: mean 30, maximum 60,
# A concave with its peak at x = 6, B with local maxima at x = 1 and x = 10
# (global at 10).
PROFILE_A = np.array([0.0, 12.0, 24.0, 36.0, 48.0, 60.0, 48.0, 36.0, 24.0, 12.0])
PROFILE_B = np.array([44.0, 36.0, 26.0, 18.0, 13.0, 15.0, 18.0, 26.0, 44.0, 60.0])

GRID_SIDE = 10


class EnvError(ValueError):
    """Invalid environment, graph, or environment file."""


@dataclass(frozen=True)
class NoiseModel:
    """Additive reward noise: ``gaussian`` (scale = sd) or ``uniform_integer`` (scale = half width)."""

    kind: str = "gaussian"
    scale: float = 1.0

    def __post_init__(self):
        if self.kind == "gaussian":
            if not self.scale > 0:
                raise EnvError(f"gaussian noise sd must be > 0, got {self.scale}")
        elif self.kind == "uniform_integer":
            if self.scale < 0 or int(self.scale) != self.scale:
                raise EnvError(f"uniform_integer half width must be an integer >= 0, got {self.scale}")
        else:
            raise EnvError(f"unknown noise kind {self.kind!r}")

    @classmethod
    def gaussian(cls, sd: float) -> "NoiseModel":
        return cls("gaussian", float(sd))

    @classmethod
    def uniform_integer(cls, half_width: int) -> "NoiseModel":
        return cls("uniform_integer", int(half_width))

    @property
    def variance(self) -> float:
        if self.kind == "gaussian":
            return self.scale**2
        h = int(self.scale)
        return ((2 * h + 1) ** 2 - 1) / 12.0

    def draw(self, rng: np.random.Generator, size=None):
        """Noise values; one generator draw per value."""
        if self.kind == "gaussian":
            return self.scale * rng.standard_normal(size)
        h = int(self.scale)
        out = rng.integers(-h, h + 1, size=size)
        return out.astype(float) if size is not None else float(out)


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph on nodes ``0..n-1`` stored as sorted adjacency tuples."""

    adjacency: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.adjacency)

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self.adjacency[i]

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.adjacency[i]

    def edges(self):
        return [(i, j) for i, nb in enumerate(self.adjacency) for j in nb if i < j]

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        adj = [set() for _ in range(n)]
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise EnvError(f"edge ({i}, {j}) outside node range 0..{n - 1}")
            if i == j:
                continue
            adj[i].add(j)
            adj[j].add(i)
        return cls(tuple(tuple(sorted(s)) for s in adj))


def line_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def grid_graph(rows: int, cols: int) -> Graph:
    """4-neighbour grid; node index = row * cols + col."""
    edges = []
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            if c + 1 < cols:
                edges.append((i, i + 1))
            if r + 1 < rows:
                edges.append((i, i + cols))
    return Graph.from_edges(rows * cols, edges)


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def read_edge_list(path, n: int) -> Graph:
    """Read ``i j`` pairs (1-based, whitespace separated, ``#`` comments)."""
    edges = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EnvError(f"{path}:{lineno}: expected 'i j', got {line!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise EnvError(f"{path}:{lineno}: non-integer node in {line!r}") from None
        edges.append((i - 1, j - 1))
    return Graph.from_edges(n, edges)


def read_means(path) -> np.ndarray:
    """One real per line; blank lines and ``#`` comments skipped."""
    vals = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            vals.append(float(line))
        except ValueError:
            raise EnvError(f"{path}:{lineno}: not a number: {line!r}") from None
    if not vals:
        raise EnvError(f"{path}: no means found")
    return np.array(vals)


def bfs_distances(graph: Graph, source: int) -> np.ndarray:
    dist = np.full(graph.n, -1, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in graph.adjacency[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def is_connected(graph: Graph) -> bool:
    return graph.n == 0 or bool(np.all(bfs_distances(graph, 0) >= 0))


def _check_connected(graph: Graph) -> None:
    if graph.n == 0:
        return
    dist = bfs_distances(graph, 0)
    if np.any(dist < 0):
        j = int(np.argmax(dist < 0))
        raise EnvError(f"graph is disconnected: arm {j + 1} unreachable from arm 1")


@dataclass(frozen=True, eq=False)
class ShortestPathTable:
    """Intermediary nodes of a hop-shortest path for every ordered pair.

    ``paths[i][j]`` excludes both endpoints; ties go to the lexicographically
    smallest node sequence.
    """

    paths: tuple[tuple[tuple[int, ...], ...], ...]
    hops: np.ndarray

    def intermediaries(self, i: int, j: int) -> tuple[int, ...]:
        return self.paths[i][j]

    def length(self, i: int, j: int) -> int:
        return len(self.paths[i][j])

    def flat(self):
        """(offsets, nodes) arrays; pair (i, j) occupies nodes[offsets[i*n+j]:offsets[i*n+j+1]]."""
        n = len(self.paths)
        offsets = np.zeros(n * n + 1, dtype=np.int64)
        nodes = []
        for i in range(n):
            for j in range(n):
                p = self.paths[i][j]
                nodes.extend(p)
                offsets[i * n + j + 1] = offsets[i * n + j] + len(p)
        return offsets, np.asarray(nodes, dtype=np.int64)


def shortest_paths(graph: Graph) -> ShortestPathTable:
    n = graph.n
    dist = np.stack([bfs_distances(graph, s) for s in range(n)]) if n else np.zeros((0, 0), int)
    if n and np.any(dist < 0):
        i, j = map(int, np.argwhere(dist < 0)[0])
        raise EnvError(f"graph is disconnected: arm {j + 1} unreachable from arm {i + 1}")
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            walk = []
            u = i
            # smallest neighbour one hop closer to j gives the lexicographic minimum
            while dist[u, j] > 1:
                u = next(v for v in graph.adjacency[u] if dist[v, j] == dist[u, j] - 1)
                walk.append(u)
            row.append(tuple(walk))
        rows.append(tuple(row))
    return ShortestPathTable(tuple(rows), dist)


def distance_costs(positions, metric: str = "euclidean") -> np.ndarray:
    """c_ij = distance between arm locations; zero diagonal, symmetric."""
    pos = np.asarray(positions, dtype=float)
    if pos.ndim == 1:
        pos = pos[:, None]
    diff = pos[:, None, :] - pos[None, :, :]
    if metric == "euclidean":
        return np.sqrt(np.sum(diff**2, axis=-1))
    if metric == "manhattan":
        return np.sum(np.abs(diff), axis=-1)
    raise EnvError(f"unknown distance metric {metric!r}")


@dataclass(frozen=True, eq=False)
class Environment:
    means: np.ndarray
    noise: NoiseModel = field(default_factory=NoiseModel)
    positions: np.ndarray | None = None
    costs: np.ndarray | None = None
    graph: Graph | None = None

    def __post_init__(self):
        means = np.array(self.means, dtype=float).ravel()
        means.setflags(write=False)
        object.__setattr__(self, "means", means)
        n = means.size
        if n < 1:
            raise EnvError("environment needs at least one arm")
        if not np.all(np.isfinite(means)):
            raise EnvError("means must be finite")
        if self.positions is not None:
            pos = np.array(self.positions, dtype=float)
            if pos.shape[0] != n:
                raise EnvError(f"{pos.shape[0]} positions for {n} arms")
            pos.setflags(write=False)
            object.__setattr__(self, "positions", pos)
        if self.costs is not None:
            c = np.array(self.costs, dtype=float)
            if c.shape != (n, n):
                raise EnvError(f"cost matrix shape {c.shape}, expected {(n, n)}")
            if np.any(c < 0) or np.any(np.diag(c) != 0):
                raise EnvError("costs must be nonnegative with zero diagonal")
            c.setflags(write=False)
            object.__setattr__(self, "costs", c)
        if self.graph is not None:
            if self.graph.n != n:
                raise EnvError(f"graph has {self.graph.n} nodes for {n} arms")
            _check_connected(self.graph)

    @property
    def n_arms(self) -> int:
        return self.means.size

    @property
    def best_arm(self) -> int:
        return int(np.argmax(self.means))

    @property
    def best_mean(self) -> float:
        return float(self.means.max())

    @property
    def gaps(self) -> np.ndarray:
        return self.best_mean - self.means


def sample_reward(env: Environment, arm: int, rng: np.random.Generator) -> float:
    if not 0 <= arm < env.n_arms:
        raise IndexError(f"arm {arm} out of range for {env.n_arms} arms")
    return float(env.means[arm] + env.noise.draw(rng))


def landscape_profile(which: str) -> np.ndarray:
    w = which.upper()
    if w == "A":
        return PROFILE_A.copy()
    if w == "B":
        return PROFILE_B.copy()
    raise EnvError(f"unknown landscape {which!r}; expected 'A' or 'B'")


def landscape(
    which: str,
    shape: str = "grid10x10",
    noise: NoiseModel | None = None,
    costs: str | None = None,
) -> Environment:
    """Task landscape A or B on the 10x10 grid or as the bare 10-arm profile.

    On the grid, arm ``i`` sits at ``x = i % 10 + 1``, ``y = i // 10 + 1`` and
    its mean depends on ``x`` only.  ``costs`` may be ``"euclidean"`` or
    ``"manhattan"`` to attach distance costs.
    """
    profile = landscape_profile(which)
    noise = noise or NoiseModel()
    if shape == "profile10":
        positions = np.arange(1, GRID_SIDE + 1, dtype=float)[:, None]
        means = profile
    elif shape == "grid10x10":
        idx = np.arange(GRID_SIDE * GRID_SIDE)
        xs = idx % GRID_SIDE + 1
        ys = idx // GRID_SIDE + 1
        positions = np.column_stack([xs, ys]).astype(float)
        means = profile[xs - 1]
    else:
        raise EnvError(f"unknown landscape shape {shape!r}")
    cost = distance_costs(positions, costs) if costs else None
    return Environment(means=means, noise=noise, positions=positions, costs=cost)


def expected_max_costs(costs: np.ndarray) -> np.ndarray:
    """c_bar_i^max = max_j E[c_ij]; costs here are deterministic."""
    return np.asarray(costs, dtype=float).max(axis=1)
