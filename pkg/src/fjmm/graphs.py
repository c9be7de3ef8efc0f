"""Influence-network construction and reachability queries.

Graphs carry 1-based node labels (matching the edge-list file format); the
dense matrices derived from them are plain numpy arrays whose row/column
``i`` corresponds to node ``i + 1``.

Conventions baked into the generators:
  - no self-loops,
  - undirected graphs are stored as symmetric sets of ordered pairs,
  - influence weights are uniform over neighbors unless the graph carries
    explicit edge weights (e.g. read from a weighted edge list).

Random generators use ``numpy.random.default_rng`` (PCG64); a fixed seed
reproduces the graph bit for bit.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional

import numpy as np

from .errors import (
    GenerationFailureError,
    InvalidParameterError,
    MatrixValidationError,
    NormalizationError,
)

ROW_SUM_TOL = 1e-12
MAX_RESAMPLE_ATTEMPTS = 1000
RNG_ALGORITHM = "numpy.random.default_rng (PCG64)"


@dataclass(frozen=True)
class InfluenceGraph:
    """A directed influence graph on nodes 1..n.

    An edge (i, j) means "i is influenced by j" (i places weight on j's
    opinion). Undirected graphs store both orientations of every edge.
    ``weights``, when present, maps edges to positive influence weights
    used instead of uniform neighbor weighting.
    """

    n: int
    edges: frozenset = field(default_factory=frozenset)
    directed: bool = False
    weights: Optional[Mapping] = None

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParameterError(f"node count must be >= 1, got {self.n}")
        for i, j in self.edges:
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise InvalidParameterError(f"edge ({i}, {j}) outside 1..{self.n}")
        if not self.directed:
            for i, j in self.edges:
                if (j, i) not in self.edges:
                    raise InvalidParameterError(
                        f"undirected graph is missing the reverse of ({i}, {j})"
                    )
        if self.weights is not None:
            for (i, j), w in self.weights.items():
                if (i, j) not in self.edges:
                    raise InvalidParameterError(f"weight given for missing edge ({i}, {j})")
                if not (w > 0):
                    raise InvalidParameterError(f"edge ({i}, {j}) has non-positive weight {w}")

    def neighbors(self, i: int) -> list:
        """Nodes that influence node i, in ascending order."""
        return sorted(j for (a, j) in self.edges if a == i)

    @property
    def edge_count(self) -> int:
        """Number of stored ordered pairs (undirected edges count twice)."""
        return len(self.edges)


def _undirected(n: int, pairs: Iterable) -> InfluenceGraph:
    sym = set()
    for i, j in pairs:
        sym.add((i, j))
        sym.add((j, i))
    return InfluenceGraph(n=n, edges=frozenset(sym), directed=False)


def barbell(k: int) -> InfluenceGraph:
    """Two complete graphs on k nodes joined by the single edge {k, k+1}.

    Nodes 1..k form one clique, k+1..2k the other.
    """
    if k < 3:
        raise InvalidParameterError(f"barbell requires k >= 3, got {k}")
    pairs = []
    for base in (0, k):
        for i in range(1, k + 1):
            for j in range(i + 1, k + 1):
                pairs.append((base + i, base + j))
    pairs.append((k, k + 1))
    return _undirected(2 * k, pairs)


def cycle(n: int) -> InfluenceGraph:
    """Undirected cycle on n >= 3 nodes."""
    if n < 3:
        raise InvalidParameterError(f"cycle requires n >= 3, got {n}")
    return _undirected(n, [(i, i % n + 1) for i in range(1, n + 1)])


def complete(n: int) -> InfluenceGraph:
    """Complete graph on n >= 2 nodes (no self-loops)."""
    if n < 2:
        raise InvalidParameterError(f"complete requires n >= 2, got {n}")
    return _undirected(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def erdos_renyi(n: int, p: float, seed: int) -> InfluenceGraph:
    """Undirected G(n, p) with no isolated nodes.

    Whole-graph resampling (never self-loop patching) keeps the uniform
    neighbor-weight convention intact; after MAX_RESAMPLE_ATTEMPTS draws
    that all contain an isolated node a GenerationFailureError is raised.
    """
    if n < 2:
        raise InvalidParameterError(f"erdos_renyi requires n >= 2, got {n}")
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"edge probability must be in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    for _ in range(MAX_RESAMPLE_ATTEMPTS):
        mask = rng.random(iu.size) < p
        degree = np.zeros(n, dtype=int)
        np.add.at(degree, iu[mask], 1)
        np.add.at(degree, ju[mask], 1)
        if np.all(degree > 0):
            pairs = zip((iu[mask] + 1).tolist(), (ju[mask] + 1).tolist())
            return _undirected(n, pairs)
    raise GenerationFailureError(
        f"no isolated-node-free G({n}, {p}) sample in {MAX_RESAMPLE_ATTEMPTS} attempts"
    )


def watts_strogatz(n: int, k: int, p_rewire: float, seed: int) -> InfluenceGraph:
    """Ring lattice with k neighbors per node, then random rewiring.

    Each forward ring edge (i, i+j) is rewired with probability p_rewire
    to a uniformly chosen non-adjacent target, keeping i as the near
    endpoint, so no node can lose all its edges.
    """
    if k % 2 != 0:
        raise InvalidParameterError(f"watts_strogatz requires even k, got {k}")
    if not 2 <= k < n:
        raise InvalidParameterError(f"watts_strogatz requires 2 <= k < n, got k={k}, n={n}")
    if not 0.0 <= p_rewire <= 1.0:
        raise InvalidParameterError(f"rewiring probability must be in [0, 1], got {p_rewire}")
    rng = np.random.default_rng(seed)
    adj = {i: set() for i in range(n)}
    for i in range(n):
        for off in range(1, k // 2 + 1):
            j = (i + off) % n
            adj[i].add(j)
            adj[j].add(i)
    for off in range(1, k // 2 + 1):
        for i in range(n):
            j = (i + off) % n
            if rng.random() >= p_rewire:
                continue
            if len(adj[i]) >= n - 1:
                continue  # i is adjacent to everyone; nothing to rewire to
            w = int(rng.integers(n))
            while w == i or w in adj[i]:
                w = int(rng.integers(n))
            adj[i].discard(j)
            adj[j].discard(i)
            adj[i].add(w)
            adj[w].add(i)
    pairs = [(i + 1, j + 1) for i in range(n) for j in adj[i] if i < j]
    return _undirected(n, pairs)


def row_stochastic(g: InfluenceGraph) -> np.ndarray:
    """Influence matrix W with w_ij = 1/deg(i) over i's neighbors.

    If the graph carries explicit edge weights, rows are normalized by
    their weight sums instead. A node with no neighbors cannot be
    normalized and raises NormalizationError naming it.
    """
    W = np.zeros((g.n, g.n))
    for i, j in g.edges:
        W[i - 1, j - 1] = 1.0 if g.weights is None else g.weights[(i, j)]
    sums = W.sum(axis=1)
    for i, s in enumerate(sums):
        if s <= 0:
            raise NormalizationError(f"node {i + 1} has no neighbors; row cannot be normalized")
    return W / sums[:, None]


def assert_stochastic(W: np.ndarray, tol: float = ROW_SUM_TOL) -> np.ndarray:
    """Validate that W is square, nonnegative and row-stochastic within tol."""
    W = np.asarray(W, dtype=float)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise MatrixValidationError(f"expected a square matrix, got shape {W.shape}")
    if not np.all(np.isfinite(W)):
        raise MatrixValidationError("matrix contains non-finite entries")
    if np.any(W < 0):
        i, j = np.argwhere(W < 0)[0]
        raise MatrixValidationError(f"negative entry at ({i + 1}, {j + 1})")
    dev = np.abs(W.sum(axis=1) - 1.0)
    if np.any(dev > tol):
        i = int(np.argmax(dev))
        raise MatrixValidationError(f"row {i + 1} sums to {W[i].sum()!r} (deviation {dev[i]:.3e})")
    return W


def binary_adjacency(W: np.ndarray) -> np.ndarray:
    """Exact 0/1 indicator of the positive entries of W."""
    W = np.asarray(W, dtype=float)
    return (W > 0).astype(np.int64)


def reaches_set(M: np.ndarray, targets: Iterable) -> set:
    """All nodes with a directed walk into ``targets`` in the graph of M.

    M is any nonnegative matrix; its graph has an edge i -> j exactly when
    M[i-1, j-1] > 0. Targets are 1-based and are themselves included
    (zero-length walks). Implemented as breadth-first search along
    reversed edges; an empty target set yields an empty result.
    """
    M = np.asarray(M)
    n = M.shape[0]
    targets = set(int(t) for t in targets)
    for t in targets:
        if not 1 <= t <= n:
            raise InvalidParameterError(f"target node {t} outside 1..{n}")
    # reverse adjacency: predecessors[j] = nodes i with an edge i -> j
    positive = M > 0
    seen = set(targets)
    queue = deque(targets)
    while queue:
        j = queue.popleft()
        for i in np.nonzero(positive[:, j - 1])[0]:
            node = int(i) + 1
            if node not in seen:
                seen.add(node)
                queue.append(node)
    return seen


def globally_reachable(M: np.ndarray, targets: Iterable) -> bool:
    """True when ``targets`` is non-empty and every node has a walk into it."""
    targets = set(targets)
    if not targets:
        return False
    return len(reaches_set(M, targets)) == np.asarray(M).shape[0]


def write_edge_list(g: InfluenceGraph, path) -> None:
    """Write ``i j [weight]`` lines (1-indexed); undirected edges once each."""
    lines = [f"# directed={int(g.directed)} n={g.n}"]
    for i, j in sorted(g.edges):
        if not g.directed and i > j:
            continue
        if g.weights is not None:
            lines.append(f"{i} {j} {g.weights[(i, j)]!r}")
        else:
            lines.append(f"{i} {j}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_edge_list(path, directed: bool = False, n: Optional[int] = None) -> InfluenceGraph:
    """Parse an edge-list file: one ``i j [weight]`` per line, ``#`` comments.

    The first comment line may carry ``directed=0|1 n=<count>`` metadata as
    written by write_edge_list; explicit arguments override it. Node count
    defaults to the largest endpoint seen.
    """
    pairs = []
    weights = {}
    text = Path(path).read_text(encoding="utf-8")
    meta_directed = None
    meta_n = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip() if not raw.lstrip().startswith("#") else ""
        if raw.lstrip().startswith("#"):
            for token in raw.lstrip("# \t").split():
                if token.startswith("directed="):
                    meta_directed = bool(int(token.split("=", 1)[1]))
                elif token.startswith("n="):
                    meta_n = int(token.split("=", 1)[1])
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise InvalidParameterError(f"{path}:{lineno}: expected 'i j [weight]', got {raw!r}")
        i, j = int(parts[0]), int(parts[1])
        pairs.append((i, j))
        if len(parts) == 3:
            weights[(i, j)] = float(parts[2])
    if meta_directed is not None:
        directed = meta_directed
    count = n if n is not None else meta_n
    if count is None:
        count = max((max(i, j) for i, j in pairs), default=0)
    if directed:
        edges = frozenset(pairs)
    else:
        edges = frozenset(pairs) | frozenset((j, i) for i, j in pairs)
        for (i, j), w in list(weights.items()):
            weights.setdefault((j, i), w)
    return InfluenceGraph(n=count, edges=edges, directed=directed, weights=weights or None)


def write_matrix_csv(M: np.ndarray, path) -> None:
    """Dense CSV, one matrix row per line, full float precision."""
    M = np.asarray(M, dtype=float)
    lines = [",".join(repr(v) for v in row) for row in M.tolist()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_matrix_csv(path) -> np.ndarray:
    """Inverse of write_matrix_csv."""
    rows = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line:
            rows.append([float(v) for v in line.split(",")])
    M = np.asarray(rows, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise MatrixValidationError(f"{path}: expected a square matrix, got shape {M.shape}")
    return M
