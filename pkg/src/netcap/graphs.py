"""Undirected simple graphs and their basic distance metrics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import DisconnectedGraphError, EdgeListParseError


class Graph:
    """Immutable undirected simple graph on dense node ids 0..n-1.

    Construction rejects self-loops, duplicate edges and out-of-range
    endpoints.  Derived views (adjacency lists, degree vector, CSR matrix,
    all-pairs hop distances) are built once and cached; instances are
    treated as read-only after construction, so sharing them across
    workers is safe.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 1:
            raise ValueError(f"need at least one node, got n={n}")
        seen = set()
        norm = []
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
            norm.append(e)
        norm.sort()
        self.n = n
        self.edges = tuple(norm)
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in norm:
            adj[u].append(v)
            adj[v].append(u)
        self.adj = [sorted(a) for a in adj]
        self.degrees = np.array([len(a) for a in self.adj], dtype=np.int64)
        self._csr = None
        self._hop = None

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise ValueError(f"node id {v} out of range for n={self.n}")
        return len(self.adj[v])

    def neighbors(self, v: int) -> list[int]:
        if not 0 <= v < self.n:
            raise ValueError(f"node id {v} out of range for n={self.n}")
        return self.adj[v]

    def csr(self) -> csr_matrix:
        """Unweighted CSR adjacency matrix (built on first use)."""
        if self._csr is None:
            if self.m:
                u = np.fromiter((e[0] for e in self.edges), dtype=np.int64, count=self.m)
                v = np.fromiter((e[1] for e in self.edges), dtype=np.int64, count=self.m)
                rows = np.concatenate([u, v])
                cols = np.concatenate([v, u])
                data = np.ones(2 * self.m, dtype=np.int8)
            else:
                rows = cols = np.zeros(0, dtype=np.int64)
                data = np.zeros(0, dtype=np.int8)
            self._csr = csr_matrix((data, (rows, cols)), shape=(self.n, self.n))
        return self._csr

    def hop_distances(self) -> np.ndarray:
        """All-pairs BFS distance matrix (int32). Requires connectivity."""
        if self._hop is None:
            d = shortest_path(self.csr(), method="D", unweighted=True)
            if not np.all(np.isfinite(d)):
                raise DisconnectedGraphError("graph is not connected")
            self._hop = d.astype(np.int32)
        return self._hop

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class GraphMetrics:
    """Diameter and average shortest path length (hop counts, ordered pairs)."""

    diameter: int
    avg_path_length: float


def is_connected(g: Graph) -> bool:
    """True iff every node is reachable from node 0."""
    if g.n == 1:
        return True
    ncomp, _ = connected_components(g.csr(), directed=False)
    return int(ncomp) == 1


def metrics(g: Graph) -> GraphMetrics:
    """Diameter and mean hop distance over ordered node pairs u != v."""
    if g.n < 2:
        raise ValueError("metrics need at least two nodes")
    if not is_connected(g):
        raise DisconnectedGraphError("graph is not connected")
    d = g.hop_distances()
    total = float(d.sum())  # diagonal contributes 0
    return GraphMetrics(
        diameter=int(d.max()),
        avg_path_length=total / (g.n * (g.n - 1)),
    )


def load_edge_list(text: str, n: int | None = None) -> Graph:
    """Parse "u v" lines into a Graph.

    Blank lines and '#' comments are ignored.  Node count defaults to
    max id + 1.  Malformed lines, self-loops and duplicate edges raise
    EdgeListParseError naming the offending line.
    """
    edges = []
    seen = set()
    max_id = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(f"line {lineno}: non-integer node id in {raw!r}") from None
        if u < 0 or v < 0:
            raise EdgeListParseError(f"line {lineno}: negative node id in {raw!r}")
        if u == v:
            raise EdgeListParseError(f"line {lineno}: self-loop {u}")
        e = (u, v) if u < v else (v, u)
        if e in seen:
            raise EdgeListParseError(f"line {lineno}: duplicate edge {e}")
        seen.add(e)
        edges.append(e)
        max_id = max(max_id, u, v)
    if n is None:
        if max_id < 0:
            raise EdgeListParseError("edge list is empty and no node count given")
        n = max_id + 1
    return Graph(n, edges)


def save_edge_list(g: Graph, header: Iterable[str] = ()) -> str:
    """Serialize a graph as sorted "u v" lines, optional '#' header lines."""
    lines = [f"# {h}" for h in header]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"
