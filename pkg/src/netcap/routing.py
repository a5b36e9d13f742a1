"""Candidate-path systems for the two topology-based routing algorithms.

Both algorithms are cost-to-go systems toward each destination t: a
packet at v may be forwarded to any neighbour w with

    cost(w, t) + stepcost(v) == cost(v, t),

where stepcost(v) is 1 for shortest-path routing ("spr") and degree(v)
for the degree-sum efficient routing ("efr").  An efr path v0..vk is
charged the degrees of all its nodes except the destination, so its
cost-to-go satisfies cost(v, t) = min_w cost(w, t) + degree(v) with
cost(t, t) = 0.  The candidate paths between a pair are exactly the
minimum-cost paths, and every node's effective betweenness is the
expected number of times it appears on a uniformly chosen candidate
path, summed over all ordered pairs (endpoints included, so a node
of degree one still scores 2(n-1)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .errors import DisconnectedGraphError
from .graphs import Graph, is_connected

SPR = "spr"
EFR = "efr"
ALGORITHMS = (SPR, EFR)


@dataclass(frozen=True)
class BetweennessProfile:
    """Per-node effective betweenness plus the derived path-length average.

    ``gamma_avg_len`` is the expected hop count of a uniformly chosen
    candidate path, averaged over ordered pairs.  It is accumulated
    directly from the candidate DAGs, independently of ``b``, so the
    identity sum(b) == n(n-1)(gamma_avg_len + 1) is a real consistency
    check rather than a restatement.
    """

    algorithm: str
    b: np.ndarray = field(repr=False)
    b_max: float
    gamma_avg_len: float

    @property
    def b_total(self) -> float:
        return float(self.b.sum())


class RoutingSystem:
    """Candidate-successor DAGs, path counts and betweenness for one graph.

    Exposes exact (big-integer) path counts per destination, next-hop
    distributions that make a hop-by-hop walk uniform over candidate
    paths, and a cached betweenness profile.  Heavy per-destination
    state is transient; only O(n^2) cost tables and the requested
    caches persist.
    """

    def __init__(self, graph: Graph, algorithm: str):
        if algorithm not in ALGORITHMS:
            raise ValueError(f"unknown routing algorithm {algorithm!r}")
        if graph.n < 2:
            raise ValueError("routing needs at least two nodes")
        if not is_connected(graph):
            raise DisconnectedGraphError("routing requires a connected graph")
        self.graph = graph
        self.algorithm = algorithm
        n = graph.n
        self._step = (np.ones(n, dtype=np.int64) if algorithm == SPR
                      else graph.degrees.astype(np.int64))
        self._tails = np.repeat(np.arange(n, dtype=np.int32), graph.degrees)
        self._heads = np.fromiter(
            (w for u in range(n) for w in graph.adj[u]),
            dtype=np.int32, count=2 * graph.m)
        self._stepw = self._step[self._tails]
        self._cost: np.ndarray | None = None
        self._profile: BetweennessProfile | None = None
        self._sigma_mat: np.ndarray | None = None
        self._exact_cache: dict[int, list[int]] = {}

    # -- cost tables ---------------------------------------------------

    def cost_matrix(self) -> np.ndarray:
        """cost[t, v] = minimum cost of a v -> t path (int32)."""
        if self._cost is None:
            if self.algorithm == SPR:
                self._cost = self.graph.hop_distances()
            else:
                deg = self.graph.degrees.astype(np.float64)
                w = csr_matrix(
                    (deg[self._heads], (self._tails, self._heads)),
                    shape=(self.graph.n, self.graph.n))
                d = dijkstra(w, directed=True)
                c = np.rint(d)
                if not np.all(np.isfinite(d)) or not np.array_equal(c, d):
                    raise AssertionError("efr costs must be finite integers")
                self._cost = c.astype(np.int32)
        return self._cost

    def cost_to_go(self, v: int, t: int) -> int:
        return int(self.cost_matrix()[t, v])

    def successors(self, v: int, t: int) -> list[int]:
        """Neighbours of v on some candidate path toward t."""
        if v == t:
            raise ValueError("no successors at the destination itself")
        c = self.cost_matrix()[t]
        want = int(c[v]) - int(self._step[v])
        return [w for w in self.graph.adj[v] if int(c[w]) == want]

    # -- exact path counting -------------------------------------------

    def _exact_sigma_to(self, t: int) -> list[int]:
        """Exact candidate-path counts sigma(v, t) as Python integers."""
        cached = self._exact_cache.get(t)
        if cached is not None:
            return cached
        c = self.cost_matrix()[t]
        cl = c.tolist()
        order = np.argsort(c, kind="stable").tolist()
        step = self._step.tolist()
        adj = self.graph.adj
        sigma = [0] * self.graph.n
        sigma[t] = 1
        for v in order[1:]:
            want = cl[v] - step[v]
            s = 0
            for w in adj[v]:
                if cl[w] == want:
                    s += sigma[w]
            sigma[v] = s
        if len(self._exact_cache) >= 8:
            self._exact_cache.pop(next(iter(self._exact_cache)))
        self._exact_cache[t] = sigma
        return sigma

    def path_count(self, u: int, v: int) -> int:
        """Number of candidate u -> v paths (exact integer)."""
        if u == v:
            raise ValueError("path count needs two distinct nodes")
        return self._exact_sigma_to(v)[u]

    def next_hop_distribution(self, v: int, t: int) -> list[tuple[int, float]]:
        """(successor, probability) pairs; sampling hop-by-hop with these
        weights draws uniformly over all candidate v -> t paths."""
        if v == t:
            raise ValueError("no next hop at the destination itself")
        succ = self.successors(v, t)
        sigma = self._exact_sigma_to(t)
        total = sum(sigma[w] for w in succ)
        return [(w, sigma[w] / total) for w in succ]

    # -- betweenness / sigma sweeps ------------------------------------

    def _sweep(self, collect_b: bool, collect_sigma: bool):
        n = self.graph.n
        cost = self.cost_matrix()
        tails, heads, stepw = self._tails, self._heads, self._stepw
        b = np.zeros(n) if collect_b else None
        sig_mat = np.empty((n, n)) if collect_sigma else None
        hop_sum = 0.0
        for t in range(n):
            c = cost[t]
            mask = c[heads].astype(np.int64) + stepw == c[tails]
            dt = tails[mask]
            dh = heads[mask]
            ec = c[dt]
            order = np.argsort(ec, kind="stable")
            dt = dt[order]
            dh = dh[order]
            ec = ec[order]
            bounds = np.flatnonzero(np.r_[True, ec[1:] != ec[:-1]])
            bounds = np.append(bounds, dt.size)
            sigma = np.zeros(n)
            sigma[t] = 1.0
            hnum = np.zeros(n)
            h = np.zeros(n)
            groups = [(dt[a:z], dh[a:z]) for a, z in zip(bounds[:-1], bounds[1:])]
            for gt, gh in groups:
                sh = sigma[gh]
                np.add.at(sigma, gt, sh)
                np.add.at(hnum, gt, sh * (1.0 + h[gh]))
                u = np.unique(gt)
                h[u] = hnum[u] / sigma[u]
            if not np.all(np.isfinite(sigma)):
                raise OverflowError(
                    "candidate-path counts overflow float64; betweenness "
                    "is unavailable for this graph (exact path_count still works)")
            hop_sum += h.sum()
            if collect_b:
                f = np.ones(n)
                f[t] = 0.0
                for gt, gh in reversed(groups):
                    np.add.at(f, gh, f[gt] * sigma[gh] / sigma[gt])
                b += f
            if collect_sigma:
                sig_mat[t] = sigma
        avg_len = hop_sum / (n * (n - 1))
        return b, sig_mat, avg_len

    def betweenness(self) -> BetweennessProfile:
        if self._profile is None:
            b, _, avg_len = self._sweep(collect_b=True, collect_sigma=False)
            self._profile = BetweennessProfile(
                algorithm=self.algorithm,
                b=b,
                b_max=float(b.max()),
                gamma_avg_len=avg_len,
            )
        return self._profile

    def sigma_matrix(self) -> np.ndarray:
        """sigma[t, v] = candidate-path count v -> t in float64 (for sampling)."""
        if self._sigma_mat is None:
            _, sig, _ = self._sweep(collect_b=False, collect_sigma=True)
            self._sigma_mat = sig
        return self._sigma_mat


def build_routing(g: Graph, algorithm: str) -> RoutingSystem:
    """Construct the candidate-path system for ``algorithm`` on ``g``."""
    return RoutingSystem(g, algorithm)


def effective_betweenness(rs: RoutingSystem) -> BetweennessProfile:
    """Per-node effective betweenness under the system's algorithm."""
    return rs.betweenness()
