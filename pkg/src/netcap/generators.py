"""Seedable generators for the seven benchmark topology families.

Families: ring (each node tied to its two nearest neighbours on both
sides), toroidal lattice, WS (ring with a fraction of edges rewired),
ER random graphs with a fixed edge count, BA preferential attachment,
PA (triangle seed, one preferential edge per new node, then
degree-proportional internal edges up to a target edge count), and a
heuristic three-tier "HOT" construction that reuses a PA degree
sequence: a small sparsely meshed core, high-degree gateways hanging
off it, and low-degree periphery nodes attached to the gateways.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

import numpy as np

from .errors import GenerationError
from .graphs import Graph, is_connected

FAMILIES = ("ring", "lattice", "ws", "er", "ba", "pa", "hot")

DEFAULT_ATTEMPTS = 100


@dataclass(frozen=True)
class GenSpec:
    """Parameters that fully determine one generated graph.

    Interpretation of the optional fields depends on the family:
    ``m`` is edges-per-new-node for ba and total edge count for er;
    ``edges`` is the target edge count for pa and hot; ``rewire`` is the
    WS rewiring fraction; ``rows``/``cols`` select lattice dimensions
    (default: sqrt(n) x sqrt(n), n must then be a perfect square).
    """

    family: str
    n: int
    seed: int = 0
    m: int | None = None
    edges: int | None = None
    rewire: float | None = None
    rows: int | None = None
    cols: int | None = None


def build(spec: GenSpec) -> Graph:
    """Generate the graph described by ``spec`` (same spec, same graph)."""
    fam = spec.family
    if fam == "ring":
        return gen_ring(spec.n)
    if fam == "lattice":
        if spec.rows is not None or spec.cols is not None:
            if spec.rows is None or spec.cols is None:
                raise ValueError("lattice needs both rows and cols (or neither)")
            return gen_lattice(spec.rows, spec.cols)
        side = isqrt(spec.n)
        if side * side != spec.n:
            raise ValueError(f"lattice n={spec.n} is not a perfect square; pass rows/cols")
        return gen_lattice(side, side)
    if fam == "ws":
        frac = 0.15 if spec.rewire is None else spec.rewire
        return gen_ws(spec.n, frac, spec.seed)
    if fam == "er":
        if spec.m is None:
            raise ValueError("er needs an edge count m")
        return gen_er(spec.n, spec.m, spec.seed)
    if fam == "ba":
        return gen_ba(spec.n, 2 if spec.m is None else spec.m, spec.seed)
    if fam == "pa":
        return gen_pa(spec.n, spec.edges, spec.seed)
    if fam == "hot":
        return gen_hot(spec.n, spec.edges, spec.seed)
    raise ValueError(f"unknown family {fam!r}; expected one of {FAMILIES}")


def gen_ring(n: int) -> Graph:
    """4-regular ring: node i adjacent to i+-1 and i+-2 (mod n)."""
    if n < 5:
        raise ValueError(f"ring needs n >= 5, got {n}")
    edges = []
    for i in range(n):
        edges.append((i, (i + 1) % n))
        edges.append((i, (i + 2) % n))
    return Graph(n, {(min(u, v), max(u, v)) for u, v in edges})


def gen_lattice(rows: int, cols: int) -> Graph:
    """Toroidal rows x cols grid; wraparound keeps it 4-regular."""
    if rows < 3 or cols < 3:
        raise ValueError(f"lattice needs rows, cols >= 3, got {rows}x{cols}")
    edges = set()
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            right = r * cols + (c + 1) % cols
            down = ((r + 1) % rows) * cols + c
            edges.add((min(v, right), max(v, right)))
            edges.add((min(v, down), max(v, down)))
    return Graph(rows * cols, edges)


def gen_ws(n: int, rewire_frac: float = 0.15, seed: int = 0,
           attempts: int = DEFAULT_ATTEMPTS) -> Graph:
    """Ring with round(rewire_frac * 2n) edges rewired at one endpoint.

    Each selected edge keeps one uniformly chosen endpoint and is
    reattached to a uniform random node, redrawing on self-loops and
    duplicates.  Disconnected results are regenerated (bounded attempts).
    """
    if n < 5:
        raise ValueError(f"ws needs n >= 5, got {n}")
    if not 0.0 <= rewire_frac <= 1.0:
        raise ValueError(f"rewire fraction must be in [0, 1], got {rewire_frac}")
    base = gen_ring(n)
    k = round(rewire_frac * 2 * n)
    if k == 0:
        return base
    base_edges = list(base.edges)
    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        adj = [set(a) for a in base.adj]
        picked = rng.choice(len(base_edges), size=k, replace=False)
        for ei in picked:
            u, v = base_edges[int(ei)]
            kept, dropped = (u, v) if rng.integers(2) == 0 else (v, u)
            adj[u].discard(v)
            adj[v].discard(u)
            target = None
            for _ in range(200):
                cand = int(rng.integers(n))
                if cand != kept and cand not in adj[kept]:
                    target = cand
                    break
            if target is None:
                allowed = [w for w in range(n) if w != kept and w not in adj[kept]]
                if not allowed:
                    # kept endpoint already adjacent to everyone: keep the edge
                    target = dropped
                else:
                    target = int(allowed[rng.integers(len(allowed))])
            adj[kept].add(target)
            adj[target].add(kept)
        g = Graph(n, {(u, w) for u in range(n) for w in adj[u] if u < w})
        if is_connected(g):
            return g
    raise GenerationError(f"ws rewiring stayed disconnected after {attempts} attempts")


def _sample_gnm_edges(rng: np.random.Generator, n: int, m: int) -> set[tuple[int, int]]:
    edges: set[tuple[int, int]] = set()
    while len(edges) < m:
        u = int(rng.integers(n))
        v = int(rng.integers(n))
        if u == v:
            continue
        edges.add((u, v) if u < v else (v, u))
    return edges


def _components(adj: list[set[int]]) -> list[set[int]]:
    n = len(adj)
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        comp = {s}
        seen[s] = True
        stack = [s]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    comp.add(w)
                    stack.append(w)
        comps.append(comp)
    return comps


def _connect_repair(n: int, edges: set[tuple[int, int]],
                    rng: np.random.Generator) -> Graph:
    """Join components while preserving the exact edge count.

    Each merge removes one randomly chosen cycle edge from the largest
    component and spends it on a link to another component.  At mean
    degree ~4 the giant component has plenty of redundant edges, so the
    result stays close to a uniform G(n, m) draw.
    """
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    comps = _components(adj)
    while len(comps) > 1:
        comps.sort(key=lambda c: (-len(c), min(c)))
        giant = comps[0]
        other = comps[-1]
        giant_edges = sorted(e for e in edges if e[0] in giant and e[1] in giant)
        freed = None
        order = rng.permutation(len(giant_edges))
        for ei in order:
            u, v = giant_edges[int(ei)]
            adj[u].discard(v)
            adj[v].discard(u)
            # still one piece without (u, v)?
            stack, seen = [u], {u}
            while stack:
                x = stack.pop()
                for w in adj[x]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if v in seen:
                freed = (u, v)
                break
            adj[u].add(v)
            adj[v].add(u)
        if freed is None:
            raise GenerationError("no removable cycle edge available for reconnection")
        edges.discard(freed)
        a = sorted(giant)[int(rng.integers(len(giant)))]
        b = sorted(other)[int(rng.integers(len(other)))]
        e = (a, b) if a < b else (b, a)
        edges.add(e)
        adj[a].add(b)
        adj[b].add(a)
        giant.update(other)
        comps = [c for c in comps if c is not other]
    return Graph(n, edges)


def gen_er(n: int, m: int, seed: int = 0, attempts: int = 10,
           repair: bool = True) -> Graph:
    """Uniform G(n, m) conditioned on connectivity.

    Draws are retried up to ``attempts`` times; at the sparse densities
    used here a connected draw is vanishingly rare for large n, so by
    default the last draw is repaired into one component with the edge
    count kept exact.  With ``repair=False`` exhausting the attempts
    raises GenerationError instead.
    """
    if n < 2:
        raise ValueError(f"er needs n >= 2, got {n}")
    max_m = n * (n - 1) // 2
    if not 0 <= m <= max_m:
        raise ValueError(f"edge count {m} outside [0, {max_m}] for n={n}")
    if m < n - 1:
        raise GenerationError(f"cannot connect n={n} nodes with only m={m} edges")
    rng = np.random.default_rng(seed)
    edges: set[tuple[int, int]] = set()
    for _ in range(max(1, attempts)):
        edges = _sample_gnm_edges(rng, n, m)
        g = Graph(n, edges)
        if is_connected(g):
            return g
    if not repair:
        raise GenerationError(f"no connected G({n},{m}) draw in {attempts} attempts")
    return _connect_repair(n, edges, rng)


def gen_ba(n: int, m: int = 2, seed: int = 0) -> Graph:
    """Preferential attachment from an (m+1)-clique, m edges per new node.

    Targets are drawn with probability proportional to degree+1 (the
    smoothed kernel most implementations use, since it also covers
    zero-degree nodes), distinct per new node.  At the benchmark size
    this reproduces the reference ensemble's hub sizes and path lengths.
    """
    if m < 1 or n <= m:
        raise ValueError(f"ba needs n > m >= 1, got n={n}, m={m}")
    rng = np.random.default_rng(seed)
    edges = [(i, j) for i in range(m + 1) for j in range(i + 1, m + 1)]
    # one entry per node plus one per incident edge: uniform draws give
    # P(node) proportional to degree + 1
    repeated = [i for i in range(m + 1) for _ in range(m + 1)]
    for new in range(m + 1, n):
        targets: set[int] = set()
        while len(targets) < m:
            targets.add(repeated[int(rng.integers(len(repeated)))])
        repeated.append(new)
        for t in sorted(targets):
            edges.append((t, new))
            repeated.append(t)
            repeated.append(new)
    return Graph(n, edges)


def gen_pa(n: int, target_edges: int | None = None, seed: int = 0) -> Graph:
    """Triangle seed, one preferential edge per new node, then
    degree-proportional internal edges until ``target_edges`` is reached
    (default 2n)."""
    if n < 4:
        raise ValueError(f"pa needs n >= 4, got {n}")
    if target_edges is None:
        target_edges = 2 * n
    if target_edges < n + 2 or target_edges > n * (n - 1) // 2:
        raise ValueError(
            f"pa target_edges {target_edges} outside [{n + 2}, {n * (n - 1) // 2}]")
    rng = np.random.default_rng(seed)
    edges = [(0, 1), (0, 2), (1, 2)]
    adj = [{1, 2}, {0, 2}, {0, 1}] + [set() for _ in range(n - 3)]
    repeated = [0, 0, 1, 1, 2, 2]
    for new in range(3, n):
        t = repeated[int(rng.integers(len(repeated)))]
        edges.append((t, new))
        adj[t].add(new)
        adj[new].add(t)
        repeated.append(t)
        repeated.append(new)
    needed = target_edges - len(edges)
    tries = 0
    budget = 200 * needed + 1000
    while needed > 0:
        tries += 1
        if tries > budget:
            raise GenerationError("pa internal-edge sampling stalled (graph too dense?)")
        u = repeated[int(rng.integers(len(repeated)))]
        v = repeated[int(rng.integers(len(repeated)))]
        if u == v or v in adj[u]:
            continue
        edges.append((u, v))
        adj[u].add(v)
        adj[v].add(u)
        repeated.append(u)
        repeated.append(v)
        needed -= 1
    return Graph(n, edges)


def gen_hot(n: int, target_edges: int | None = None, seed: int = 0,
            n_core: int = 10) -> Graph:
    """Three-tier heuristic topology reusing a PA degree sequence.

    A PA draw fixes the per-node degree targets.  A handful of
    moderate-degree nodes form a sparsely meshed core ring; the
    highest-degree nodes become gateways, each with one core uplink;
    every periphery node hangs off exactly one gateway (chosen by spare
    child capacity) and spends its remaining degree on siblings under
    the same gateway.  Leftover capacity on either side is repaired
    with links into the core.  The hierarchy is deliberately rigid:
    traffic between groups has no way around the gateways and the core,
    which is what makes degree-avoiding routing ineffective here.
    """
    if n < 20:
        raise ValueError(f"hot needs n >= 20, got {n}")
    if target_edges is None:
        target_edges = round(2.1525 * n)  # benchmark density: 2583 edges at n=1200
    source = gen_pa(n, target_edges, seed)
    want = np.sort(source.degrees)[::-1].astype(int).tolist()  # node i's target
    rng = np.random.default_rng([seed, 1])

    eligible = [i for i in range(n) if want[i] >= 3]
    if len(eligible) < n_core + 2:
        raise GenerationError("degree sequence too flat for a core/gateway split")
    core = eligible[-n_core:]  # smallest degrees still >= 3: "moderate/low"
    core_set = set(core)
    noncore = [i for i in range(n) if i not in core_set]  # degree-descending

    # Smallest high-degree prefix whose child capacity (degree minus the
    # core uplink) covers one parent slot per remaining periphery node.
    gateways: list[int] = []
    capacity = 0
    periphery: list[int] | None = None
    for idx, node in enumerate(noncore):
        gateways.append(node)
        capacity += want[node] - 1
        remaining = len(noncore) - idx - 1
        if capacity >= remaining and len(gateways) >= 2:
            periphery = noncore[idx + 1:]
            break
    if periphery is None:
        raise GenerationError("could not balance gateway capacity against periphery count")

    adj: list[set[int]] = [set() for _ in range(n)]
    used = [0] * n

    def add_edge(a: int, b: int) -> bool:
        if a == b or b in adj[a]:
            return False
        adj[a].add(b)
        adj[b].add(a)
        used[a] += 1
        used[b] += 1
        return True

    for i in range(len(core)):
        add_edge(core[i], core[(i + 1) % len(core)])
    for gw in gateways:
        add_edge(gw, core[int(rng.integers(len(core)))])

    # One uplink per periphery node, biased toward gateways with spare
    # child capacity so realized gateway degrees track their targets.
    groups: dict[int, list[int]] = {gw: [] for gw in gateways}
    for p in periphery:
        residual = np.array([max(want[g] - used[g], 0) for g in gateways], dtype=float)
        total = residual.sum()
        if total > 0:
            gw = gateways[int(rng.choice(len(gateways), p=residual / total))]
        else:
            gw = gateways[int(rng.integers(len(gateways)))]
        add_edge(p, gw)
        groups[gw].append(p)

    # Local sibling meshes: leftover periphery degree pairs up inside the
    # same group, so extra links never open inter-group shortcuts.
    for gw in gateways:
        members = groups[gw]
        open_stubs = [p for p in members if used[p] < want[p]]
        guard = 0
        while len(open_stubs) > 1 and guard < 20 * n:
            guard += 1
            open_stubs.sort(key=lambda p: want[p] - used[p], reverse=True)
            a = open_stubs[0]
            mate = next((b for b in open_stubs[1:] if b not in adj[a]), None)
            if mate is None:
                open_stubs.pop(0)
                continue
            add_edge(a, mate)
            open_stubs = [p for p in open_stubs if used[p] < want[p]]

    # Repair remaining stubs (odd parity, tiny groups, underfull
    # gateways) with core links; the hierarchy stays intact.
    for node in periphery + gateways:
        while used[node] < want[node]:
            targets = [c for c in core if c not in adj[node]]
            if not targets:
                break
            add_edge(node, targets[int(rng.integers(len(targets)))])

    g = Graph(n, {(u, w) for u in range(n) for w in adj[u] if u < w})
    if not is_connected(g):
        raise GenerationError("hot construction produced a disconnected graph")
    return g
