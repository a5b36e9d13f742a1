"""Discrete-time synchronous packet traffic simulation.

Each step injects a (possibly fractional, handled statistically) number
of packets at uniform random sources with uniform random destinations,
then lets every node forward up to its capability from the head of its
FIFO queue.  A forwarded packet moves one hop along a candidate path of
the routing system, chosen so that complete walks are uniform over all
candidate paths.  Packets are delivered (and vanish) the moment they
arrive at their destination, without spending the destination's
capability; all other arrivals join the tail of the receiving queue at
the end of the step, so nothing travels two hops at once.  Queues are
unbounded; a configurable total-packet guard aborts runaway runs and
reports them as supercritical.

The order parameter is the windowed growth rate of the total queue
population divided by the injection rate: ~0 in free flow, positive
past the congestion transition.  ``estimate_rc`` brackets the
transition by bisection on the injection rate.
"""

from __future__ import annotations

import random
from bisect import bisect_right
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .capacity import CapabilityAssignment
from .errors import BracketError
from .graphs import Graph
from .routing import RoutingSystem


class Packet(NamedTuple):
    destination: int
    created: int  # step index at creation; diagnostic only


@dataclass
class StepStats:
    created: int
    delivered: int


class _HopSampler:
    """Cached per-(node, destination) successor tables for fast sampling."""

    def __init__(self, rs: RoutingSystem):
        self.cost = rs.cost_matrix()
        self.sigma = rs.sigma_matrix()
        self.adj = rs.graph.adj
        self.step = rs._step.tolist()
        self.cache: dict[tuple[int, int], tuple[list[int], list[float] | None]] = {}

    def sample(self, v: int, dest: int, rng: random.Random) -> int:
        entry = self.cache.get((v, dest))
        if entry is None:
            crow = self.cost[dest]
            want = int(crow[v]) - self.step[v]
            succ = [w for w in self.adj[v] if int(crow[w]) == want]
            if len(succ) == 1:
                entry = (succ, None)
            else:
                srow = self.sigma[dest]
                acc = 0.0
                cum = []
                for w in succ:
                    acc += float(srow[w])
                    cum.append(acc)
                entry = (succ, cum)
            self.cache[(v, dest)] = entry
        succ, cum = entry
        if cum is None:
            return succ[0]
        r = rng.random() * cum[-1]
        i = bisect_right(cum, r)
        return succ[i if i < len(succ) else len(succ) - 1]


def _sampler_for(rs: RoutingSystem) -> _HopSampler:
    sampler = getattr(rs, "_hop_sampler", None)
    if sampler is None:
        sampler = _HopSampler(rs)
        rs._hop_sampler = sampler
    return sampler


class TrafficState:
    """Mutable per-run state: FIFO queues, step counter and RNG streams.

    Queues hold bare destination ids unless ``track_creation`` is set,
    in which case they hold :class:`Packet` tuples (heavier, but keeps
    creation steps for diagnostics).
    """

    def __init__(self, graph: Graph, seed: int | np.random.SeedSequence = 0,
                 track_creation: bool = False):
        self.n = graph.n
        self.queues: list[deque] = [deque() for _ in range(graph.n)]
        self.step_index = 0
        self.theta = 0
        self.track_creation = track_creation
        ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        gen_ss, hop_ss, cap_ss = ss.spawn(3)
        self.rng = np.random.default_rng(gen_ss)
        self._hop_rng = random.Random(int(hop_ss.generate_state(1)[0]))
        self._cap_rng = random.Random(int(cap_ss.generate_state(1)[0]))

    def enqueue(self, node: int, dest: int) -> None:
        if node == dest:
            raise ValueError("packet source equals destination")
        item = Packet(dest, self.step_index) if self.track_creation else dest
        self.queues[node].append(item)
        self.theta += 1

    def total_queued(self) -> int:
        return sum(len(q) for q in self.queues)


def step(state: TrafficState, g: Graph, rs: RoutingSystem,
         ca: CapabilityAssignment, rate: float,
         inject: Sequence[tuple[int, int]] | None = None,
         check: bool = False, charge_delivery: bool = False) -> StepStats:
    """Advance one synchronous step; returns created/delivered counts.

    ``inject`` replaces the random generation phase with an explicit
    list of (source, destination) pairs, which keeps hand-traced
    scenarios deterministic.  With ``check`` the queue population
    invariant is re-counted and asserted after the step.

    By default a packet vanishes the moment it reaches its destination,
    without spending the destination's capability.  ``charge_delivery``
    is the sensitivity toggle: arrivals are then queued at the
    destination and take a service slot there before leaving, which
    shifts the congestion transition down by about (n-1)/b at the
    bottleneck (noticeable on homogeneous graphs, tiny on heterogeneous
    ones).
    """
    if g.n != state.n or len(ca.c) != g.n or rs.graph is not g:
        raise ValueError("state, graph, routing and capabilities must match")
    sampler = _sampler_for(rs)
    cap_floor, cap_frac = _service_params(ca)
    track = state.track_creation

    if inject is not None:
        for s, d in inject:
            state.enqueue(int(s), int(d))
        created = len(inject)
    else:
        created = int(rate)
        frac = rate - created
        if frac > 0.0 and state.rng.random() < frac:
            created += 1
        if created:
            src = state.rng.integers(0, g.n, size=created)
            dst = state.rng.integers(0, g.n, size=created)
            clash = src == dst
            while np.any(clash):
                dst[clash] = state.rng.integers(0, g.n, size=int(clash.sum()))
                clash = src == dst
            for i in range(created):
                state.enqueue(int(src[i]), int(dst[i]))

    delivered = 0
    arrivals: list[tuple[int, object]] = []
    queues = state.queues
    hop_rng = state._hop_rng
    cap_rng = state._cap_rng
    for v in range(g.n):
        q = queues[v]
        if not q:
            continue
        cap = cap_floor[v]
        if cap_frac[v] > 0.0 and cap_rng.random() < cap_frac[v]:
            cap += 1
        for _ in range(min(cap, len(q))):
            item = q.popleft()
            dest = item.destination if track else item
            if dest == v:  # only reachable with charge_delivery
                delivered += 1
                continue
            w = sampler.sample(v, dest, hop_rng)
            if w == dest and not charge_delivery:
                delivered += 1
            else:
                arrivals.append((w, item))
    for w, item in arrivals:
        queues[w].append(item)

    state.theta += -delivered
    state.step_index += 1
    if check:
        assert state.theta == state.total_queued(), "queue population out of sync"
    return StepStats(created=created, delivered=delivered)


def _service_params(ca: CapabilityAssignment) -> tuple[list[int], list[float]]:
    cached = getattr(ca, "_service_cache", None)
    if cached is None:
        floor = np.floor(ca.c).astype(int)
        frac = ca.c - floor
        frac[frac < 1e-12] = 0.0
        cached = (floor.tolist(), frac.tolist())
        object.__setattr__(ca, "_service_cache", cached)
    return cached


@dataclass
class OrderParameterEstimate:
    """Windowed queue-growth measurement at one injection rate."""

    eta: float
    windows: list[float] = field(repr=False)
    rate: float
    delta_t: int
    overflow: bool = False


def measure_eta(g: Graph, rs: RoutingSystem, ca: CapabilityAssignment,
                rate: float, warmup: int = 1000, delta_t: int = 100,
                n_windows: int = 10, seed: int | np.random.SeedSequence = 0,
                max_packets: int = 10_000_000,
                charge_delivery: bool = False) -> OrderParameterEstimate:
    """Run from empty and average the queue growth over measurement windows.

    Negative window samples (noise around a stationary population) are
    kept in the average; callers clamp at zero when making free/congested
    decisions.  Exceeding ``max_packets`` aborts with eta = inf, which
    decision logic reads as supercritical.
    """
    if warmup < 0 or delta_t < 1 or n_windows < 1 or rate <= 0:
        raise ValueError("need warmup >= 0, delta_t >= 1, n_windows >= 1, rate > 0")
    state = TrafficState(g, seed)
    samples: list[float] = []
    for _ in range(warmup):
        step(state, g, rs, ca, rate, charge_delivery=charge_delivery)
        if state.theta > max_packets:
            return OrderParameterEstimate(float("inf"), samples, rate, delta_t, True)
    for _ in range(n_windows):
        start = state.theta
        for _ in range(delta_t):
            step(state, g, rs, ca, rate, charge_delivery=charge_delivery)
            if state.theta > max_packets:
                return OrderParameterEstimate(float("inf"), samples, rate, delta_t, True)
        samples.append((state.theta - start) / (rate * delta_t))
    return OrderParameterEstimate(float(np.mean(samples)), samples, rate, delta_t)


@dataclass
class RcSearchResult:
    """Bisection outcome for the simulated critical rate."""

    rc: float
    bracket: tuple[float, float]
    analytic_rc: float
    threshold: float
    evaluations: int


def estimate_rc(g: Graph, rs: RoutingSystem, ca: CapabilityAssignment,
                eta_threshold: float = 0.01,
                bounds: tuple[float, float] | None = None,
                seed: int = 0, warmup: int = 1000, delta_t: int = 100,
                n_windows: int = 10, decision_seeds: int = 3,
                rel_width: float = 0.02,
                max_packets: int = 10_000_000,
                charge_delivery: bool = False) -> RcSearchResult:
    """Bisect the injection rate for the congestion transition.

    Each free/congested decision averages the zero-clamped order
    parameter over ``decision_seeds`` independent runs.  The search
    stops when the bracket is narrower than ``rel_width`` of the
    analytic critical rate or one packet per step, whichever is larger.
    Raises BracketError when the bounds do not straddle the transition.
    """
    profile = rs.betweenness()
    analytic = float(np.min(ca.c * (g.n * (g.n - 1)) / profile.b))
    lo, hi = bounds if bounds is not None else (1.0, 4.0 * analytic)
    if not 0 < lo < hi:
        raise ValueError(f"bad search bounds ({lo}, {hi})")
    ss = np.random.SeedSequence(seed)
    evaluations = 0

    def congested(rate: float) -> bool:
        nonlocal evaluations
        etas = []
        for child in ss.spawn(decision_seeds):
            est = measure_eta(g, rs, ca, rate, warmup, delta_t, n_windows,
                              seed=child, max_packets=max_packets,
                              charge_delivery=charge_delivery)
            etas.append(max(est.eta, 0.0))
            evaluations += 1
        return float(np.mean(etas)) > eta_threshold

    if congested(lo):
        raise BracketError(
            f"already congested at the lower bound rate={lo:g} "
            f"(analytic rc={analytic:g})")
    if not congested(hi):
        raise BracketError(
            f"order parameter below threshold {eta_threshold:g} at the upper "
            f"bound rate={hi:g} (analytic rc={analytic:g}); widen the bounds")
    tol = max(rel_width * analytic, 1.0)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if congested(mid):
            hi = mid
        else:
            lo = mid
    return RcSearchResult(
        rc=0.5 * (lo + hi),
        bracket=(lo, hi),
        analytic_rc=analytic,
        threshold=eta_threshold,
        evaluations=evaluations,
    )
