"""Batch evaluation across topology families and size-scaling fits.

``reproduce_tables`` averages the analytic critical rate and cost proxy
of every (scheme, routing) design over independent instances of the
benchmark families, optionally adding simulated critical rates.
``scaling_sweep`` measures how a chosen quantity grows with network
size and fits a power law on log-log axes.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from . import capacity as cap
from .errors import GenerationError, SweepError
from .generators import FAMILIES, GenSpec, build
from .graphs import Graph
from .routing import EFR, SPR, build_routing
from .simulate import estimate_rc

SCHEMA_VERSION = 1

# The seven designs reported for every family (ebc is only paired with
# the routing algorithm its profile comes from).
TABLE_COMBOS = (
    (cap.UC, SPR), (cap.UC, EFR),
    (cap.DC, SPR), (cap.DC, EFR),
    (cap.BC, SPR), (cap.BC, EFR),
    (cap.EBC, EFR),
)

# Ring and lattice are parameter-free; one instance represents them all.
DETERMINISTIC_FAMILIES = frozenset({"ring", "lattice"})

_FAMILY_INDEX = {fam: i for i, fam in enumerate(FAMILIES)}

# Benchmark edge densities (edges per node) at the reference size 1200.
_ER_DENSITY = 2450 / 1200
_HOT_DENSITY = 2583 / 1200


def benchmark_spec(family: str, n: int | None = None, seed: int = 0) -> GenSpec:
    """Generator parameters for the benchmark operating points.

    With ``n`` omitted the reference sizes are used (1225 for the two
    regular families, 1200 otherwise); otherwise edge counts scale to
    keep each family's edge density.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if family == "ring":
        return GenSpec("ring", n or 1225, seed)
    if family == "lattice":
        size = n or 1225
        side = isqrt(size)
        if side * side != size:
            raise ValueError(f"lattice size {size} is not a perfect square")
        return GenSpec("lattice", size, seed, rows=side, cols=side)
    size = n or 1200
    if family == "ws":
        return GenSpec("ws", size, seed, rewire=0.15)
    if family == "er":
        return GenSpec("er", size, seed, m=round(size * _ER_DENSITY))
    if family == "ba":
        return GenSpec("ba", size, seed, m=2)
    if family == "pa":
        return GenSpec("pa", size, seed, edges=2 * size)
    return GenSpec("hot", size, seed, edges=round(size * _HOT_DENSITY))


def instance_seed(base_seed: int, family: str, index: int) -> int:
    """Stable per-instance seed derivation (documented, reproducible)."""
    return (base_seed * 1_000_003 + _FAMILY_INDEX[family] * 10_007 + index) & 0x7FFFFFFF


@dataclass
class SweepRow:
    """One (family instance, scheme, routing) evaluation."""

    family: str
    n: int
    m: int
    seed: int
    scheme: str
    routing: str
    rc_analytic: float
    c_max: float
    b_max: float
    l_spr: float
    l_gamma: float
    rc_sim: float | None = None


CSV_COLUMNS = ("family", "n", "m", "seed", "scheme", "routing",
               "rc_analytic", "rc_sim", "c_max", "b_max", "l_spr", "l_gamma")


@dataclass
class SweepResult:
    rows: list[SweepRow] = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    def means(self) -> dict[tuple[str, str, str], dict[str, float]]:
        """Instance-averaged fields keyed by (family, scheme, routing)."""
        groups: dict[tuple[str, str, str], list[SweepRow]] = {}
        for row in self.rows:
            groups.setdefault((row.family, row.scheme, row.routing), []).append(row)
        out = {}
        for key, rows in groups.items():
            entry = {
                "instances": float(len(rows)),
                "rc_analytic": float(np.mean([r.rc_analytic for r in rows])),
                "c_max": float(np.mean([r.c_max for r in rows])),
                "b_max": float(np.mean([r.b_max for r in rows])),
                "l_spr": float(np.mean([r.l_spr for r in rows])),
                "l_gamma": float(np.mean([r.l_gamma for r in rows])),
            }
            sims = [r.rc_sim for r in rows if r.rc_sim is not None]
            if sims:
                entry["rc_sim"] = float(np.mean(sims))
            out[key] = entry
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in self.rows:
            writer.writerow([
                r.family, r.n, r.m, r.seed, r.scheme, r.routing,
                repr(r.rc_analytic),
                "" if r.rc_sim is None else repr(r.rc_sim),
                repr(r.c_max), repr(r.b_max), repr(r.l_spr), repr(r.l_gamma),
            ])
        return buf.getvalue()


def evaluate_instance(spec: GenSpec, combos=TABLE_COMBOS,
                      simulate: bool = False,
                      sim_options: dict | None = None) -> list[SweepRow]:
    """Generate one instance and evaluate every requested design on it."""
    g = build(spec)
    systems = {SPR: build_routing(g, SPR)}
    if any(routing == EFR for _, routing in combos):
        systems[EFR] = build_routing(g, EFR)
    profiles = {algo: rs.betweenness() for algo, rs in systems.items()}
    rows = []
    for scheme, routing in combos:
        if scheme == cap.BC:
            ca = cap.assign(g, scheme, profiles[SPR])
        elif scheme == cap.EBC:
            ca = cap.assign(g, scheme, profiles[routing])
        else:
            ca = cap.assign(g, scheme)
        ev = cap.analytic_rc(g, systems[routing], ca)
        rc_sim = None
        if simulate:
            opts = dict(sim_options or {})
            bounds_factor = opts.pop("bounds_factor", (0.5, 2.0))
            bounds = (bounds_factor[0] * ev.rc_analytic,
                      bounds_factor[1] * ev.rc_analytic)
            rc_sim = estimate_rc(g, systems[routing], ca, bounds=bounds,
                                 seed=spec.seed, **opts).rc
        rows.append(SweepRow(
            family=spec.family, n=g.n, m=g.m, seed=spec.seed,
            scheme=scheme, routing=routing,
            rc_analytic=ev.rc_analytic, c_max=ev.c_max,
            b_max=profiles[routing].b_max,
            l_spr=profiles[SPR].gamma_avg_len,
            l_gamma=profiles[routing].gamma_avg_len,
            rc_sim=rc_sim,
        ))
    return rows


def _instance_job(args) -> list[SweepRow]:
    spec, combos, simulate, sim_options = args
    return evaluate_instance(spec, combos, simulate, sim_options)


def reproduce_tables(families=FAMILIES, combos=TABLE_COMBOS,
                     n_instances: int = 10, seed: int = 0,
                     include_simulation: bool = False,
                     sim_options: dict | None = None,
                     threads: int = 1, n: int | None = None) -> SweepResult:
    """Instance-averaged design evaluation over the benchmark families.

    Deterministic families are evaluated once regardless of
    ``n_instances``.  Simulation (when enabled) is restricted to the
    randomized families, mirroring how the designs are usually compared.
    ``n`` overrides the benchmark size (edge densities scale with it).
    """
    jobs = []
    for family in families:
        if family not in FAMILIES:
            raise ValueError(f"unknown family {family!r}")
        count = 1 if family in DETERMINISTIC_FAMILIES else n_instances
        sim = include_simulation and family not in DETERMINISTIC_FAMILIES
        for i in range(count):
            spec = benchmark_spec(family, n=n, seed=instance_seed(seed, family, i))
            jobs.append((spec, tuple(combos), sim, sim_options))
    result = SweepResult()
    for rows in _run_jobs(jobs, threads):
        result.rows.extend(rows)
    return result


def _run_jobs(jobs, threads):
    if threads and threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            yield from pool.map(_instance_job, jobs)
    else:
        for job in jobs:
            yield _instance_job(job)


QUANTITIES = ("b_max_spr", "b_max_efr", "l_spr", "l_efr", "n",
              "rc:<scheme>,<routing>", "c_max:<scheme>,<routing>")


def _parse_quantity(quantity: str):
    """Returns (kind, combo-or-None, algorithms needed)."""
    if quantity in ("b_max_spr", "l_spr"):
        return quantity, None, (SPR,)
    if quantity in ("b_max_efr", "l_efr"):
        return quantity, None, (EFR,)
    if quantity == "n":
        return "n", None, ()
    for prefix in ("rc:", "c_max:"):
        if quantity.startswith(prefix):
            parts = quantity[len(prefix):].split(",")
            if len(parts) != 2:
                raise ValueError(f"bad quantity {quantity!r}; want {prefix}scheme,routing")
            scheme, routing = parts[0].strip(), parts[1].strip()
            if scheme not in cap.SCHEMES:
                raise ValueError(f"unknown scheme {scheme!r}")
            if routing not in (SPR, EFR):
                raise ValueError(f"unknown routing {routing!r}")
            needed = {routing}
            if scheme == cap.BC:
                needed.add(SPR)
            return prefix[:-1], (scheme, routing), tuple(sorted(needed))
    raise ValueError(f"unknown quantity {quantity!r}; choose from {QUANTITIES}")


def _quantity_job(args) -> float:
    family, n, seed, quantity = args
    kind, combo, algos = _parse_quantity(quantity)
    if kind == "n":
        return float(n)
    g = build(benchmark_spec(family, n=n, seed=seed))
    systems = {a: build_routing(g, a) for a in algos}
    profiles = {a: rs.betweenness() for a, rs in systems.items()}
    if kind == "b_max_spr":
        return profiles[SPR].b_max
    if kind == "b_max_efr":
        return profiles[EFR].b_max
    if kind == "l_spr":
        return profiles[SPR].gamma_avg_len
    if kind == "l_efr":
        return profiles[EFR].gamma_avg_len
    scheme, routing = combo
    if scheme == cap.BC:
        ca = cap.assign(g, scheme, profiles[SPR])
    elif scheme == cap.EBC:
        ca = cap.assign(g, scheme, profiles[routing])
    else:
        ca = cap.assign(g, scheme)
    ev = cap.analytic_rc(g, systems[routing], ca)
    return ev.rc_analytic if kind == "rc" else ev.c_max


@dataclass(frozen=True)
class FitResult:
    """Least-squares power-law fit on log-log axes."""

    exponent: float
    intercept: float  # log10 of the prefactor
    r_squared: float
    points: tuple[tuple[float, float], ...]


def fit_power_law(points) -> FitResult:
    """Fit y = a * x^k through (x, y) pairs; returns k, log10(a), r^2."""
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 2:
        raise ValueError("need at least two points for a fit")
    if any(x <= 0 or y <= 0 for x, y in pts):
        raise ValueError("power-law fit needs positive coordinates")
    lx = np.log10([x for x, _ in pts])
    ly = np.log10([y for _, y in pts])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    total = ly - ly.mean()
    denom = float(total @ total)
    r2 = 1.0 if denom == 0.0 else 1.0 - float(resid @ resid) / denom
    return FitResult(float(slope), float(intercept), r2, tuple(pts))


def scaling_sweep(family: str, sizes, quantity: str, n_instances: int = 10,
                  seed: int = 0, threads: int = 1) -> FitResult:
    """Average ``quantity`` per size over instances and fit a power law."""
    sizes = sorted(int(s) for s in sizes)
    if len(sizes) < 3 or len(set(sizes)) != len(sizes):
        raise ValueError("need at least three distinct sizes")
    _parse_quantity(quantity)  # validate early
    count = 1 if family in DETERMINISTIC_FAMILIES else n_instances
    jobs = [(family, n, instance_seed(seed, family, i * 7919 + j), quantity)
            for j, n in enumerate(sizes) for i in range(count)]
    points = []
    completed: list[int] = []
    values_by_size: dict[int, list[float]] = {n: [] for n in sizes}
    try:
        for (_, n, _, _), value in zip(jobs, _run_jobs_scalar(jobs, threads)):
            values_by_size[n].append(value)
    except GenerationError as exc:
        completed = [n for n in sizes if len(values_by_size[n]) == count]
        raise SweepError(
            f"generation failed mid-sweep ({exc}); completed sizes: {completed}"
        ) from exc
    for n in sizes:
        points.append((float(n), float(np.mean(values_by_size[n]))))
    return fit_power_law(points)


def _run_jobs_scalar(jobs, threads):
    if threads and threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            yield from pool.map(_quantity_job, jobs)
    else:
        for job in jobs:
            yield _quantity_job(job)
