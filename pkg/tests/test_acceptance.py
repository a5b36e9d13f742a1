"""Release acceptance suite.

Each test prints one PASS line when its criterion holds.  The expected
values are the published reference means for the benchmark operating
points (five random families at n=1200 plus the two deterministic
regular graphs at n=1225), reproduced here as frozen constants.

Shared fixtures cache the expensive artifacts: betweenness profiles for
all benchmark instances and the size-scaling sweep records.
"""

import numpy as np
import pytest

from bruteforce import betweenness_by_enumeration, random_connected_graph
from netcap import assign, build_routing, estimate_rc, measure_eta
from netcap.capacity import analytic_rc, closed_form_rc
from netcap.experiments import benchmark_spec, instance_seed
from netcap.generators import build
from netcap.routing import EFR, SPR

N_INSTANCES = 10
BASE_SEED = 0

# reference design-point means, randomized families at n=1200
REFERENCE_RC = {
    "ba": {("uc", "spr"): 24.2, ("uc", "efr"): 200.0, ("dc", "spr"): 322.1,
           ("dc", "efr"): 286.4, ("bc", "spr"): 880.6, ("bc", "efr"): 167.2,
           ("ebc", "efr"): 660.6},
    "pa": {("uc", "spr"): 15.5, ("uc", "efr"): 116.7, ("dc", "spr"): 401.7,
           ("dc", "efr"): 229.8, ("bc", "spr"): 955.0, ("bc", "efr"): 112.4,
           ("ebc", "efr"): 718.4},
    "er": {("uc", "spr"): 157.7, ("uc", "efr"): 346.9, ("dc", "spr"): 393.4,
           ("dc", "efr"): 412.8, ("bc", "spr"): 787.2, ("bc", "efr"): 353.6,
           ("ebc", "efr"): 754.2},
    "ws": {("uc", "spr"): 101.4, ("uc", "efr"): 144.8, ("dc", "spr"): 152.2,
           ("dc", "efr"): 166.5, ("bc", "spr"): 541.8, ("bc", "efr"): 293.3,
           ("ebc", "efr"): 538.3},
}
REFERENCE_CMAX_BA = {"bc": 160.2, "ebc_efr": 13.3}
REFERENCE_EXPONENTS = {("ba", SPR): 1.848, ("er", SPR): 1.460,
                       ("ba", EFR): 1.206, ("er", EFR): 1.161}

ALL_COMBOS = (("uc", "spr"), ("uc", "efr"), ("dc", "spr"), ("dc", "efr"),
              ("bc", "spr"), ("bc", "efr"), ("ebc", "efr"))


class InstanceRecord:
    """Cached per-instance facts: graph aggregates plus both profiles."""

    def __init__(self, family, seed):
        self.family = family
        self.seed = seed
        g = build(benchmark_spec(family, seed=seed))
        self.n = g.n
        self.m = g.m
        self.max_degree = int(g.degrees.max())
        self.mean_degree = 2 * g.m / g.n
        self.profiles = {}
        self.rc = {}
        self.cmax = {}
        systems = {SPR: build_routing(g, SPR), EFR: build_routing(g, EFR)}
        for algo, rs in systems.items():
            self.profiles[algo] = rs.betweenness()
        for scheme, routing in ALL_COMBOS:
            if scheme == "bc":
                ca = assign(g, scheme, self.profiles[SPR])
            elif scheme == "ebc":
                ca = assign(g, scheme, self.profiles[routing])
            else:
                ca = assign(g, scheme)
            ev = analytic_rc(g, systems[routing], ca)
            self.rc[(scheme, routing)] = ev.rc_analytic
            self.cmax[(scheme, routing)] = ev.c_max


@pytest.fixture(scope="module")
def benchmark_records():
    records = {}
    for family in ("ws", "er", "ba", "pa", "hot"):
        records[family] = [
            InstanceRecord(family, instance_seed(BASE_SEED, family, i))
            for i in range(N_INSTANCES)
        ]
    for family in ("ring", "lattice"):
        records[family] = [InstanceRecord(family, 0)]
    return records


def _mean_rc(records, combo):
    return float(np.mean([r.rc[combo] for r in records]))


def test_c01_betweenness_identity(benchmark_records):
    """Sum of betweenness equals n(n-1)(avg_len + 1) for every instance.

    The average candidate-path length is accumulated independently of
    the betweenness sweep, so this is a real cross-check, not algebra.
    """
    worst = 0.0
    count = 0
    for family, records in benchmark_records.items():
        for rec in records:
            for algo in (SPR, EFR):
                p = rec.profiles[algo]
                expected = rec.n * (rec.n - 1) * (p.gamma_avg_len + 1.0)
                rel = abs(p.b_total - expected) / expected
                worst = max(worst, rel)
                count += 1
                assert rel <= 1e-9, (family, rec.seed, algo, rel)
    print(f"PASS c01 betweenness identity: {count} profiles, worst rel err {worst:.2e}")


def test_c02_oracle_equivalence():
    """Fast betweenness matches brute-force path enumeration exactly."""
    rng = np.random.default_rng(1234)
    worst = 0.0
    for i in range(200):
        g = random_connected_graph(rng)
        for algo in (SPR, EFR):
            p = build_routing(g, algo).betweenness()
            b_ref, avg_ref = betweenness_by_enumeration(g, algo)
            worst = max(worst, float(np.max(np.abs(p.b - b_ref))))
            assert np.max(np.abs(p.b - b_ref)) <= 1e-9, (i, algo)
            assert abs(p.gamma_avg_len - avg_ref) <= 1e-9, (i, algo)
    print(f"PASS c02 oracle equivalence: 200 graphs, both algorithms, "
          f"max abs err {worst:.2e}")


def test_c03_deterministic_closed_forms(benchmark_records):
    """Ring and lattice columns collapse to their closed forms.

    The ring value 31.72 matches the published 32 within rounding.  The
    lattice is checked for internal exactness against mean_deg*n/(L+1)
    (= 264.9); the published 280 corresponds to n/L without the +1 and
    is documented as a discrepancy rather than matched.
    """
    ring = benchmark_records["ring"][0]
    ring_expect = 4 * 1225 / (153.5 + 1)
    for combo in ALL_COMBOS:
        assert ring.rc[combo] == pytest.approx(ring_expect, rel=1e-9)
    assert abs(ring.rc[("uc", "spr")] - 32) / 32 <= 0.02

    lattice = benchmark_records["lattice"][0]
    lat_expect = 4 * 1225 / (17.5 + 1)
    for combo in ALL_COMBOS:
        assert lattice.rc[combo] == pytest.approx(lat_expect, rel=1e-9)
    g = build(benchmark_spec("lattice"))
    cf = closed_form_rc(g, lattice.profiles[SPR], ("bc", "spr"))
    assert cf.value == pytest.approx(lat_expect, rel=1e-9)
    print(f"PASS c03 closed forms: ring rc={ring_expect:.2f} (~32), "
          f"lattice rc={lat_expect:.2f} (internal exactness; 280 not matched)")


def test_c04_benchmark_rc_means(benchmark_records):
    """Randomized-family analytic means within 15%; rigid hierarchy is
    insensitive to routing choice while the scale-free family is not."""
    lines = []
    for family, expected in REFERENCE_RC.items():
        records = benchmark_records[family]
        for combo, ref in expected.items():
            got = _mean_rc(records, combo)
            dev = (got - ref) / ref
            assert abs(dev) <= 0.15, (family, combo, got, ref)
            lines.append(f"{family}/{combo[0]},{combo[1]}: {got:.1f} vs {ref} ({dev:+.1%})")
    hot = benchmark_records["hot"]
    hot_ratio = _mean_rc(hot, ("uc", "efr")) / _mean_rc(hot, ("uc", "spr"))
    ba = benchmark_records["ba"]
    ba_ratio = _mean_rc(ba, ("uc", "efr")) / _mean_rc(ba, ("uc", "spr"))
    assert hot_ratio < 2.0
    assert ba_ratio > 5.0
    print(f"PASS c04 rc means: 28 design points within 15%; "
          f"routing-gain ratio hot={hot_ratio:.2f} (<2) vs ba={ba_ratio:.2f} (>5)")


def test_c05_cost_proxy(benchmark_records):
    """Cost proxy: uniform scheme equals the mean degree (4 where edge
    counts make it exact), degree scheme equals the max degree, and the
    scale-free family pays an order of magnitude more under bc than
    under ebc."""
    for family, records in benchmark_records.items():
        for rec in records:
            uc_cmax = rec.cmax[("uc", "spr")]
            assert uc_cmax == pytest.approx(rec.mean_degree, rel=1e-12)
            if rec.m == 2 * rec.n:
                assert uc_cmax == 4.0
            else:
                assert abs(uc_cmax - 4.0) <= 0.35
            assert rec.cmax[("dc", "spr")] == pytest.approx(rec.max_degree, rel=1e-12)
    ba = benchmark_records["ba"]
    bc_mean = float(np.mean([r.cmax[("bc", "spr")] for r in ba]))
    ebc_mean = float(np.mean([r.cmax[("ebc", "efr")] for r in ba]))
    ratio = bc_mean / ebc_mean
    assert ratio > 5.0
    assert abs(bc_mean - REFERENCE_CMAX_BA["bc"]) / REFERENCE_CMAX_BA["bc"] <= 0.40
    assert abs(ebc_mean - REFERENCE_CMAX_BA["ebc_efr"]) / REFERENCE_CMAX_BA["ebc_efr"] <= 0.40
    print(f"PASS c05 cost proxy: uc/dc identities exact; ba bc={bc_mean:.1f} "
          f"vs ebc={ebc_mean:.1f} (ratio {ratio:.1f} > 5)")


def _design(g, scheme, routing):
    rs = build_routing(g, routing)
    if scheme == "bc":
        spr = rs if routing == SPR else build_routing(g, SPR)
        ca = assign(g, scheme, spr.betweenness())
    elif scheme == "ebc":
        ca = assign(g, scheme, rs.betweenness())
    else:
        ca = assign(g, scheme)
    return rs, ca


# Bisection decisions average five seeds; the 0.004 threshold sits well
# above the stationary noise floor (~0.001) but below the shallow
# single-bottleneck growth slope that the default 0.01 only crosses
# 15-20% past the transition on small heterogeneous graphs.
SIM_KW = dict(eta_threshold=0.004, decision_seeds=5)


def _sim_designs():
    return [
        ("ring-101", build(benchmark_spec("ring", n=101)), "uc", "spr"),
        ("ring-101", build(benchmark_spec("ring", n=101)), "ebc", "efr"),
        ("er-300", build(benchmark_spec("er", n=300, seed=instance_seed(0, "er", 0))), "uc", "spr"),
        ("er-300", build(benchmark_spec("er", n=300, seed=instance_seed(0, "er", 0))), "ebc", "efr"),
        ("ba-300", build(benchmark_spec("ba", n=300, seed=instance_seed(0, "ba", 0))), "uc", "spr"),
        ("ba-300", build(benchmark_spec("ba", n=300, seed=instance_seed(0, "ba", 0))), "ebc", "efr"),
    ]


def test_c06_simulated_vs_analytic(benchmark_records):
    """Bisected simulation rates agree with the analytic formula within
    15% on small instances, plus a full-size scale-free spot check."""
    lines = []
    for label, g, scheme, routing in _sim_designs():
        rs, ca = _design(g, scheme, routing)
        res = estimate_rc(g, rs, ca, seed=42,
                          bounds=(0.5 * _analytic(g, rs, ca), 2.0 * _analytic(g, rs, ca)),
                          **SIM_KW)
        dev = (res.rc - res.analytic_rc) / res.analytic_rc
        assert abs(dev) <= 0.15, (label, scheme, routing, res.rc, res.analytic_rc)
        lines.append(f"{label} ({scheme},{routing}): sim {res.rc:.1f} vs "
                     f"analytic {res.analytic_rc:.1f} ({dev:+.1%})")

    # representative full-size instance: analytic closest to the ensemble mean
    ba = benchmark_records["ba"]
    rcs = [r.rc[("uc", "spr")] for r in ba]
    idx = int(np.argmin(np.abs(np.array(rcs) - np.mean(rcs))))
    g = build(benchmark_spec("ba", seed=ba[idx].seed))
    rs, ca = _design(g, "uc", "spr")
    res = estimate_rc(g, rs, ca, seed=43,
                      bounds=(0.5 * _analytic(g, rs, ca), 2.0 * _analytic(g, rs, ca)),
                      **SIM_KW)
    assert 22.0 <= res.rc <= 29.0, res.rc
    lines.append(f"ba-1200 (uc,spr): sim {res.rc:.1f} in [22, 29]")
    print("PASS c06 simulation agreement: " + "; ".join(lines))


def _analytic(g, rs, ca):
    return float(np.min(ca.c * (g.n * (g.n - 1)) / rs.betweenness().b))


def test_c07_transition_bracketing():
    """The order parameter flips from ~0 to >0.01 across the analytic
    rate (proportional capabilities make the transition collective, so
    the flip is sharp on both test graphs)."""
    for label, g in [("ring-101", build(benchmark_spec("ring", n=101))),
                     ("er-300", build(benchmark_spec("er", n=300,
                                                     seed=instance_seed(0, "er", 0))))]:
        rs, ca = _design(g, "bc", "spr")
        rc = _analytic(g, rs, ca)
        lo_etas, hi_etas = [], []
        for s in range(5):
            lo_etas.append(max(measure_eta(g, rs, ca, 0.9 * rc, seed=s).eta, 0.0))
            hi_etas.append(max(measure_eta(g, rs, ca, 1.1 * rc, seed=s).eta, 0.0))
        lo, hi = float(np.mean(lo_etas)), float(np.mean(hi_etas))
        assert lo < 0.01, (label, lo)
        assert hi > 0.01, (label, hi)
        print(f"PASS c07 bracketing {label}: eta(0.9rc)={lo:.4f} < 0.01 < "
              f"eta(1.1rc)={hi:.4f}")


@pytest.fixture(scope="module")
def scaling_records():
    sizes = (400, 800, 1600, 3200)
    data = {}
    for family in ("ba", "er"):
        per_size = []
        for j, n in enumerate(sizes):
            rows = []
            for i in range(N_INSTANCES):
                g = build(benchmark_spec(family, n=n,
                                         seed=instance_seed(BASE_SEED, family, i * 7919 + j)))
                rec = {"n": n, "m": g.m, "mean_degree": 2 * g.m / g.n}
                for algo in (SPR, EFR):
                    p = build_routing(g, algo).betweenness()
                    rec[f"b_max_{algo}"] = p.b_max
                    rec[f"l_{algo}"] = p.gamma_avg_len
                rows.append(rec)
            per_size.append(rows)
        data[family] = per_size
    return data


def _fit(points):
    from netcap import fit_power_law
    return fit_power_law(points)


def _size_means(per_size, fn):
    return [(rows[0]["n"], float(np.mean([fn(r) for r in rows])))
            for rows in per_size]


def test_c08_bmax_scaling_exponents(scaling_records):
    """Peak-betweenness growth exponents match the reference fits."""
    lines = []
    for (family, algo), ref in REFERENCE_EXPONENTS.items():
        fit = _fit(_size_means(scaling_records[family], lambda r: r[f"b_max_{algo}"]))
        assert abs(fit.exponent - ref) <= 0.15, (family, algo, fit.exponent, ref)
        lines.append(f"{family}/{algo}: {fit.exponent:.3f} vs {ref}")
    print("PASS c08 scaling exponents: " + "; ".join(lines))


def test_c09_scalability_qualitative(scaling_records):
    """Capacity stays nearly flat with size under (uc,spr) on the
    scale-free family; the cost proxy grows fast under (bc,spr) there
    but stays nearly stable under (ebc,efr) on both families."""
    ba = scaling_records["ba"]
    rc_fit = _fit(_size_means(
        ba, lambda r: r["mean_degree"] * r["n"] * (r["n"] - 1) / r["b_max_spr"]))
    assert abs(rc_fit.exponent) < 0.3, rc_fit.exponent

    bc_cost = _fit(_size_means(
        ba, lambda r: r["mean_degree"] * r["b_max_spr"]
        / ((r["n"] - 1) * (r["l_spr"] + 1))))
    assert bc_cost.exponent > 0.7, bc_cost.exponent

    lines = [f"ba rc(uc,spr) slope {rc_fit.exponent:+.3f} (<0.3)",
             f"ba cmax(bc,spr) slope {bc_cost.exponent:+.3f} (>0.7)"]
    for family in ("ba", "er"):
        ebc_cost = _fit(_size_means(
            scaling_records[family],
            lambda r: r["mean_degree"] * r["b_max_efr"]
            / ((r["n"] - 1) * (r["l_efr"] + 1))))
        assert ebc_cost.exponent < 0.4, (family, ebc_cost.exponent)
        lines.append(f"{family} cmax(ebc,efr) slope {ebc_cost.exponent:+.3f} (<0.4)")
    print("PASS c09 scalability: " + "; ".join(lines))


def test_c10_property_suites():
    """Exact invariants: conservation, FIFO, normalization, uniform
    bottleneck ratios under bc, determinism."""
    from netcap import Graph, TrafficState, gen_er
    from netcap.simulate import step

    rng = np.random.default_rng(77)

    # packet conservation + determinism
    g = gen_er(60, 123, seed=5)
    rs = build_routing(g, SPR)
    ca = assign(g, "dc")
    traces = []
    for _ in range(2):
        st = TrafficState(g, seed=99)
        trace = []
        for _ in range(150):
            before = st.theta
            stats = step(st, g, rs, ca, 4.4, check=True)
            assert st.theta - before == stats.created - stats.delivered
            trace.append(st.theta)
        traces.append(trace)
    assert traces[0] == traces[1]

    # FIFO under unit capability: head of the queue leaves first
    from netcap.capacity import CapabilityAssignment
    star = Graph(4, [(0, 1), (0, 2), (0, 3)])
    srs = build_routing(star, SPR)
    sca = CapabilityAssignment("uc", np.ones(4))
    st = TrafficState(star, seed=0, track_creation=True)
    for dest in (1, 2, 3):
        st.enqueue(0, dest)
    for expected in ([2, 3], [3], []):
        step(st, star, srs, sca, 0.0)
        assert [p.destination for p in st.queues[0]] == expected

    # normalization and uniform bc ratio on random graphs
    for _ in range(10):
        g = random_connected_graph(rng)
        rs = build_routing(g, SPR)
        profile = rs.betweenness()
        for scheme in ("uc", "dc", "bc"):
            ca = assign(g, scheme, profile if scheme == "bc" else None)
            assert ca.c.sum() == pytest.approx(2 * g.m, rel=1e-9)
        bc = assign(g, "bc", profile)
        ratios = bc.c * g.n * (g.n - 1) / profile.b
        assert np.ptp(ratios) <= 1e-9 * ratios[0]

    # generator determinism
    from netcap import gen_ws, save_edge_list
    assert save_edge_list(gen_ws(80, 0.15, seed=3)) == save_edge_list(gen_ws(80, 0.15, seed=3))
    print("PASS c10 property suites: conservation, fifo, normalization, "
          "uniform bc ratio, determinism")
