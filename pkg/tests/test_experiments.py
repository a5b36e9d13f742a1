"""Batch-evaluation harness: table rows, means, fits, self-consistency."""

import numpy as np
import pytest

from netcap import SweepError, fit_power_law, reproduce_tables, scaling_sweep
from netcap.experiments import (
    CSV_COLUMNS,
    TABLE_COMBOS,
    benchmark_spec,
    evaluate_instance,
    instance_seed,
)


def test_fit_power_law_exact():
    fit = fit_power_law([(10, 200), (100, 2000), (1000, 20000)])
    assert fit.exponent == pytest.approx(1.0, abs=1e-12)
    assert 10 ** fit.intercept == pytest.approx(20.0, rel=1e-9)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)


def test_fit_power_law_validates():
    with pytest.raises(ValueError):
        fit_power_law([(10, 100)])
    with pytest.raises(ValueError):
        fit_power_law([(10, 1), (20, -1), (30, 2)])


def test_scaling_sweep_self_quantity():
    fit = scaling_sweep("er", [100, 200, 400], "n", n_instances=1, seed=0)
    assert fit.exponent == pytest.approx(1.0, abs=1e-9)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)


def test_scaling_sweep_smoke():
    fit = scaling_sweep("ba", [100, 200, 400], "b_max_spr", n_instances=2, seed=1)
    assert 1.0 < fit.exponent < 2.5
    assert all(y > 0 for _, y in fit.points)


def test_scaling_sweep_rejects_bad_quantity():
    with pytest.raises(ValueError):
        scaling_sweep("ba", [100, 200, 400], "rc:xx,spr", n_instances=1)
    with pytest.raises(ValueError):
        scaling_sweep("ba", [100, 200], "n", n_instances=1)


def test_instance_seed_stable():
    assert instance_seed(7, "ba", 3) == instance_seed(7, "ba", 3)
    assert instance_seed(7, "ba", 3) != instance_seed(7, "er", 3)
    assert instance_seed(7, "ba", 3) != instance_seed(8, "ba", 3)


def test_evaluate_instance_row_consistency():
    rows = evaluate_instance(benchmark_spec("er", n=300, seed=11))
    assert len(rows) == len(TABLE_COMBOS)
    by_combo = {(r.scheme, r.routing): r for r in rows}
    # closed-form self-consistency of the rows
    uc_spr = by_combo[("uc", "spr")]
    mean_deg = 2 * uc_spr.m / uc_spr.n
    n = uc_spr.n
    assert uc_spr.rc_analytic == pytest.approx(
        mean_deg * n * (n - 1) / uc_spr.b_max, rel=1e-9)
    bc_spr = by_combo[("bc", "spr")]
    assert bc_spr.rc_analytic == pytest.approx(
        mean_deg * n / (bc_spr.l_spr + 1), rel=1e-9)
    ebc_efr = by_combo[("ebc", "efr")]
    assert ebc_efr.rc_analytic == pytest.approx(
        mean_deg * n / (ebc_efr.l_gamma + 1), rel=1e-9)
    # spr rows carry the spr length in both columns
    assert uc_spr.l_gamma == uc_spr.l_spr


def test_reproduce_tables_ring_constant_row():
    result = reproduce_tables(families=["ring"], n_instances=3, seed=0)
    assert len(result.rows) == len(TABLE_COMBOS)  # deterministic family: one instance
    values = [r.rc_analytic for r in result.rows]
    assert np.ptp(values) <= 1e-9 * values[0]
    assert values[0] == pytest.approx(4 * 1225 / 154.5, rel=1e-9)


def test_reproduce_tables_means_and_csv():
    result = reproduce_tables(families=["er"], combos=[("uc", "spr")],
                              n_instances=2, seed=3)
    means = result.means()
    key = ("er", "uc", "spr")
    assert key in means and means[key]["instances"] == 2
    csv_text = result.to_csv()
    lines = csv_text.strip().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 3


def test_reproduce_tables_threads_match_serial():
    serial = reproduce_tables(families=["er"], combos=[("uc", "spr")],
                              n_instances=2, seed=5, threads=1)
    parallel = reproduce_tables(families=["er"], combos=[("uc", "spr")],
                                n_instances=2, seed=5, threads=2)
    assert serial.to_csv() == parallel.to_csv()


def test_reproduce_tables_rejects_unknown_family():
    with pytest.raises(ValueError):
        reproduce_tables(families=["mesh"], n_instances=1)


def test_sweep_error_reports_completed_sizes():
    # lattice sizes must be perfect squares; 500 is not
    with pytest.raises((SweepError, ValueError)):
        scaling_sweep("lattice", [400, 500, 900], "l_spr", n_instances=1)


def test_reproduce_with_simulation_small():
    result = reproduce_tables(
        families=["er"], combos=[("uc", "spr")], n_instances=1, seed=2, n=120,
        include_simulation=True,
        sim_options={"warmup": 300, "delta_t": 50, "n_windows": 5,
                     "decision_seeds": 2})
    row = result.rows[0]
    assert row.rc_sim is not None
    assert abs(row.rc_sim - row.rc_analytic) / row.rc_analytic < 0.5
