"""High-level drivers: multi-start solves, sweeps, landscapes, comparisons."""

from types import SimpleNamespace

import numpy as np
import pytest

from nonherm_vvqe import (
    NoConvergedRuns,
    SolveConfig,
    angle_sweep,
    compare,
    eigen,
    landscape_grid,
    multi_start,
    trace_runs,
)
from nonherm_vvqe.drivers import (
    _cluster_runs,
    _initial_params,
    config_for_dim,
    convergence_threshold_for,
    resolve_threads,
)
from nonherm_vvqe.matrices import builtin, record_from_payload

TWO_PI = 2 * np.pi


def test_per_dimension_thresholds():
    assert convergence_threshold_for(2) == 1e-12
    assert convergence_threshold_for(4) == 1e-10
    assert convergence_threshold_for(8) == 1e-6
    assert convergence_threshold_for(16) == 1e-6
    assert config_for_dim(2).convergence_threshold == 1e-12
    assert config_for_dim(2).polish_target == 1e-13
    assert config_for_dim(4).polish_target == 1e-13
    assert config_for_dim(8).polish_target == 1e-10


def test_resolve_threads(monkeypatch):
    monkeypatch.delenv("NONHERM_VVQE_THREADS", raising=False)
    assert resolve_threads() == 1
    assert resolve_threads(5) == 5
    assert resolve_threads(0) == 1
    monkeypatch.setenv("NONHERM_VVQE_THREADS", "7")
    assert resolve_threads() == 7
    assert resolve_threads(2) == 2  # explicit beats the environment
    monkeypatch.setenv("NONHERM_VVQE_THREADS", "not-a-number")
    assert resolve_threads() == 1


def test_initial_params_deterministic_in_range():
    a = _initial_params(0, 3, 12)
    b = _initial_params(0, 3, 12)
    c = _initial_params(1, 3, 12)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert np.all((a >= 0) & (a < TWO_PI))


def test_multi_start_recovers_both_eigenvalues():
    record = builtin("M1")
    result = multi_start(record, SolveConfig(starts_per_dim=4, master_seed=7))
    assert result.matrix_name == "M1"
    assert (result.dim, result.n_qubits, result.layers) == (2, 1, 1)
    assert result.starts == 8
    assert 1 <= result.kept <= 8
    assert result.threshold == 1e-12
    assert result.runs is None
    assert len(result.eigenpairs) == 2
    assert sum(p.multiplicity_hits for p in result.eigenpairs) == result.kept
    reals = [p.eigenvalue.real for p in result.eigenpairs]
    assert reals == sorted(reals, reverse=True)
    truth = eigen(record.matrix).eigenvalues
    for pair in result.eigenpairs:
        assert pair.variance <= 1e-12
        assert pair.resonance_energy == pair.eigenvalue.real
        assert pair.gamma == -2.0 * pair.eigenvalue.imag
        assert pair.oracle_distance is not None and pair.oracle_distance <= 1e-6
        assert min(abs(pair.eigenvalue - mu) for mu in truth) <= 1e-6
    assert result.oracle_eigenvalues is not None
    assert len(result.oracle_eigenvalues) == 2


def test_multi_start_on_user_supplied_matrix():
    record = record_from_payload(
        {"name": "two-level", "entries": [[1, 0], [0, 2]]}
    )
    result = multi_start(record, SolveConfig(starts_per_dim=3, master_seed=1))
    assert result.matrix_name == "two-level"
    found = sorted(p.eigenvalue.real for p in result.eigenpairs)
    assert found == pytest.approx([1.0, 2.0], abs=1e-6)
    assert all(abs(p.eigenvalue.imag) <= 1e-8 for p in result.eigenpairs)


def test_multi_start_reports_failure_to_converge():
    with pytest.raises(NoConvergedRuns) as err:
        multi_start(
            builtin("M1"), SolveConfig(starts_per_dim=1, max_iterations=2)
        )
    assert "restart" in str(err.value)


def test_multi_start_thread_count_does_not_change_results():
    base = SolveConfig(starts_per_dim=3, master_seed=5)
    serial = multi_start(builtin("M1"), base)
    threaded = multi_start(
        builtin("M1"), SolveConfig(starts_per_dim=3, master_seed=5, threads=3)
    )
    assert serial.eigenpairs == threaded.eigenpairs
    assert serial.kept == threaded.kept


def test_multi_start_repeatable():
    config = SolveConfig(starts_per_dim=2, master_seed=9)
    first = multi_start(builtin("M1"), config)
    second = multi_start(builtin("M1"), config)
    assert first.eigenpairs == second.eigenpairs


def test_cluster_runs_groups_and_merges():
    run = lambda z, cost: SimpleNamespace(eigenvalue=z, final_cost=cost)
    # plain grouping: two nearby values and one far away
    clusters = _cluster_runs(
        [run(1.0, 1e-10), run(1.0 + 1e-5, 1e-12), run(5.0, 1e-11)], tol=1e-3
    )
    assert sorted(len(c["members"]) for c in clusters) == [1, 2]
    big = next(c for c in clusters if len(c["members"]) == 2)
    assert big["best"].final_cost == 1e-12
    # representative drift: two initially separate clusters end up within
    # tolerance once a better member arrives, and the merge pass unifies them
    drift = _cluster_runs(
        [run(0.0, 1e-3), run(0.0015, 1e-9), run(0.0008, 1e-12)], tol=1e-3
    )
    assert len(drift) == 1
    assert drift[0]["best"].final_cost == 1e-12
    assert len(drift[0]["members"]) == 3


def test_angle_sweep_orders_and_wraps_angles():
    record = builtin("F")
    result = angle_sweep(record, [6.0, 0.1, 7.0], SolveConfig(master_seed=2))
    assert result.matrix_name == "F"
    angles = [e.init_angle for e in result.entries]
    assert angles == sorted(angles)
    assert angles[1] == pytest.approx(7.0 % TWO_PI)
    truth = eigen(record.matrix).eigenvalues
    for entry in result.entries:
        assert entry.variance <= 1e-10
        assert min(abs(entry.eigenvalue - mu) for mu in truth) <= 1e-6


def test_angle_sweep_rejects_bad_grids():
    with pytest.raises(ValueError):
        angle_sweep(builtin("F"), [])
    with pytest.raises(ValueError):
        angle_sweep(builtin("F"), [0.1, np.nan])


def test_sweep_lands_on_spectrum_members_4x4():
    record = builtin("M2")
    result = angle_sweep(record, [0.1, 0.5, 1.1, 2.0], SolveConfig(master_seed=0))
    truth = eigen(record.matrix).eigenvalues
    for entry in result.entries:
        assert entry.variance <= 1e-10
        assert min(abs(entry.eigenvalue - mu) for mu in truth) <= 1e-6


def test_landscape_reduced_grid_shape_and_floor():
    grid = landscape_grid(builtin("M1"), axes="REDUCED_2PARAM", resolution=21)
    assert grid.axes_kind == "reduced"
    assert grid.axis_indices == ()
    assert grid.costs.shape == (21, 21)
    assert grid.thetas[0] == 0.0
    assert grid.thetas[-1] == pytest.approx(TWO_PI)
    assert grid.eig_real is None
    # the two-parameter single-qubit family cannot reach the eigenvectors of
    # this matrix, so the sampled cost never gets near zero
    assert grid.costs.min() > 1e-2


def test_landscape_single_axis_tracks_eigenvalues():
    record = builtin("A")
    grid = landscape_grid(record, axes=1, resolution=401)
    assert grid.axes_kind == "full"
    assert grid.axis_indices == (1,)
    assert grid.costs.shape == (401,)
    assert grid.eig_real is not None
    lo, hi = np.linalg.eigvalsh(record.matrix)
    assert grid.costs.min() <= 1e-3
    assert grid.eig_real.min() == pytest.approx(lo, abs=2e-3)
    assert grid.eig_real.max() == pytest.approx(hi, abs=2e-3)
    # cost minima sit where the energy curve hits the spectrum edges
    i_cost = int(np.argmin(grid.costs))
    i_edge = int(np.argmin(grid.eig_real))
    j_edge = int(np.argmax(grid.eig_real))
    assert min(abs(i_cost - i_edge), abs(i_cost - j_edge)) <= 1


def test_landscape_two_full_axes():
    grid = landscape_grid(builtin("M1"), axes=(0, 2), resolution=9)
    assert grid.axes_kind == "full"
    assert grid.axis_indices == (0, 2)
    assert grid.costs.shape == (9, 9)
    # both axes are Rz angles acting on |0>, which never changes the state
    assert np.ptp(grid.costs) <= 1e-12


def test_landscape_trivial_matrix_is_flat_zero():
    record = record_from_payload({"name": "scaled-identity", "entries": [[2, 0], [0, 2]]})
    grid = landscape_grid(record, axes="REDUCED_2PARAM", resolution=11)
    assert np.max(np.abs(grid.costs)) <= 1e-20


def test_landscape_rejects_bad_axes():
    record = builtin("M1")
    with pytest.raises(ValueError):
        landscape_grid(record, resolution=1)
    with pytest.raises(ValueError):
        landscape_grid(record, axes="DIAGONAL")
    with pytest.raises(ValueError):
        landscape_grid(record, axes=(0, 0))
    with pytest.raises(ValueError):
        landscape_grid(record, axes=(0, 1, 2))
    with pytest.raises(ValueError):
        landscape_grid(record, axes=99)


def test_trace_runs_returns_per_iteration_traces():
    runs = trace_runs(builtin("M1"), 3, SolveConfig(master_seed=4))
    assert len(runs) == 3
    for run in runs:
        assert len(run.cost_trace) > 0
        costs = [c for _, c in run.cost_trace]
        assert all(b <= a + 1e-15 for a, b in zip(costs, costs[1:]))
    with pytest.raises(ValueError):
        trace_runs(builtin("M1"), 0)


def test_compare_non_hermitian_skips_energy_route():
    report = compare(builtin("M1"), SolveConfig(starts_per_dim=2, master_seed=7))
    assert report.matrix_name == "M1"
    assert not report.hermitian
    assert report.vqe_value is None
    assert report.vqe_evaluations is None
    assert report.vqe_note == "Only Hermitian matrices"
    assert report.rvvqe_best_cost <= 1e-12
    assert report.rvvqe_evaluations > 0
    truth = eigen(builtin("M1").matrix).eigenvalues
    for lam in report.rvvqe_eigenvalues:
        assert min(abs(lam - mu) for mu in truth) <= 1e-6
    assert report.metrics.plain_strings == 4


def test_compare_hermitian_runs_both_routes():
    record = builtin("A")
    report = compare(record, SolveConfig(starts_per_dim=2, master_seed=3))
    assert report.hermitian
    assert report.vqe_note is None
    lam_min = float(np.min(np.linalg.eigvalsh(record.matrix)))
    assert report.vqe_value == pytest.approx(lam_min, abs=1e-6)
    assert report.vqe_evaluations > 0
    assert report.rvvqe_best_cost <= 1e-12
