"""High-level drivers: multi-start spectrum recovery, angle sweeps, landscape
grids, per-iteration traces, and the variance-vs-energy comparison report.

Restarts are embarrassingly parallel over shared immutable inputs.  Each
restart derives its RNG from (master_seed, restart_index), so serial and
threaded execution produce identical results; the merge step is ordered by
restart index.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Union

import numpy as np

from .circuits import FULL_ZYZ, REDUCED_2PARAM, AnsatzSpec, build_ansatz, default_layers
from .cost import EnergyObjective, VarianceObjective
from .eigensolver import eigen
from .errors import ConvergenceFailure, NoConvergedRuns, NotHermitianInput
from .matrices import MatrixRecord, cartesian_decompose, n_qubits_for
from .optimize import OptimizationRun, OptimizerConfig, optimize
from .pauli import MeasurementCostReport, term_metrics
from .simulator import make_preparer

TWO_PI = 2.0 * np.pi

# Variance floor a run must reach to count as converged, per matrix dimension.
# Machine precision is attainable at 2x2; larger problems accumulate round-off
# in the squared observables, so the bar loosens with size.
_THRESHOLDS = {2: 1e-12, 4: 1e-10, 8: 1e-6}

# The polish stage keeps restarting with shrinking simplices until the cost
# drops below this, well under the acceptance bar for the dimension.
_POLISH_TARGETS = {2: 1e-13, 4: 1e-13, 8: 1e-10}


def convergence_threshold_for(dim: int) -> float:
    if dim <= 2:
        return _THRESHOLDS[2]
    if dim <= 4:
        return _THRESHOLDS[4]
    return _THRESHOLDS[8]


def config_for_dim(dim: int) -> OptimizerConfig:
    """Optimizer settings tuned per matrix dimension."""
    if dim <= 2:
        key = 2
    elif dim <= 4:
        key = 4
    else:
        key = 8
    return OptimizerConfig(
        convergence_threshold=_THRESHOLDS[key],
        polish_target=_POLISH_TARGETS[key],
    )


def resolve_threads(explicit: Optional[int] = None) -> int:
    """Worker count: explicit value, else NONHERM_VVQE_THREADS, else 1."""
    if explicit is not None:
        return max(1, int(explicit))
    raw = os.environ.get("NONHERM_VVQE_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class SolveConfig:
    """Knobs shared by the multi-start, sweep, trace, and compare drivers."""

    starts_per_dim: int = 4  # restarts = starts_per_dim * dim
    layers: Optional[int] = None  # None -> default_layers(dim)
    master_seed: int = 0
    cluster_tol: float = 1e-3  # complex-modulus clustering radius
    shots: Optional[int] = None  # None -> exact expectation backend
    threads: Optional[int] = None  # None -> NONHERM_VVQE_THREADS
    tolerance: Optional[float] = None  # simplex cost-spread stop, override
    max_iterations: Optional[int] = None
    with_oracle: bool = True
    record_traces: bool = False


@dataclass(frozen=True)
class Eigenpair:
    eigenvalue: complex
    resonance_energy: float  # Re(eigenvalue)
    gamma: float  # -2 * Im(eigenvalue), decay rate of the resonance
    variance: float
    residual: float
    multiplicity_hits: int
    oracle_distance: Optional[float]


@dataclass(frozen=True)
class SpectrumResult:
    matrix_name: str
    dim: int
    n_qubits: int
    layers: int
    starts: int
    kept: int
    master_seed: int
    cluster_tol: float
    threshold: float
    eigenpairs: tuple
    oracle_eigenvalues: Optional[tuple]
    runs: Optional[tuple] = None  # OptimizationRun per restart (traces mode)


@dataclass(frozen=True)
class SweepEntry:
    init_angle: float
    eigenvalue: complex
    variance: float


@dataclass(frozen=True)
class SweepResult:
    matrix_name: str
    entries: tuple


@dataclass(frozen=True)
class LandscapeGrid:
    """Cost samples over [0, 2pi] per axis; costs[i, j] pairs thetas[i] on the
    first axis with thetas[j] on the second.  One-axis grids also carry the
    Re<M> curve so eigenvalue extrema can be lined up against cost minima."""

    axes_kind: str  # "reduced" or "full"
    axis_indices: tuple
    thetas: np.ndarray
    costs: np.ndarray
    eig_real: Optional[np.ndarray] = None


@dataclass(frozen=True)
class CompareReport:
    """Variance minimization vs plain energy minimization on one matrix.

    Evaluation counts are those of the run that produced the reported value,
    making the two columns directly comparable.
    """

    matrix_name: str
    hermitian: bool
    vqe_value: Optional[float]
    vqe_evaluations: Optional[int]
    vqe_note: Optional[str]
    rvvqe_eigenvalues: tuple
    rvvqe_best_cost: float
    rvvqe_evaluations: int
    metrics: MeasurementCostReport


def _resolved_optimizer(dim: int, config: SolveConfig) -> OptimizerConfig:
    opt = config_for_dim(dim)
    if config.tolerance is not None:
        opt = replace(opt, tolerance=config.tolerance)
    if config.max_iterations is not None:
        opt = replace(opt, max_iterations=config.max_iterations)
    return opt


def _initial_params(master_seed: int, index: int, n_params: int) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence([master_seed, index]))
    return rng.uniform(0.0, TWO_PI, n_params)


def _sampled_cost_fn(objective, ansatz, master_seed: int, index: int, shots: int):
    """Shot-noise objective with a deterministic per-evaluation seed stream."""
    preparer = make_preparer(ansatz)
    counter = [0]

    def f(params: np.ndarray) -> float:
        counter[0] += 1
        seed = int(
            np.random.SeedSequence([master_seed, index, counter[0]]).generate_state(1)[0]
        )
        return objective.value_sampled(preparer(params), shots, seed)

    return f


def _run_restarts(
    objective,
    ansatz: AnsatzSpec,
    indices: Sequence[int],
    config: SolveConfig,
    opt: OptimizerConfig,
) -> list:
    """One optimization per restart index, merged in index order."""

    def one(index: int) -> OptimizationRun:
        init = _initial_params(config.master_seed, index, ansatz.n_params)
        cost_fn = None
        if config.shots is not None:
            cost_fn = _sampled_cost_fn(
                objective, ansatz, config.master_seed, index, config.shots
            )
        return optimize(
            objective,
            ansatz,
            init,
            opt,
            record_trace=config.record_traces,
            cost_fn=cost_fn,
        )

    workers = resolve_threads(config.threads)
    if workers == 1 or len(indices) <= 1:
        return [one(i) for i in indices]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(one, i) for i in indices]
        return [f.result() for f in futures]


def _cluster_runs(kept: list, tol: float) -> list:
    """Group runs whose eigenvalues sit within tol of a cluster's best run."""
    clusters: list[dict] = []
    for run in kept:
        for cluster in clusters:
            if abs(run.eigenvalue - cluster["best"].eigenvalue) <= tol:
                cluster["members"].append(run)
                if run.final_cost < cluster["best"].final_cost:
                    cluster["best"] = run
                break
        else:
            clusters.append({"best": run, "members": [run]})
    # representatives can drift toward each other as better members arrive
    merged = True
    while merged:
        merged = False
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                if abs(
                    clusters[i]["best"].eigenvalue - clusters[j]["best"].eigenvalue
                ) <= tol:
                    clusters[i]["members"].extend(clusters[j]["members"])
                    if clusters[j]["best"].final_cost < clusters[i]["best"].final_cost:
                        clusters[i]["best"] = clusters[j]["best"]
                    del clusters[j]
                    merged = True
                    break
            if merged:
                break
    return clusters


def _oracle_values(record: MatrixRecord) -> Optional[tuple]:
    try:
        return tuple(complex(z) for z in eigen(record.matrix).eigenvalues)
    except ConvergenceFailure:
        return None


def multi_start(record: MatrixRecord, config: SolveConfig = SolveConfig()) -> SpectrumResult:
    """Recover the spectrum by optimizing from starts_per_dim * dim random
    initializations and clustering the converged eigenvalue estimates.

    Raises NoConvergedRuns when no restart reaches the dimension's variance
    threshold (with the shot backend this is the expected outcome unless the
    threshold is loosened to the noise floor).
    """
    if config.starts_per_dim < 1:
        raise ValueError(f"starts_per_dim must be >= 1, got {config.starts_per_dim}")
    dim = record.matrix.shape[0]
    n = n_qubits_for(dim)
    layers = config.layers if config.layers is not None else default_layers(dim)
    ansatz = build_ansatz(n, layers, FULL_ZYZ)
    objective = VarianceObjective(cartesian_decompose(record.matrix))
    opt = _resolved_optimizer(dim, config)
    n_starts = config.starts_per_dim * dim
    runs = _run_restarts(objective, ansatz, range(n_starts), config, opt)
    kept = [r for r in runs if r.converged]
    if not kept:
        best = min((r.final_cost for r in runs), default=float("inf"))
        raise NoConvergedRuns(
            f"none of {n_starts} restarts reached variance "
            f"{opt.convergence_threshold:g} on {record.name!r} (best {best:.3e})"
        )
    clusters = _cluster_runs(kept, config.cluster_tol)
    oracle_vals = _oracle_values(record) if config.with_oracle else None
    pairs = []
    for cluster in clusters:
        best = cluster["best"]
        lam = complex(best.eigenvalue)
        distance = None
        if oracle_vals:
            distance = min(abs(lam - mu) for mu in oracle_vals)
        pairs.append(
            Eigenpair(
                eigenvalue=lam,
                resonance_energy=lam.real,
                gamma=-2.0 * lam.imag,
                variance=best.final_cost,
                residual=best.residual,
                multiplicity_hits=len(cluster["members"]),
                oracle_distance=distance,
            )
        )
    pairs.sort(key=lambda p: (-p.eigenvalue.real, -p.eigenvalue.imag))
    return SpectrumResult(
        matrix_name=record.name,
        dim=dim,
        n_qubits=n,
        layers=layers,
        starts=n_starts,
        kept=len(kept),
        master_seed=config.master_seed,
        cluster_tol=config.cluster_tol,
        threshold=opt.convergence_threshold,
        eigenpairs=tuple(pairs),
        oracle_eigenvalues=oracle_vals,
        runs=tuple(runs) if config.record_traces else None,
    )


def angle_sweep(
    record: MatrixRecord, grid: Sequence[float], config: SolveConfig = SolveConfig()
) -> SweepResult:
    """Optimize once per grid angle with every parameter initialized to it.

    Which eigenvalue a given angle lands on is a property of its basin of
    attraction; sweep output is meaningful as spectrum membership, one row
    per angle.
    """
    angles = [float(a) for a in grid]
    if not angles:
        raise ValueError("sweep grid must contain at least one angle")
    if not all(np.isfinite(angles)):
        raise ValueError("sweep angles must be finite")
    angles = [a if 0.0 <= a <= TWO_PI else a % TWO_PI for a in angles]
    dim = record.matrix.shape[0]
    n = n_qubits_for(dim)
    layers = config.layers if config.layers is not None else default_layers(dim)
    ansatz = build_ansatz(n, layers, FULL_ZYZ)
    objective = VarianceObjective(cartesian_decompose(record.matrix))
    opt = _resolved_optimizer(dim, config)
    entries = []
    for theta in sorted(angles):
        run = optimize(
            objective,
            ansatz,
            np.full(ansatz.n_params, theta),
            opt,
            record_trace=False,
        )
        entries.append(
            SweepEntry(
                init_angle=theta,
                eigenvalue=complex(run.eigenvalue),
                variance=run.final_cost,
            )
        )
    return SweepResult(matrix_name=record.name, entries=tuple(entries))


def trace_runs(
    record: MatrixRecord, n_runs: int, config: SolveConfig = SolveConfig()
) -> list:
    """n_runs independent optimizations with per-iteration cost traces kept."""
    if n_runs < 1:
        raise ValueError(f"n_runs must be >= 1, got {n_runs}")
    dim = record.matrix.shape[0]
    n = n_qubits_for(dim)
    layers = config.layers if config.layers is not None else default_layers(dim)
    ansatz = build_ansatz(n, layers, FULL_ZYZ)
    objective = VarianceObjective(cartesian_decompose(record.matrix))
    opt = _resolved_optimizer(dim, config)
    traced = replace(config, record_traces=True)
    return _run_restarts(objective, ansatz, range(n_runs), traced, opt)


AxesSpec = Union[str, int, Sequence[int]]


def landscape_grid(
    record: MatrixRecord,
    axes: AxesSpec = REDUCED_2PARAM,
    resolution: int = 101,
    layers: Optional[int] = None,
) -> LandscapeGrid:
    """Cost samples on a uniform [0, 2pi] grid over one or two parameters.

    axes is either the REDUCED_2PARAM variant name (two-parameter single-qubit
    scan), a single parameter index of the full ansatz (one-axis mode, other
    parameters held at zero), or a pair of such indices.
    """
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    dim = record.matrix.shape[0]
    n = n_qubits_for(dim)
    objective = VarianceObjective(cartesian_decompose(record.matrix))
    thetas = np.linspace(0.0, TWO_PI, resolution)

    if isinstance(axes, str):
        if axes != REDUCED_2PARAM:
            raise ValueError(f"unknown axes spec {axes!r}")
        ansatz = build_ansatz(n, 1, REDUCED_2PARAM)
        preparer = make_preparer(ansatz)
        costs = np.empty((resolution, resolution))
        for i, t1 in enumerate(thetas):
            for j, t2 in enumerate(thetas):
                costs[i, j] = objective.value(preparer(np.array([t1, t2])))
        return LandscapeGrid(
            axes_kind="reduced", axis_indices=(), thetas=thetas, costs=costs
        )

    indices = (axes,) if isinstance(axes, (int, np.integer)) else tuple(axes)
    if len(indices) not in (1, 2):
        raise ValueError("axes must name one or two parameter indices")
    ansatz = build_ansatz(n, layers if layers is not None else default_layers(dim))
    for idx in indices:
        if not 0 <= idx < ansatz.n_params:
            raise ValueError(
                f"parameter index {idx} out of range for {ansatz.n_params} parameters"
            )
    if len(indices) == 2 and indices[0] == indices[1]:
        raise ValueError("the two axes must be distinct parameter indices")
    preparer = make_preparer(ansatz)
    params = np.zeros(ansatz.n_params)
    if len(indices) == 1:
        costs = np.empty(resolution)
        eig_real = np.empty(resolution)
        for i, t in enumerate(thetas):
            params[indices[0]] = t
            state = preparer(params)
            costs[i] = objective.value(state)
            eig_real[i] = objective.eigenvalue(state).real
        return LandscapeGrid(
            axes_kind="full",
            axis_indices=indices,
            thetas=thetas,
            costs=costs,
            eig_real=eig_real,
        )
    costs = np.empty((resolution, resolution))
    for i, t1 in enumerate(thetas):
        params[indices[0]] = t1
        for j, t2 in enumerate(thetas):
            params[indices[1]] = t2
            costs[i, j] = objective.value(preparer(params))
    return LandscapeGrid(
        axes_kind="full", axis_indices=indices, thetas=thetas, costs=costs
    )


def compare(record: MatrixRecord, config: SolveConfig = SolveConfig()) -> CompareReport:
    """Run variance minimization and, when the matrix is Hermitian, plain
    energy minimization, side by side with measurement-cost metrics."""
    pair = cartesian_decompose(record.matrix)
    objective = VarianceObjective(pair)
    metrics = term_metrics(objective.pauli_h, objective.pauli_k)

    traced = replace(config, record_traces=True)
    spectrum = multi_start(record, traced)
    best_run = min(
        (r for r in spectrum.runs if r.converged), key=lambda r: r.final_cost
    )
    rvvqe_eigenvalues = tuple(p.eigenvalue for p in spectrum.eigenpairs)

    vqe_value = None
    vqe_evaluations = None
    vqe_note = None
    try:
        energy = EnergyObjective(pair)
    except NotHermitianInput:
        energy = None
        vqe_note = "Only Hermitian matrices"
    if energy is not None:
        dim = record.matrix.shape[0]
        ansatz = build_ansatz(
            n_qubits_for(dim),
            config.layers if config.layers is not None else default_layers(dim),
            FULL_ZYZ,
        )
        opt = _resolved_optimizer(dim, config)
        runs = _run_restarts(
            energy, ansatz, range(config.starts_per_dim * dim), config, opt
        )
        best = min(runs, key=lambda r: r.final_cost)
        vqe_value = best.final_cost
        vqe_evaluations = best.nfev
    return CompareReport(
        matrix_name=record.name,
        hermitian=energy is not None,
        vqe_value=vqe_value,
        vqe_evaluations=vqe_evaluations,
        vqe_note=vqe_note,
        rvvqe_eigenvalues=rvvqe_eigenvalues,
        rvvqe_best_cost=best_run.final_cost,
        rvvqe_evaluations=best_run.nfev,
        metrics=metrics,
    )
