"""Variational recovery of complex spectra for non-Hermitian matrices.

A matrix M splits as M = H + iK with both parts Hermitian; a parametrized
circuit state that zeroes the variance of M is an eigenstate, and <H> + i<K>
there is the (generally complex) eigenvalue.  The package simulates the
circuits exactly, optimizes the variance with a derivative-free simplex
method, and verifies every result against an independent dense eigensolver.
"""

from .circuits import FULL_ZYZ, REDUCED_2PARAM, AnsatzSpec, build_ansatz, default_layers
from .cost import (
    CostReport,
    EnergyObjective,
    VarianceObjective,
    cost,
    extract_eigenvalue,
    standard_vqe_cost,
)
from .drivers import (
    CompareReport,
    Eigenpair,
    LandscapeGrid,
    SolveConfig,
    SpectrumResult,
    SweepEntry,
    SweepResult,
    angle_sweep,
    compare,
    config_for_dim,
    convergence_threshold_for,
    landscape_grid,
    multi_start,
    resolve_threads,
    trace_runs,
)
from .eigensolver import MatchReport, OracleSpectrum, eigen, spectrum_match
from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    DimMismatch,
    InvalidVariant,
    NoConvergedRuns,
    NonFinite,
    NonPowerOfTwoDim,
    NotHermitian,
    NotHermitianInput,
    ParamCountMismatch,
    ParseError,
    QubitCountMismatch,
    UnknownMatrix,
    VvqeError,
)
from .matrices import (
    BUILTIN_NAMES,
    HermitianPair,
    MatrixRecord,
    builtin,
    cartesian_decompose,
    is_hermitian,
    load_matrix,
    n_qubits_for,
    record_from_payload,
    record_to_payload,
    save_matrix,
)
from .optimize import OptimizationRun, OptimizerConfig, nelder_mead, optimize
from .pauli import (
    MeasurementCostReport,
    PauliString,
    PauliSum,
    PauliTerm,
    commutator_observable,
    decompose_pauli,
    multiply_strings,
    multiply_sums,
    square_sum,
    term_metrics,
    to_matrix,
)
from .simulator import (
    expectation_complex,
    expectation_real,
    make_preparer,
    prepare,
    sample_expectation,
)

__version__ = "0.1.0"

__all__ = [
    "AnsatzSpec",
    "BUILTIN_NAMES",
    "CompareReport",
    "ConvergenceFailure",
    "CostReport",
    "DimMismatch",
    "DimensionMismatch",
    "Eigenpair",
    "EnergyObjective",
    "FULL_ZYZ",
    "HermitianPair",
    "InvalidVariant",
    "LandscapeGrid",
    "MatchReport",
    "MatrixRecord",
    "MeasurementCostReport",
    "NoConvergedRuns",
    "NonFinite",
    "NonPowerOfTwoDim",
    "NotHermitian",
    "NotHermitianInput",
    "OptimizationRun",
    "OptimizerConfig",
    "OracleSpectrum",
    "ParamCountMismatch",
    "ParseError",
    "PauliString",
    "PauliSum",
    "PauliTerm",
    "QubitCountMismatch",
    "REDUCED_2PARAM",
    "SolveConfig",
    "SpectrumResult",
    "SweepEntry",
    "SweepResult",
    "UnknownMatrix",
    "VarianceObjective",
    "VvqeError",
    "angle_sweep",
    "build_ansatz",
    "builtin",
    "cartesian_decompose",
    "commutator_observable",
    "compare",
    "config_for_dim",
    "convergence_threshold_for",
    "cost",
    "decompose_pauli",
    "default_layers",
    "eigen",
    "expectation_complex",
    "expectation_real",
    "extract_eigenvalue",
    "is_hermitian",
    "landscape_grid",
    "load_matrix",
    "make_preparer",
    "multi_start",
    "multiply_strings",
    "multiply_sums",
    "n_qubits_for",
    "nelder_mead",
    "optimize",
    "prepare",
    "record_from_payload",
    "record_to_payload",
    "resolve_threads",
    "sample_expectation",
    "save_matrix",
    "spectrum_match",
    "square_sum",
    "standard_vqe_cost",
    "term_metrics",
    "to_matrix",
    "trace_runs",
]
