"""Request/response models for the HTTP service.

Field order here fixes JSON key order, and values flow straight from the
solver dataclasses, so identical requests serialize to identical bytes.
"""
from __future__ import annotations

from typing import Any, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field


class ComplexValue(BaseModel):
    model_config = ConfigDict(extra="forbid")

    re: float
    im: float

    @classmethod
    def of(cls, z: complex) -> "ComplexValue":
        return cls(re=float(z.real), im=float(z.imag))

    def to_complex(self) -> complex:
        return complex(self.re, self.im)


class MatrixPayload(BaseModel):
    """Inline matrix document, same shape as the on-disk JSON format."""

    model_config = ConfigDict(extra="allow")

    name: str = "matrix"
    dim: Optional[int] = None
    entries: List[List[Any]]


# A matrix is addressed either by builtin name or by an inline payload.
MatrixSource = Union[str, MatrixPayload]


class SolverOptions(BaseModel):
    model_config = ConfigDict(extra="forbid")

    starts: int = Field(default=4, ge=1, description="restarts per matrix dimension")
    layers: Optional[int] = Field(default=None, ge=1)
    seed: int = 0
    cluster_tol: float = Field(default=1e-3, gt=0.0)
    shots: Optional[int] = Field(default=None, ge=1)
    tol: Optional[float] = Field(default=None, gt=0.0)
    max_iter: Optional[int] = Field(default=None, ge=1)
    threads: Optional[int] = Field(default=None, ge=1)


class SolveRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    matrix: MatrixSource
    options: SolverOptions = SolverOptions()


class EigenpairModel(BaseModel):
    eigenvalue: ComplexValue
    resonance_energy: float
    gamma: float
    variance: float
    residual: float
    multiplicity_hits: int
    oracle_distance: Optional[float]


class SolveResponse(BaseModel):
    matrix_name: str
    dim: int
    n_qubits: int
    layers: int
    starts: int
    kept: int
    master_seed: int
    cluster_tol: float
    threshold: float
    eigenpairs: List[EigenpairModel]
    oracle_eigenvalues: Optional[List[ComplexValue]]


class SweepRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    matrix: MatrixSource
    grid: List[float] = Field(min_length=1)
    options: SolverOptions = SolverOptions()


class SweepEntryModel(BaseModel):
    init_angle: float
    eigenvalue: ComplexValue
    variance: float


class SweepResponse(BaseModel):
    matrix_name: str
    entries: List[SweepEntryModel]


class LandscapeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    matrix: MatrixSource
    axes: Union[str, int, List[int]] = "REDUCED_2PARAM"
    resolution: int = Field(default=101, ge=2)
    layers: Optional[int] = Field(default=None, ge=1)


class LandscapeResponse(BaseModel):
    axes_kind: str
    axis_indices: List[int]
    thetas: List[float]
    costs: List[Any]  # flat list (one axis) or list of rows (two axes)
    eig_real: Optional[List[float]]


class OracleRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    matrix: MatrixSource
    want_vectors: bool = False


class OracleResponse(BaseModel):
    eigenvalues: List[ComplexValue]
    eigenvectors: Optional[List[List[ComplexValue]]]  # unit-norm columns
    residuals: Optional[List[float]]


class CompareRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    matrix: MatrixSource
    options: SolverOptions = SolverOptions()


class TermMetricsModel(BaseModel):
    h_terms: int
    k_terms: int
    h2_terms: int
    k2_terms: int
    commutator_terms: int
    plain_strings: int
    variance_strings: int
    quadratic_bound_ok: bool


class CompareResponse(BaseModel):
    matrix_name: str
    hermitian: bool
    vqe_value: Optional[float]
    vqe_evaluations: Optional[int]
    vqe_note: Optional[str]
    rvvqe_eigenvalues: List[ComplexValue]
    rvvqe_best_cost: float
    rvvqe_evaluations: int
    metrics: TermMetricsModel


class TraceRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    matrix: MatrixSource
    runs: int = Field(default=5, ge=1)
    options: SolverOptions = SolverOptions()


class TracePoint(BaseModel):
    iteration: int
    cost: float


class TraceSeries(BaseModel):
    final_cost: float
    converged: bool
    points: List[TracePoint]


class TraceResponse(BaseModel):
    matrix_name: str
    series: List[TraceSeries]


class MatrixInfo(BaseModel):
    name: str
    dim: int
    hermitian: bool


class MatricesResponse(BaseModel):
    matrices: List[MatrixInfo]


class ServiceInfo(BaseModel):
    name: str
    version: str


class ErrorBody(BaseModel):
    error: str
    detail: str
