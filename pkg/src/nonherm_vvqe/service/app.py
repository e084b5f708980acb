"""FastAPI application around the solver drivers.

Domain errors map onto HTTP statuses the CLI translates back into exit
codes: bad input is 400, a solve with no converged restart is 409.
"""
from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..drivers import (
    SolveConfig,
    angle_sweep,
    compare,
    landscape_grid,
    multi_start,
    trace_runs,
)
from ..eigensolver import eigen
from ..errors import ConvergenceFailure, NoConvergedRuns, VvqeError
from ..matrices import (
    BUILTIN_NAMES,
    MatrixRecord,
    builtin,
    is_hermitian,
    record_from_payload,
)
from . import schemas

_CONFLICT_ERRORS = (NoConvergedRuns, ConvergenceFailure)


def _resolve_record(source) -> MatrixRecord:
    if isinstance(source, str):
        return builtin(source)
    return record_from_payload(source.model_dump())


def _solve_config(opts: schemas.SolverOptions) -> SolveConfig:
    return SolveConfig(
        starts_per_dim=opts.starts,
        layers=opts.layers,
        master_seed=opts.seed,
        cluster_tol=opts.cluster_tol,
        shots=opts.shots,
        threads=opts.threads,
        tolerance=opts.tol,
        max_iterations=opts.max_iter,
    )


def create_app() -> FastAPI:
    app = FastAPI(title="nonherm-vvqe", version=__version__)

    @app.exception_handler(VvqeError)
    async def _domain_error(request: Request, exc: VvqeError) -> JSONResponse:
        status = 409 if isinstance(exc, _CONFLICT_ERRORS) else 400
        body = schemas.ErrorBody(error=type(exc).__name__, detail=str(exc))
        return JSONResponse(status_code=status, content=body.model_dump())

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError) -> JSONResponse:
        body = schemas.ErrorBody(error="ValueError", detail=str(exc))
        return JSONResponse(status_code=400, content=body.model_dump())

    @app.get("/", response_model=schemas.ServiceInfo)
    async def info() -> schemas.ServiceInfo:
        return schemas.ServiceInfo(name="nonherm-vvqe", version=__version__)

    @app.get("/matrices", response_model=schemas.MatricesResponse)
    async def matrices() -> schemas.MatricesResponse:
        infos = []
        for name in BUILTIN_NAMES:
            rec = builtin(name)
            infos.append(
                schemas.MatrixInfo(
                    name=name,
                    dim=int(rec.matrix.shape[0]),
                    hermitian=is_hermitian(rec.matrix),
                )
            )
        return schemas.MatricesResponse(matrices=infos)

    @app.post("/solve", response_model=schemas.SolveResponse)
    async def solve(req: schemas.SolveRequest) -> schemas.SolveResponse:
        record = _resolve_record(req.matrix)
        result = multi_start(record, _solve_config(req.options))
        return schemas.SolveResponse(
            matrix_name=result.matrix_name,
            dim=result.dim,
            n_qubits=result.n_qubits,
            layers=result.layers,
            starts=result.starts,
            kept=result.kept,
            master_seed=result.master_seed,
            cluster_tol=result.cluster_tol,
            threshold=result.threshold,
            eigenpairs=[
                schemas.EigenpairModel(
                    eigenvalue=schemas.ComplexValue.of(p.eigenvalue),
                    resonance_energy=p.resonance_energy,
                    gamma=p.gamma,
                    variance=p.variance,
                    residual=p.residual,
                    multiplicity_hits=p.multiplicity_hits,
                    oracle_distance=p.oracle_distance,
                )
                for p in result.eigenpairs
            ],
            oracle_eigenvalues=(
                [schemas.ComplexValue.of(z) for z in result.oracle_eigenvalues]
                if result.oracle_eigenvalues is not None
                else None
            ),
        )

    @app.post("/sweep", response_model=schemas.SweepResponse)
    async def sweep(req: schemas.SweepRequest) -> schemas.SweepResponse:
        record = _resolve_record(req.matrix)
        result = angle_sweep(record, req.grid, _solve_config(req.options))
        return schemas.SweepResponse(
            matrix_name=result.matrix_name,
            entries=[
                schemas.SweepEntryModel(
                    init_angle=e.init_angle,
                    eigenvalue=schemas.ComplexValue.of(e.eigenvalue),
                    variance=e.variance,
                )
                for e in result.entries
            ],
        )

    @app.post("/landscape", response_model=schemas.LandscapeResponse)
    async def landscape(req: schemas.LandscapeRequest) -> schemas.LandscapeResponse:
        record = _resolve_record(req.matrix)
        axes = req.axes if not isinstance(req.axes, list) else tuple(req.axes)
        grid = landscape_grid(record, axes, req.resolution, req.layers)
        return schemas.LandscapeResponse(
            axes_kind=grid.axes_kind,
            axis_indices=list(grid.axis_indices),
            thetas=[float(t) for t in grid.thetas],
            costs=grid.costs.tolist(),
            eig_real=(
                [float(v) for v in grid.eig_real] if grid.eig_real is not None else None
            ),
        )

    @app.post("/oracle", response_model=schemas.OracleResponse)
    async def oracle(req: schemas.OracleRequest) -> schemas.OracleResponse:
        record = _resolve_record(req.matrix)
        spectrum = eigen(record.matrix, want_vectors=req.want_vectors)
        vectors = None
        if spectrum.eigenvectors is not None:
            vectors = [
                [schemas.ComplexValue.of(v) for v in spectrum.eigenvectors[:, i]]
                for i in range(spectrum.eigenvectors.shape[1])
            ]
        return schemas.OracleResponse(
            eigenvalues=[schemas.ComplexValue.of(z) for z in spectrum.eigenvalues],
            eigenvectors=vectors,
            residuals=(
                [float(r) for r in spectrum.residuals]
                if spectrum.residuals is not None
                else None
            ),
        )

    @app.post("/compare", response_model=schemas.CompareResponse)
    async def compare_endpoint(req: schemas.CompareRequest) -> schemas.CompareResponse:
        record = _resolve_record(req.matrix)
        report = compare(record, _solve_config(req.options))
        return schemas.CompareResponse(
            matrix_name=report.matrix_name,
            hermitian=report.hermitian,
            vqe_value=report.vqe_value,
            vqe_evaluations=report.vqe_evaluations,
            vqe_note=report.vqe_note,
            rvvqe_eigenvalues=[
                schemas.ComplexValue.of(z) for z in report.rvvqe_eigenvalues
            ],
            rvvqe_best_cost=report.rvvqe_best_cost,
            rvvqe_evaluations=report.rvvqe_evaluations,
            metrics=schemas.TermMetricsModel(
                h_terms=report.metrics.h_terms,
                k_terms=report.metrics.k_terms,
                h2_terms=report.metrics.h2_terms,
                k2_terms=report.metrics.k2_terms,
                commutator_terms=report.metrics.commutator_terms,
                plain_strings=report.metrics.plain_strings,
                variance_strings=report.metrics.variance_strings,
                quadratic_bound_ok=report.metrics.quadratic_bound_ok,
            ),
        )

    @app.post("/trace", response_model=schemas.TraceResponse)
    async def trace(req: schemas.TraceRequest) -> schemas.TraceResponse:
        record = _resolve_record(req.matrix)
        runs = trace_runs(record, req.runs, _solve_config(req.options))
        return schemas.TraceResponse(
            matrix_name=record.name,
            series=[
                schemas.TraceSeries(
                    final_cost=r.final_cost,
                    converged=r.converged,
                    points=[
                        schemas.TracePoint(iteration=int(i), cost=float(c))
                        for i, c in r.cost_trace
                    ],
                )
                for r in runs
            ],
        )

    return app
