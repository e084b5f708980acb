"""Derivative-free simplex descent (Nelder–Mead) with restart polishing.

The simplex uses the adaptive reflection/expansion/contraction/shrink
coefficients (scaled by dimension), a stable ordering for determinism, and
stops when the cost spread across the simplex falls below ε while the
simplex diameter is small, or when the iteration budget runs out.

A single simplex collapsing in a narrow valley is the classic failure mode
in ≳20 parameters, so `optimize` follows the main descent with a few restart
rounds: a fresh simplex of shrinking radius seeded at the best point.  Each
round only replaces the incumbent when it improves it, which keeps the
best-so-far trace non-increasing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .circuits import AnsatzSpec
from .simulator import make_preparer


@dataclass(frozen=True)
class OptimizerConfig:
    tolerance: float = 1e-12  # ε: cost spread across the simplex
    max_iterations: int = 40000  # per descent stage
    xtol: float = 1e-9  # simplex diameter at the stop
    initial_radius: float = 0.9
    polish_rounds: int = 6
    convergence_threshold: float = 1e-12  # a run counts as converged below this
    polish_target: Optional[float] = None  # stop polishing below this cost

    def resolved_polish_target(self) -> float:
        if self.polish_target is not None:
            return self.polish_target
        return max(self.convergence_threshold * 1e-3, 1e-13)


@dataclass
class MinimizeResult:
    x: np.ndarray
    fun: float
    iterations: int
    nfev: int
    hit_max_iterations: bool
    trace: list = field(default_factory=list)  # (iteration, best cost) pairs


def nelder_mead(
    f: Callable[[np.ndarray], float],
    x0: np.ndarray,
    radius: float,
    config: OptimizerConfig,
    record_trace: bool = False,
    iteration_offset: int = 0,
) -> MinimizeResult:
    """One simplex descent from x0 with the given initial simplex radius."""
    x0 = np.asarray(x0, dtype=float)
    n = x0.shape[0]
    if n >= 2:
        alpha, beta = 1.0, 1.0 + 2.0 / n
        gamma, delta = 0.75 - 1.0 / (2 * n), 1.0 - 1.0 / n
    else:
        alpha, beta, gamma, delta = 1.0, 2.0, 0.5, 0.5
    pts = np.tile(x0, (n + 1, 1))
    for i in range(n):
        pts[i + 1, i] += radius
    vals = np.array([f(p) for p in pts])
    nfev = n + 1
    trace: list = []
    hit_max = True
    it = 0
    for it in range(1, config.max_iterations + 1):
        order = np.argsort(vals, kind="stable")
        pts, vals = pts[order], vals[order]
        if record_trace:
            trace.append((iteration_offset + it, float(vals[0])))
        spread = float(vals[-1] - vals[0])
        diameter = float(np.max(np.abs(pts[1:] - pts[0])))
        if spread <= config.tolerance and diameter <= config.xtol:
            hit_max = False
            break
        centroid = pts[:-1].mean(axis=0)
        xr = centroid + alpha * (centroid - pts[-1])
        fr = f(xr)
        nfev += 1
        if fr < vals[0]:
            xe = centroid + beta * (xr - centroid)
            fe = f(xe)
            nfev += 1
            if fe < fr:
                pts[-1], vals[-1] = xe, fe
            else:
                pts[-1], vals[-1] = xr, fr
        elif fr < vals[-2]:
            pts[-1], vals[-1] = xr, fr
        else:
            if fr < vals[-1]:  # outside contraction
                xc = centroid + gamma * (xr - centroid)
            else:  # inside contraction
                xc = centroid - gamma * (centroid - pts[-1])
            fc = f(xc)
            nfev += 1
            if fc < min(fr, vals[-1]):
                pts[-1], vals[-1] = xc, fc
            else:  # shrink toward the best vertex
                pts[1:] = pts[0] + delta * (pts[1:] - pts[0])
                vals[1:] = [f(p) for p in pts[1:]]
                nfev += n
    order = np.argsort(vals, kind="stable")
    return MinimizeResult(
        x=pts[order][0].copy(),
        fun=float(vals[order][0]),
        iterations=it,
        nfev=nfev,
        hit_max_iterations=hit_max,
        trace=trace,
    )


@dataclass
class OptimizationRun:
    initial_params: np.ndarray
    final_params: np.ndarray
    cost_trace: list  # (iteration, best-so-far cost)
    final_cost: float
    eigenvalue: complex
    residual: float
    converged: bool
    hit_max_iterations: bool
    nfev: int


def optimize(
    objective,
    ansatz: AnsatzSpec,
    initial,
    config: OptimizerConfig = OptimizerConfig(),
    record_trace: bool = True,
    cost_fn: Optional[Callable[[np.ndarray], float]] = None,
) -> OptimizationRun:
    """Minimize the objective over ansatz parameters from one starting point.

    `objective` provides .value(state) plus eigenvalue/residual extraction
    (see cost.VarianceObjective); `cost_fn` overrides the minimized function
    (used for the shot backend) while reporting still comes from the exact
    one.
    """
    preparer = make_preparer(ansatz)
    initial = np.asarray(initial, dtype=float)
    if cost_fn is None:
        f = lambda params: objective.value(preparer(params))
    else:
        f = cost_fn
    result = nelder_mead(f, initial, config.initial_radius, config, record_trace)
    best_x, best_val = result.x, result.fun
    trace = result.trace
    iterations = result.iterations
    nfev = result.nfev
    hit_max = result.hit_max_iterations
    target = config.resolved_polish_target()
    radius = config.initial_radius / 2.0
    for _ in range(config.polish_rounds):
        if best_val <= target:
            break
        polish = nelder_mead(
            f, best_x, radius, config, record_trace, iteration_offset=iterations
        )
        iterations += polish.iterations
        nfev += polish.nfev
        hit_max = hit_max or polish.hit_max_iterations
        if polish.fun < best_val:
            best_x, best_val = polish.x, polish.fun
            trace.extend(polish.trace)
        radius *= 0.55
    state = preparer(best_x)
    exact_cost = objective.value(state)
    return OptimizationRun(
        initial_params=initial,
        final_params=best_x,
        cost_trace=trace,
        final_cost=exact_cost,
        eigenvalue=objective.eigenvalue(state),
        residual=objective.residual(state),
        converged=exact_cost <= config.convergence_threshold,
        hit_max_iterations=hit_max,
        nfev=nfev,
    )
