"""Statevector simulation and expectation evaluation.

Qubit 0 indexes the least-significant bit of the amplitude index.  Gate
conventions are locked:

    Rz(θ) = diag(e^{−iθ/2}, e^{+iθ/2})
    Ry(θ) = [[cos(θ/2), −sin(θ/2)], [sin(θ/2), cos(θ/2)]]
    CNOT flips the target bit when the control bit is 1.

Expectations of Pauli sums are evaluated term by term from the bitmask
action; the shot-sampled estimator rotates each term to its eigenbasis and
draws ±1 outcomes.
"""
from __future__ import annotations

import numpy as np

from .circuits import AnsatzSpec
from .errors import DimMismatch, NonFinite, ParamCountMismatch
from .pauli import PauliSum, _basis_weights, popcount

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


def _rz(theta: float) -> np.ndarray:
    return np.array(
        [[np.exp(-0.5j * theta), 0.0], [0.0, np.exp(0.5j * theta)]], dtype=complex
    )


def _ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _apply_single(tensor: np.ndarray, gate: np.ndarray, n: int, q: int) -> np.ndarray:
    axis = n - 1 - q  # C-order reshape puts qubit 0 on the last axis
    moved = np.tensordot(gate, tensor, axes=([1], [axis]))
    return np.moveaxis(moved, 0, axis)


def _apply_cnot(tensor: np.ndarray, n: int, control: int, target: int) -> np.ndarray:
    ax_c = n - 1 - control
    ax_t = n - 1 - target
    sel = [slice(None)] * n
    sel[ax_c] = 1
    sub_axis = ax_t if ax_t < ax_c else ax_t - 1
    tensor = tensor.copy()
    tensor[tuple(sel)] = np.flip(tensor[tuple(sel)], axis=sub_axis)
    return tensor


def prepare(ansatz: AnsatzSpec, params) -> np.ndarray:
    """Apply the ansatz gates to |0…0⟩ and return the statevector."""
    params = np.asarray(params, dtype=float)
    if params.shape != (ansatz.n_params,):
        raise ParamCountMismatch(
            f"expected {ansatz.n_params} parameters, got shape {params.shape}"
        )
    if not np.all(np.isfinite(params)):
        raise NonFinite("parameters contain NaN or Inf")
    n = ansatz.n_qubits
    state = np.zeros(1 << n, dtype=complex)
    state[0] = 1.0
    tensor = state.reshape((2,) * n)
    for gate in ansatz.gates:
        if gate.kind == "CNOT":
            tensor = _apply_cnot(tensor, n, gate.control, gate.target)
        elif gate.kind == "RZ":
            tensor = _apply_single(tensor, _rz(params[gate.param_index]), n, gate.target)
        else:
            tensor = _apply_single(tensor, _ry(params[gate.param_index]), n, gate.target)
    return np.ascontiguousarray(tensor.reshape(1 << n))


def make_preparer(ansatz: AnsatzSpec):
    """Compile the ansatz into a faster closure params -> statevector.

    Consecutive rotations on the same qubit are fused into a single 2×2
    matrix before application, which matters in optimization hot loops; the
    result is identical to `prepare` to machine precision.
    """
    n = ansatz.n_qubits
    program: list = []  # ("rot", q, ((kind, param_index), ...)) | ("cnot", c, t)
    pending: dict[int, list] = {}

    def flush(q: int) -> None:
        run = pending.pop(q, None)
        if run:
            program.append(("rot", q, tuple(run)))

    for gate in ansatz.gates:
        if gate.kind == "CNOT":
            flush(gate.control)
            flush(gate.target)
            program.append(("cnot", gate.control, gate.target))
        else:
            pending.setdefault(gate.target, []).append((gate.kind, gate.param_index))
    for q in sorted(pending):
        flush(q)

    dim = 1 << n
    n_params = ansatz.n_params

    def preparer(params) -> np.ndarray:
        params = np.asarray(params, dtype=float)
        if params.shape != (n_params,):
            raise ParamCountMismatch(
                f"expected {n_params} parameters, got shape {params.shape}"
            )
        state = np.zeros(dim, dtype=complex)
        state[0] = 1.0
        tensor = state.reshape((2,) * n)
        for op in program:
            if op[0] == "cnot":
                tensor = _apply_cnot(tensor, n, op[1], op[2])
            else:
                matrix = None
                for kind, idx in op[2]:
                    gate = _rz(params[idx]) if kind == "RZ" else _ry(params[idx])
                    matrix = gate if matrix is None else gate @ matrix
                tensor = _apply_single(tensor, matrix, n, op[1])
        return np.ascontiguousarray(tensor.reshape(dim))

    return preparer


def _check_dims(state: np.ndarray, n_qubits: int) -> None:
    if state.shape != (1 << n_qubits,):
        raise DimMismatch(
            f"state has {state.shape[0]} amplitudes but observable acts on "
            f"{1 << n_qubits}"
        )


def expectation_real(state: np.ndarray, obs: PauliSum) -> float:
    """⟨ψ|obs|ψ⟩ as Σ_terms coeff · ⟨P⟩, each ⟨P⟩ real."""
    state = np.asarray(state, dtype=complex)
    _check_dims(state, obs.n_qubits)
    j = np.arange(state.shape[0], dtype=np.int64)
    total = 0.0
    for x, z, c in zip(obs.xs, obs.zs, obs.coeffs):
        w = _basis_weights(obs.n_qubits, int(x), int(z))
        # ⟨ψ|P|ψ⟩ = Σ_j conj(ψ[j⊕x]) w(j) ψ[j]
        total += c * float(np.real(np.sum(np.conj(state[j ^ int(x)]) * w * state)))
    return total


def expectation_complex(state: np.ndarray, m: np.ndarray) -> complex:
    """⟨ψ|M|ψ⟩ for a dense (generally non-Hermitian) matrix."""
    state = np.asarray(state, dtype=complex)
    m = np.asarray(m, dtype=complex)
    if m.shape[0] != state.shape[0]:
        raise DimMismatch(
            f"state has {state.shape[0]} amplitudes but matrix is {m.shape[0]}×{m.shape[1]}"
        )
    return complex(np.vdot(state, m @ state))


def _rotate_to_z_basis(state: np.ndarray, n: int, x: int, z: int) -> np.ndarray:
    """Conjugate the state so the (x, z) string becomes a Z-string."""
    tensor = state.reshape((2,) * n)
    hadamard = np.array([[_INV_SQRT2, _INV_SQRT2], [_INV_SQRT2, -_INV_SQRT2]], dtype=complex)
    s_dag = np.array([[1.0, 0.0], [0.0, -1j]], dtype=complex)
    for q in range(n):
        xq, zq = (x >> q) & 1, (z >> q) & 1
        if xq and zq:  # Y axis: S† then H
            tensor = _apply_single(tensor, hadamard @ s_dag, n, q)
        elif xq:  # X axis
            tensor = _apply_single(tensor, hadamard, n, q)
    return tensor.reshape(state.shape[0])


def sample_expectation(
    state: np.ndarray, obs: PauliSum, shots: int, seed: int
) -> tuple[float, float]:
    """Shot-sampled estimate of ⟨obs⟩ with its standard error.

    Each term is measured independently with `shots` single-shot ±1 outcomes
    in its own eigenbasis; estimates recombine with the coefficients.
    Deterministic for a fixed seed.
    """
    if shots < 1:
        raise ValueError(f"shots must be ≥ 1, got {shots}")
    state = np.asarray(state, dtype=complex)
    _check_dims(state, obs.n_qubits)
    rng = np.random.default_rng(seed)
    dim = state.shape[0]
    estimate = 0.0
    variance = 0.0
    for x, z, c in zip(obs.xs, obs.zs, obs.coeffs):
        x, z = int(x), int(z)
        support = x | z
        if support == 0:
            estimate += c  # identity term: deterministic contribution
            continue
        rotated = _rotate_to_z_basis(state, obs.n_qubits, x, z)
        probs = np.abs(rotated) ** 2
        probs = probs / probs.sum()
        outcomes = rng.choice(dim, size=shots, p=probs).astype(np.int64)
        values = 1.0 - 2.0 * (popcount(outcomes & support) & 1)
        mean = float(values.mean())
        estimate += c * mean
        # sample variance of the mean for this term
        var_term = float(values.var(ddof=1)) / shots if shots > 1 else 1.0 / shots
        variance += c * c * var_term
    return estimate, float(np.sqrt(variance))
