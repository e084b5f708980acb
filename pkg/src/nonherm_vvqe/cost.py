"""The variance objective and eigenvalue extraction.

For M = H + iK the minimized quantity is the full operator variance

    Δ(θ) = ⟨M†M⟩ − |⟨M⟩|²
         = ⟨H²⟩ + ⟨K²⟩ − ⟨H⟩² − ⟨K⟩² − 2·Im⟨HK⟩,

which is real, non-negative, and zero exactly on eigenstates — including the
commutator contribution 2·Im⟨HK⟩ = −i⟨[H,K]⟩, which does not vanish for
non-normal M.  Dropping it leaves a strictly positive floor at every
eigenstate of such matrices, so it must stay in the objective for the
converged variance to reach zero.  The four component expectations and the
commutator term are all reported so the decomposition can be inspected.

All five pieces are expectations of Hermitian observables: H, K, their
symbolic Pauli squares, and i[H,K].  The exact backend evaluates them
through cached dense forms of those Pauli sums; the shot backend measures
each sum term by term.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import AnsatzSpec
from .errors import NotHermitianInput
from .matrices import HermitianPair
from .pauli import commutator_observable, decompose_pauli, square_sum, to_matrix
from .simulator import prepare, sample_expectation


@dataclass(frozen=True)
class CostReport:
    exp_h: float
    exp_k: float
    exp_h2: float
    exp_k2: float
    commutator_term: float  # 2·Im⟨HK⟩ = −i⟨[H,K]⟩
    cost: float


class VarianceObjective:
    """Variance cost for one matrix, with precompiled observables.

    Attributes expose the Pauli decompositions (``pauli_h`` … ``pauli_comm``)
    for measurement-cost reporting and the shot backend; dense forms of the
    same sums back the exact evaluations.
    """

    def __init__(self, pair: HermitianPair):
        self.pair = pair
        self.dim = pair.source_dim
        self.pauli_h = decompose_pauli(pair.h)
        self.pauli_k = decompose_pauli(pair.k)
        self.pauli_h2 = square_sum(self.pauli_h)
        self.pauli_k2 = square_sum(self.pauli_k)
        self.pauli_comm = commutator_observable(self.pauli_h, self.pauli_k)
        self.n_qubits = self.pauli_h.n_qubits
        # dense forms of the decompositions (not of the raw input), so pruning
        # is reflected consistently in both backends
        self._h_mat = to_matrix(self.pauli_h)
        self._k_mat = to_matrix(self.pauli_k)
        self._m_mat = self._h_mat + 1j * self._k_mat

    def value(self, state: np.ndarray) -> float:
        """Exact variance ⟨M†M⟩ − |⟨M⟩|², evaluated as ‖(M − ⟨M⟩)ψ‖²."""
        mpsi = self._m_mat @ state
        lam = np.vdot(state, mpsi)
        resid = mpsi - lam * state
        return float(np.real(np.vdot(resid, resid)))

    def report(self, state: np.ndarray) -> CostReport:
        """Exact component-wise breakdown of the variance."""
        hpsi = self._h_mat @ state
        kpsi = self._k_mat @ state
        exp_h = float(np.real(np.vdot(state, hpsi)))
        exp_k = float(np.real(np.vdot(state, kpsi)))
        exp_h2 = float(np.real(np.vdot(hpsi, hpsi)))
        exp_k2 = float(np.real(np.vdot(kpsi, kpsi)))
        commutator = 2.0 * float(np.imag(np.vdot(hpsi, kpsi)))
        return CostReport(
            exp_h=exp_h,
            exp_k=exp_k,
            exp_h2=exp_h2,
            exp_k2=exp_k2,
            commutator_term=commutator,
            cost=self.value(state),
        )

    def value_sampled(self, state: np.ndarray, shots: int, seed: int) -> float:
        """Shot-sampled variance from five Hermitian measurements."""
        est_h, _ = sample_expectation(state, self.pauli_h, shots, seed)
        est_k, _ = sample_expectation(state, self.pauli_k, shots, seed + 1)
        est_h2, _ = sample_expectation(state, self.pauli_h2, shots, seed + 2)
        est_k2, _ = sample_expectation(state, self.pauli_k2, shots, seed + 3)
        est_comm, _ = sample_expectation(state, self.pauli_comm, shots, seed + 4)
        # ⟨i[H,K]⟩ = −2·Im⟨HK⟩, so the variance adds it back with sign +1
        return est_h2 + est_k2 - est_h**2 - est_k**2 + est_comm

    def eigenvalue(self, state: np.ndarray) -> complex:
        """⟨M⟩ = ⟨H⟩ + i⟨K⟩ from the exact backend."""
        return complex(
            np.real(np.vdot(state, self._h_mat @ state))
            + 1j * np.real(np.vdot(state, self._k_mat @ state))
        )

    def residual(self, state: np.ndarray) -> float:
        """‖Mψ − ⟨M⟩ψ‖₂."""
        mpsi = self._m_mat @ state
        lam = np.vdot(state, mpsi)
        return float(np.linalg.norm(mpsi - lam * state))


def cost(pair: HermitianPair, ansatz: AnsatzSpec, params) -> CostReport:
    """Evaluate the variance cost report at one parameter vector."""
    return VarianceObjective(pair).report(prepare(ansatz, params))


def extract_eigenvalue(state: np.ndarray, pair: HermitianPair) -> complex:
    """⟨H⟩ + i⟨K⟩ for a prepared state."""
    h, k = pair.h, pair.k
    return complex(
        float(np.real(np.vdot(state, h @ state)))
        + 1j * float(np.real(np.vdot(state, k @ state)))
    )


class EnergyObjective:
    """Plain ⟨H⟩ minimization; only defined when the matrix is Hermitian."""

    def __init__(self, pair: HermitianPair, tol: float = 1e-10):
        if float(np.max(np.abs(pair.k))) > tol:
            raise NotHermitianInput(
                "expectation-value minimization needs K = 0; "
                f"max |K| = {float(np.max(np.abs(pair.k))):.3e}"
            )
        self.pair = pair
        self.pauli_h = decompose_pauli(pair.h)
        self.n_qubits = self.pauli_h.n_qubits
        self._h_mat = to_matrix(self.pauli_h)

    def value(self, state: np.ndarray) -> float:
        return float(np.real(np.vdot(state, self._h_mat @ state)))

    def eigenvalue(self, state: np.ndarray) -> complex:
        return complex(self.value(state))

    def residual(self, state: np.ndarray) -> float:
        hpsi = self._h_mat @ state
        lam = np.vdot(state, hpsi)
        return float(np.linalg.norm(hpsi - lam * state))


def standard_vqe_cost(pair: HermitianPair, ansatz: AnsatzSpec, params) -> float:
    """⟨H⟩ at one parameter vector, for side-by-side comparison runs."""
    return EnergyObjective(pair).value(prepare(ansatz, params))
