"""Pauli-string algebra over bitmask-encoded operators.

A string on n qubits is a pair of bitmasks (x_mask, z_mask): bit q of x_mask
set means the factor on qubit q flips that bit (X or Y), bit q of z_mask set
means it contributes a (−1) sign when bit q is 1 (Z or Y).  Concretely the
operator is P = i^{popcount(x&z)} · X^x · Z^z, which makes every encoded
string Hermitian, and its action on a basis state is

    P|j⟩ = i^{popcount(x&z)} · (−1)^{popcount(j&z)} |j ⊕ x⟩.

Products are O(1) on the masks plus a phase from reordering X past Z.
Hermitian matrices decompose as real-weighted sums of such strings via the
trace inner product c_P = Tr(P·h)/2^n.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import NotHermitian, QubitCountMismatch
from .matrices import n_qubits_for

PRUNE_THRESHOLD = 1e-12

_AXIS_CHARS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}


def popcount(values: np.ndarray) -> np.ndarray:
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(values)
    out = np.zeros_like(values)
    v = values.copy()
    while np.any(v):
        out += v & 1
        v >>= 1
    return out


@dataclass(frozen=True)
class PauliString:
    n_qubits: int
    x_mask: int
    z_mask: int

    def axes(self) -> str:
        """Axis letters with qubit 0 leftmost, e.g. 'XIZ'."""
        return "".join(
            _AXIS_CHARS[((self.x_mask >> q) & 1, (self.z_mask >> q) & 1)]
            for q in range(self.n_qubits)
        )


@dataclass(frozen=True)
class PauliTerm:
    coeff: float
    string: PauliString


class PauliSum:
    """Real-weighted sum of distinct Pauli strings in canonical order.

    Canonical order is lexicographic over (x_mask, z_mask), which makes the
    term list deterministic for identical input.
    """

    __slots__ = ("n_qubits", "xs", "zs", "coeffs")

    def __init__(self, n_qubits: int, xs, zs, coeffs):
        order = np.lexsort((np.asarray(zs, dtype=np.int64), np.asarray(xs, dtype=np.int64)))
        self.n_qubits = int(n_qubits)
        self.xs = np.asarray(xs, dtype=np.int64)[order]
        self.zs = np.asarray(zs, dtype=np.int64)[order]
        self.coeffs = np.asarray(coeffs, dtype=float)[order]
        for arr in (self.xs, self.zs, self.coeffs):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return len(self.coeffs)

    def terms(self) -> Iterator[PauliTerm]:
        for x, z, c in zip(self.xs, self.zs, self.coeffs):
            yield PauliTerm(float(c), PauliString(self.n_qubits, int(x), int(z)))

    def render(self) -> str:
        """One 'coeff * AXES' line per term, canonical order."""
        return "\n".join(
            f"{term.coeff!r} * {term.string.axes()}" for term in self.terms()
        )


def _basis_weights(n_qubits: int, x: int, z: int) -> np.ndarray:
    """Per-basis-state amplitudes w(j) of P acting on |j⟩ (result index j⊕x)."""
    dim = 1 << n_qubits
    j = np.arange(dim, dtype=np.int64)
    signs = 1.0 - 2.0 * (popcount(j & z) & 1)
    return (1j ** int(bin(x & z).count("1"))) * signs


def decompose_pauli(h: np.ndarray, tol: float = 1e-12) -> PauliSum:
    """Expand a Hermitian matrix as Σ c_P P with real c_P = Tr(P·h)/2^n."""
    h = np.asarray(h, dtype=complex)
    dim = h.shape[0]
    n = n_qubits_for(dim)
    if np.max(np.abs(h - h.conj().T)) > tol:
        raise NotHermitian("matrix deviates from Hermitian beyond tolerance")
    j = np.arange(dim, dtype=np.int64)
    xs, zs, coeffs = [], [], []
    for x in range(dim):
        cols = h[j, j ^ x]  # entries h[k, k^x] gathered for the trace
        for z in range(dim):
            w = _basis_weights(n, x, z)
            c = complex(np.dot(w, cols)) / dim
            if abs(c.imag) > 1e-9:
                raise NotHermitian(f"complex Pauli coefficient {c} for masks x={x} z={z}")
            if abs(c.real) > PRUNE_THRESHOLD:
                xs.append(x)
                zs.append(z)
                coeffs.append(c.real)
    return PauliSum(n, xs, zs, coeffs)


def to_matrix(s: PauliSum) -> np.ndarray:
    """Dense 2^n × 2^n matrix of the sum; inverse of decompose_pauli."""
    dim = 1 << s.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    j = np.arange(dim, dtype=np.int64)
    for x, z, c in zip(s.xs, s.zs, s.coeffs):
        out[j ^ int(x), j] += c * _basis_weights(s.n_qubits, int(x), int(z))
    return out


def multiply_strings(p: PauliString, q: PauliString) -> tuple[complex, PauliString]:
    """Product P·Q = phase·R with phase in {+1, −1, +i, −i}."""
    if p.n_qubits != q.n_qubits:
        raise QubitCountMismatch(
            f"strings act on {p.n_qubits} and {q.n_qubits} qubits"
        )
    phase, x, z = _mask_product(p.x_mask, p.z_mask, q.x_mask, q.z_mask)
    return phase, PauliString(p.n_qubits, x, z)


def _mask_product(x1: int, z1: int, x2: int, z2: int) -> tuple[complex, int, int]:
    x3 = x1 ^ x2
    z3 = z1 ^ z2
    # i-exponent from the Hermitian-phase convention of each factor plus the
    # (−1)^{z1·x2} from commuting Z^{z1} past X^{x2}
    exponent = (
        bin(x1 & z1).count("1")
        + bin(x2 & z2).count("1")
        - bin(x3 & z3).count("1")
        + 2 * bin(z1 & x2).count("1")
    ) % 4
    return 1j ** exponent, x3, z3


def multiply_sums(a: PauliSum, b: PauliSum) -> dict[tuple[int, int], complex]:
    """Raw product expansion as {(x, z): complex coefficient} before realness checks."""
    if a.n_qubits != b.n_qubits:
        raise QubitCountMismatch(
            f"sums act on {a.n_qubits} and {b.n_qubits} qubits"
        )
    acc: dict[tuple[int, int], complex] = {}
    for x1, z1, c1 in zip(a.xs, a.zs, a.coeffs):
        for x2, z2, c2 in zip(b.xs, b.zs, b.coeffs):
            phase, x3, z3 = _mask_product(int(x1), int(z1), int(x2), int(z2))
            key = (x3, z3)
            acc[key] = acc.get(key, 0j) + phase * c1 * c2
    return acc


def _sum_from_accumulator(n_qubits: int, acc: dict[tuple[int, int], complex]) -> PauliSum:
    xs, zs, coeffs = [], [], []
    for (x, z), c in acc.items():
        if abs(c.imag) > 1e-9:
            raise NotHermitian(f"merged coefficient {c} is not real")
        if abs(c.real) > PRUNE_THRESHOLD:
            xs.append(x)
            zs.append(z)
            coeffs.append(c.real)
    return PauliSum(n_qubits, xs, zs, coeffs)


def square_sum(s: PauliSum) -> PauliSum:
    """Symbolic s·s with like strings merged; coefficients stay real."""
    return _sum_from_accumulator(s.n_qubits, multiply_sums(s, s))


def commutator_observable(h: PauliSum, k: PauliSum) -> PauliSum:
    """The Hermitian observable i[H,K] as a real-weighted Pauli sum."""
    hk = multiply_sums(h, k)
    kh = multiply_sums(k, h)
    acc: dict[tuple[int, int], complex] = {}
    for key, c in hk.items():
        acc[key] = acc.get(key, 0j) + 1j * c
    for key, c in kh.items():
        acc[key] = acc.get(key, 0j) - 1j * c
    return _sum_from_accumulator(h.n_qubits, acc)


@dataclass(frozen=True)
class MeasurementCostReport:
    """Distinct-string counts for plain energy measurement vs the variance objective."""

    h_terms: int
    k_terms: int
    h2_terms: int
    k2_terms: int
    commutator_terms: int
    plain_strings: int
    variance_strings: int
    quadratic_bound_ok: bool


def term_metrics(h: PauliSum, k: PauliSum) -> MeasurementCostReport:
    """Count the strings each objective needs to measure.

    The variance objective needs ⟨H⟩, ⟨K⟩, ⟨H²⟩, ⟨K²⟩ and the commutator
    observable i[H,K]; plain energy minimization needs ⟨H⟩ only.
    """
    if h.n_qubits != k.n_qubits:
        raise QubitCountMismatch(
            f"sums act on {h.n_qubits} and {k.n_qubits} qubits"
        )
    h2 = square_sum(h)
    k2 = square_sum(k)
    comm = commutator_observable(h, k)
    union = set()
    for s in (h, k, h2, k2, comm):
        union.update(zip(s.xs.tolist(), s.zs.tolist()))
    return MeasurementCostReport(
        h_terms=len(h),
        k_terms=len(k),
        h2_terms=len(h2),
        k2_terms=len(k2),
        commutator_terms=len(comm),
        plain_strings=len(h),
        variance_strings=len(union),
        quadratic_bound_ok=len(h2) <= len(h) ** 2,
    )
