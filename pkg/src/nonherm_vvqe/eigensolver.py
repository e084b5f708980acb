"""Classical dense eigensolver for arbitrary complex matrices.

Ground truth for the variational pipeline, deliberately sharing no code with
it: Householder reduction to upper Hessenberg form, Wilkinson-shifted QR
iteration with deflation for the eigenvalues, and inverse iteration on the
original matrix for eigenvectors.  Only elementary array arithmetic is used;
factorizations are implemented here.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ConvergenceFailure, DimensionMismatch, NonFinite

_DEFLATION_TOL = 1e-14


@dataclass(frozen=True)
class OracleSpectrum:
    eigenvalues: np.ndarray  # length d, sorted by (Re, Im) descending
    eigenvectors: Optional[np.ndarray] = None  # unit-norm columns, same order
    residuals: Optional[np.ndarray] = None  # ‖Mv − λv‖₂ per column


@dataclass(frozen=True)
class MatchReport:
    pairs: tuple  # ((computed, reference, distance), ...)
    max_distance: float
    unmatched_computed: tuple
    unmatched_reference: tuple


def _hessenberg(a: np.ndarray) -> np.ndarray:
    """Unitary similarity reduction to upper Hessenberg form (in place copy)."""
    h = a.astype(complex).copy()
    d = h.shape[0]
    for k in range(d - 2):
        x = h[k + 1 :, k].copy()
        norm_x = np.linalg.norm(x)
        if norm_x <= 1e-300:
            continue
        # phase-aligned Householder target keeps the reflector well conditioned
        phase = x[0] / abs(x[0]) if abs(x[0]) > 0 else 1.0
        v = x.copy()
        v[0] += phase * norm_x
        v_norm = np.linalg.norm(v)
        if v_norm <= 1e-300:
            continue
        v /= v_norm
        h[k + 1 :, k:] -= 2.0 * np.outer(v, v.conj() @ h[k + 1 :, k:])
        h[:, k + 1 :] -= 2.0 * np.outer(h[:, k + 1 :] @ v, v.conj())
        h[k + 2 :, k] = 0.0
    return h


def _eig2(a: complex, b: complex, c: complex, d: complex) -> tuple[complex, complex]:
    """Eigenvalues of [[a, b], [c, d]] by the quadratic formula."""
    half_trace = (a + d) / 2.0
    disc = np.sqrt(complex((a - d) / 2.0) ** 2 + b * c)
    return half_trace + disc, half_trace - disc


def _wilkinson_shift(h: np.ndarray, m: int) -> complex:
    lam1, lam2 = _eig2(h[m - 1, m - 1], h[m - 1, m], h[m, m - 1], h[m, m])
    return lam1 if abs(lam1 - h[m, m]) <= abs(lam2 - h[m, m]) else lam2


def _qr_sweep(h: np.ndarray, m: int, shift: complex) -> None:
    """One implicit-shift QR step A − μI = QR, A ← RQ + μI on block [0..m]."""
    rotations = []
    for k in range(m + 1):
        h[k, k] -= shift
    for k in range(m):
        a, b = h[k, k], h[k + 1, k]
        r = np.hypot(abs(a), abs(b))
        if r <= 1e-300:
            rotations.append((1.0 + 0j, 0.0 + 0j))
            continue
        c, s = a / r, b / r
        rotations.append((c, s))
        rows = h[[k, k + 1], k : m + 1]
        h[k, k : m + 1] = np.conj(c) * rows[0] + np.conj(s) * rows[1]
        h[k + 1, k : m + 1] = -s * rows[0] + c * rows[1]
    for k in range(m):
        c, s = rotations[k]
        top = min(k + 2, m) + 1
        cols = h[:top, [k, k + 1]].copy()
        h[:top, k] = cols[:, 0] * c + cols[:, 1] * s
        h[:top, k + 1] = -cols[:, 0] * np.conj(s) + cols[:, 1] * np.conj(c)
    for k in range(m + 1):
        h[k, k] += shift


def _qr_eigenvalues(h: np.ndarray, budget: int) -> list[complex]:
    d = h.shape[0]
    values: list[complex] = []
    m = d - 1
    sweeps = 0
    while m >= 0:
        if m == 0:
            values.append(complex(h[0, 0]))
            break
        if abs(h[m, m - 1]) <= _DEFLATION_TOL * (abs(h[m - 1, m - 1]) + abs(h[m, m])):
            values.append(complex(h[m, m]))
            m -= 1
            continue
        if m == 1 or abs(h[m - 1, m - 2]) <= _DEFLATION_TOL * (
            abs(h[m - 2, m - 2]) + abs(h[m - 1, m - 1])
        ):
            lam1, lam2 = _eig2(h[m - 1, m - 1], h[m - 1, m], h[m, m - 1], h[m, m])
            values.extend([complex(lam1), complex(lam2)])
            m -= 2
            continue
        sweeps += 1
        if sweeps > budget:
            raise ConvergenceFailure(
                f"QR iteration exceeded {budget} sweeps on a {d}×{d} matrix"
            )
        _qr_sweep(h, m, _wilkinson_shift(h, m))
    return values


def _lu_factor(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Partial-pivot LU; zero pivots are nudged so inverse iteration can proceed."""
    lu = a.astype(complex).copy()
    d = lu.shape[0]
    piv = np.arange(d)
    tiny = max(1e-300, 1e-40 * float(np.max(np.abs(a))))
    for k in range(d):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            piv[[k, p]] = piv[[p, k]]
        if abs(lu[k, k]) < tiny:
            lu[k, k] = tiny
        lu[k + 1 :, k] /= lu[k, k]
        lu[k + 1 :, k + 1 :] -= np.outer(lu[k + 1 :, k], lu[k, k + 1 :])
    return lu, piv


def _lu_solve(lu: np.ndarray, piv: np.ndarray, b: np.ndarray) -> np.ndarray:
    x = b[piv].astype(complex)
    d = lu.shape[0]
    for k in range(1, d):
        x[k] -= lu[k, :k] @ x[:k]
    for k in range(d - 1, -1, -1):
        x[k] = (x[k] - lu[k, k + 1 :] @ x[k + 1 :]) / lu[k, k]
    return x


def _inverse_iteration(m: np.ndarray, lam: complex, index: int) -> np.ndarray:
    d = m.shape[0]
    scale = float(np.max(np.abs(m))) or 1.0
    shifted = m - (lam + 1e-10 * scale * (1 + 1j)) * np.eye(d)
    lu, piv = _lu_factor(shifted)
    rng = np.random.default_rng(index)  # fixed per eigenvalue slot for determinism
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    v /= np.linalg.norm(v)
    for _ in range(8):
        w = _lu_solve(lu, piv, v)
        norm = np.linalg.norm(w)
        if not np.isfinite(norm) or norm == 0.0:
            break
        v_new = w / norm
        if np.linalg.norm(v_new - v * np.vdot(v, v_new)) < 1e-14:
            v = v_new
            break
        v = v_new
    return v


def eigen(m: np.ndarray, want_vectors: bool = False) -> OracleSpectrum:
    """Full complex spectrum via Hessenberg reduction + shifted QR.

    Eigenvectors, when requested, come from inverse iteration per eigenvalue
    with one re-orthogonalization pass inside degenerate groups.
    """
    m = np.asarray(m, dtype=complex)
    d = m.shape[0]
    if m.shape != (d, d):
        raise DimensionMismatch(f"expected square matrix, got shape {m.shape}")
    if d > 512:
        raise DimensionMismatch(f"dimension {d} exceeds the supported 512")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise NonFinite("matrix contains NaN or Inf")
    if d == 1:
        values = [complex(m[0, 0])]
    else:
        values = _qr_eigenvalues(_hessenberg(m), budget=100 * d)
    values.sort(key=lambda z: (-z.real, -z.imag))
    eigenvalues = np.array(values, dtype=complex)
    if not want_vectors:
        return OracleSpectrum(eigenvalues=eigenvalues)
    vectors = np.zeros((d, d), dtype=complex)
    for i, lam in enumerate(values):
        v = _inverse_iteration(m, lam, i)
        # re-orthogonalize against earlier vectors of a (near-)degenerate group
        for j in range(i):
            if abs(values[j] - lam) < 1e-8:
                v = v - vectors[:, j] * np.vdot(vectors[:, j], v)
        norm = np.linalg.norm(v)
        if norm > 0:
            v = v / norm
        vectors[:, i] = v
    residuals = np.array(
        [
            float(np.linalg.norm(m @ vectors[:, i] - eigenvalues[i] * vectors[:, i]))
            for i in range(d)
        ]
    )
    return OracleSpectrum(eigenvalues=eigenvalues, eigenvectors=vectors, residuals=residuals)


def spectrum_match(
    computed: Sequence[complex], reference: Sequence[complex], tol: float
) -> MatchReport:
    """Greedy minimal-distance assignment between two eigenvalue lists.

    Pairs are formed smallest distance first and only while the distance is
    within tol; leftovers on either side are reported unmatched.
    """
    computed = [complex(z) for z in computed]
    reference = [complex(z) for z in reference]
    candidates = sorted(
        (
            (abs(c - r), i, j)
            for i, c in enumerate(computed)
            for j, r in enumerate(reference)
        ),
        key=lambda t: (t[0], t[1], t[2]),
    )
    used_c: set[int] = set()
    used_r: set[int] = set()
    pairs = []
    for dist, i, j in candidates:
        if dist > tol or i in used_c or j in used_r:
            continue
        used_c.add(i)
        used_r.add(j)
        pairs.append((computed[i], reference[j], dist))
    return MatchReport(
        pairs=tuple(pairs),
        max_distance=max((p[2] for p in pairs), default=0.0),
        unmatched_computed=tuple(
            c for i, c in enumerate(computed) if i not in used_c
        ),
        unmatched_reference=tuple(
            r for j, r in enumerate(reference) if j not in used_r
        ),
    )
