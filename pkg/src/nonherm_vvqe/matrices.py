"""Complex dense matrices: Cartesian decomposition, built-ins, file I/O.

A matrix is stored as a plain complex128 numpy array.  The Cartesian
decomposition M = H + iK with H = (M + M†)/2 and K = (M − M†)/(2i) produces
two Hermitian matrices; everything downstream (Pauli decomposition, cost
evaluation) works with H and K only.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    NonFinite,
    NonPowerOfTwoDim,
    ParseError,
    UnknownMatrix,
)


@dataclass(frozen=True)
class HermitianPair:
    """Hermitian components of M = H + iK."""

    h: np.ndarray
    k: np.ndarray
    source_dim: int


@dataclass(frozen=True)
class MatrixRecord:
    """A named matrix plus its reference eigenvalues, if any."""

    name: str
    matrix: np.ndarray
    reference_spectrum: tuple[complex, ...] = field(default=())


def _require_finite(m: np.ndarray) -> None:
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise NonFinite("matrix contains NaN or Inf entries")


def is_power_of_two(d: int) -> bool:
    return d >= 1 and (d & (d - 1)) == 0


def n_qubits_for(dim: int) -> int:
    """Qubit count for a dim×dim matrix; rejects non-power-of-two dims."""
    if not is_power_of_two(dim):
        raise NonPowerOfTwoDim(
            f"dimension {dim} is not a power of two; no padding scheme is defined"
        )
    return max(1, dim.bit_length() - 1)


def is_hermitian(m: np.ndarray, tol: float = 1e-12) -> bool:
    """True iff max |m_jk − conj(m_kj)| ≤ tol."""
    m = np.asarray(m, dtype=complex)
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def cartesian_decompose(m: np.ndarray) -> HermitianPair:
    """Split M into Hermitian H = (M+M†)/2 and K = (M−M†)/(2i).

    Both outputs are re-symmetrized so Hermiticity holds exactly, which keeps
    Pauli coefficients real downstream.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    _require_finite(m)
    n_qubits_for(m.shape[0])  # rejects non-power-of-two dims
    h = (m + m.conj().T) / 2
    k = (m - m.conj().T) / 2j
    # one more symmetrization pass eliminates representation round-off
    h = (h + h.conj().T) / 2
    k = (k + k.conj().T) / 2
    h.setflags(write=False)
    k.setflags(write=False)
    return HermitianPair(h=h, k=k, source_dim=m.shape[0])


def _m3_entries() -> np.ndarray:
    # entry(j,k) = j + j·i on the diagonal, j − k·i off it (1-based indices)
    return np.array(
        [
            [(j + j * 1j) if j == k else (j - k * 1j) for k in range(1, 9)]
            for j in range(1, 9)
        ],
        dtype=complex,
    )


_M1 = np.array([[1 + 1j, 2 - 1j], [3 + 2j, 4 - 2j]], dtype=complex)

_BUILTINS: dict[str, tuple[np.ndarray, tuple[complex, ...]]] = {
    "A": (np.array([[1, 3], [3, 4]], dtype=complex), (5.8541, -0.8541)),
    "B": (np.array([[0, 2], [-2, 0]], dtype=complex), (-2j, 2j)),
    "C": (np.array([[1, 2], [3, 4]], dtype=complex), (5.3723, -0.3723)),
    "D": (np.array([[1, 2 + 1j], [2 - 1j, 3]], dtype=complex), (4.4495, -0.4495)),
    "E": (np.array([[1j, 1 - 1j], [-1 - 1j, 2j]], dtype=complex), (3j, 0j)),
    "F": (_M1, (5.3924 - 1.1050j, -0.3924 + 0.1050j)),
    "M1": (_M1, (5.3924 - 1.1050j, -0.3924 + 0.1050j)),
    "M2": (
        np.array(
            [
                [1 + 1j, 2 - 1j, 1 + 2j, 3 - 1j],
                [3 + 2j, 4 - 2j, 2 + 1j, 1 - 1j],
                [1 - 1j, 3 + 1j, 5 + 2j, 2 - 2j],
                [2 + 2j, 1 - 3j, 4 + 1j, 6 - 1j],
            ],
            dtype=complex,
        ),
        (10.5188 - 0.5892j, -1.6142 - 0.5359j, 3.7513 - 1.0559j, 3.3441 + 2.1809j),
    ),
    "M3": (
        _m3_entries(),
        (-0.4866 + 9.6633j, -0.3361 + 7.4468j, -0.8231 + 11.8959j),
    ),
}

BUILTIN_NAMES = tuple(_BUILTINS)


def builtin(name: str) -> MatrixRecord:
    """Look up one of the nine built-in matrices (A…F, M1…M3)."""
    try:
        matrix, spectrum = _BUILTINS[name]
    except KeyError:
        raise UnknownMatrix(
            f"unknown matrix {name!r}; available: {', '.join(_BUILTINS)}"
        ) from None
    m = matrix.copy()
    m.setflags(write=False)
    return MatrixRecord(name=name, matrix=m, reference_spectrum=spectrum)


# ---------------------------------------------------------------------------
# file I/O
#
# Format: {"name": str, "dim": int, "entries": [[entry, ...], ...]} row-major.
# An entry is {"re": float, "im": float}; plain numbers and strings like
# "1+2i" are also accepted on load.

def _parse_entry(raw, row: int, col: int) -> complex:
    if isinstance(raw, dict):
        try:
            return complex(float(raw["re"]), float(raw.get("im", 0.0)))
        except (KeyError, TypeError, ValueError):
            raise ParseError(f"bad entry object {raw!r}", row, col) from None
    if isinstance(raw, bool):
        raise ParseError(f"unsupported entry type {type(raw).__name__}", row, col)
    if isinstance(raw, (int, float)):
        return complex(raw)
    if isinstance(raw, str):
        text = raw.strip().replace(" ", "").replace("i", "j")
        if text:
            try:
                return complex(text)
            except ValueError:
                pass
        raise ParseError(f"cannot parse entry {raw!r}", row, col)
    raise ParseError(f"unsupported entry type {type(raw).__name__}", row, col)


def load_matrix(path) -> MatrixRecord:
    """Load a matrix record from a JSON file."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            doc = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    return record_from_payload(doc)


def record_from_payload(doc) -> MatrixRecord:
    """Build a MatrixRecord from an already-parsed matrix document."""
    if not isinstance(doc, dict) or "entries" not in doc:
        raise ParseError("expected an object with an 'entries' field")
    rows = doc["entries"]
    if not isinstance(rows, list) or not rows:
        raise ParseError("'entries' must be a non-empty list of rows")
    width = None
    parsed = []
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise ParseError("row is not a list", i)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise DimensionMismatch(
                f"row {i} has {len(row)} entries, expected {width}"
            )
        parsed.append([_parse_entry(v, i, j) for j, v in enumerate(row)])
    matrix = np.array(parsed, dtype=complex)
    if len(rows) != width:
        raise DimensionMismatch(
            f"matrix is {len(rows)}×{width}, expected square"
        )
    declared = doc.get("dim")
    if declared is not None and declared != width:
        raise DimensionMismatch(f"declared dim {declared} but found {width} columns")
    _require_finite(matrix)
    matrix.setflags(write=False)
    ref = tuple(
        complex(v["re"], v["im"]) for v in doc.get("reference_spectrum", [])
    )
    return MatrixRecord(
        name=str(doc.get("name", "matrix")), matrix=matrix, reference_spectrum=ref
    )


def record_to_payload(record: MatrixRecord) -> dict:
    """JSON-ready dict for a record; floats keep full double precision."""
    doc = {
        "name": record.name,
        "dim": int(record.matrix.shape[0]),
        "entries": [
            [{"re": float(v.real), "im": float(v.imag)} for v in row]
            for row in record.matrix
        ],
    }
    if record.reference_spectrum:
        doc["reference_spectrum"] = [
            {"re": float(v.real), "im": float(v.imag)}
            for v in record.reference_spectrum
        ]
    return doc


def save_matrix(record: MatrixRecord, path) -> None:
    """Write a matrix record as JSON; load_matrix round-trips it bit-exactly."""
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(record_to_payload(record), handle, indent=2)
        handle.write("\n")
