"""Matrix ingestion: builtins, the Cartesian split, and the JSON format."""

import json

import numpy as np
import pytest

from nonherm_vvqe import (
    BUILTIN_NAMES,
    DimensionMismatch,
    NonFinite,
    NonPowerOfTwoDim,
    ParseError,
    UnknownMatrix,
    builtin,
    cartesian_decompose,
    is_hermitian,
    load_matrix,
    n_qubits_for,
    record_from_payload,
    record_to_payload,
    save_matrix,
)
from nonherm_vvqe.matrices import MatrixRecord, is_power_of_two


def test_builtin_catalog():
    assert BUILTIN_NAMES == ("A", "B", "C", "D", "E", "F", "M1", "M2", "M3")
    dims = {name: builtin(name).matrix.shape[0] for name in BUILTIN_NAMES}
    assert dims == {"A": 2, "B": 2, "C": 2, "D": 2, "E": 2, "F": 2, "M1": 2, "M2": 4, "M3": 8}


def test_builtin_entries_pinned():
    m1 = builtin("M1").matrix
    assert np.array_equal(m1, np.array([[1 + 1j, 2 - 1j], [3 + 2j, 4 - 2j]]))
    # F is the same matrix under its single-letter alias
    assert np.array_equal(builtin("F").matrix, m1)
    a = builtin("A").matrix
    assert np.array_equal(a, np.array([[1, 3], [3, 4]], dtype=complex))


def test_m3_follows_index_pattern():
    # entry (j, k) is j + j*i on the diagonal and j - k*i off it (1-based)
    m3 = builtin("M3").matrix
    for j in range(8):
        for k in range(8):
            expected = complex(j + 1, j + 1) if j == k else complex(j + 1, -(k + 1))
            assert m3[j, k] == expected


def test_builtin_unknown_name():
    with pytest.raises(UnknownMatrix):
        builtin("M4")


def test_builtin_matrices_are_read_only():
    m = builtin("M1").matrix
    with pytest.raises(ValueError):
        m[0, 0] = 0.0


def test_reference_spectra_match_numpy():
    for name in BUILTIN_NAMES:
        rec = builtin(name)
        eigs = np.linalg.eigvals(rec.matrix)
        for printed in rec.reference_spectrum:
            # printed values carry 4 decimals
            assert min(abs(printed - z) for z in eigs) < 5e-4, name


def test_power_of_two_helpers():
    assert [is_power_of_two(d) for d in (1, 2, 3, 4, 6, 8, 16)] == [
        True, True, False, True, False, True, True,
    ]
    assert n_qubits_for(2) == 1
    assert n_qubits_for(4) == 2
    assert n_qubits_for(8) == 3
    with pytest.raises(NonPowerOfTwoDim):
        n_qubits_for(3)
    with pytest.raises(NonPowerOfTwoDim):
        n_qubits_for(0)


def test_cartesian_decompose_reconstructs():
    rng = np.random.default_rng(7)
    for d in (2, 4, 8):
        m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        pair = cartesian_decompose(m)
        assert is_hermitian(pair.h)
        assert is_hermitian(pair.k)
        assert np.allclose(pair.h + 1j * pair.k, m, atol=1e-14)


def test_cartesian_decompose_hermitian_input():
    d = builtin("D").matrix
    pair = cartesian_decompose(d)
    assert np.allclose(pair.h, d)
    assert np.max(np.abs(pair.k)) < 1e-15


def test_cartesian_decompose_known_values():
    pair = cartesian_decompose(builtin("M1").matrix)
    # H = (M + M^dag)/2 for M1 worked out by hand
    expected_h = np.array([[1.0, 2.5 - 1.5j], [2.5 + 1.5j, 4.0]])
    expected_k = np.array([[1.0, 0.5 + 0.5j], [0.5 - 0.5j, -2.0]])
    assert np.allclose(pair.h, expected_h, atol=1e-15)
    assert np.allclose(pair.k, expected_k, atol=1e-15)


def test_is_hermitian_tolerance():
    base = np.array([[1.0, 2.0], [2.0, 3.0]], dtype=complex)
    assert is_hermitian(base)
    assert not is_hermitian(base + np.array([[0, 1e-6], [0, 0]]))


def test_parse_entry_forms(tmp_path):
    doc = {
        "name": "mixed",
        "dim": 2,
        "entries": [
            [{"re": 1, "im": 2}, "3-4i"],
            ["2i", 5],
        ],
    }
    rec = record_from_payload(doc)
    assert np.array_equal(
        rec.matrix, np.array([[1 + 2j, 3 - 4j], [2j, 5 + 0j]])
    )
    # "j" notation and embedded spaces also work
    rec2 = record_from_payload({"entries": [["1 + 2j", 0], [0, "-1i"]]})
    assert rec2.matrix[0, 0] == 1 + 2j
    assert rec2.matrix[1, 1] == -1j


@pytest.mark.parametrize(
    "bad",
    [
        {"entries": [[True, 0], [0, 1]]},
        {"entries": [["spam", 0], [0, 1]]},
        {"entries": [[None, 0], [0, 1]]},
        {"entries": [[{"im": 1}, 0], [0, 1]]},
    ],
)
def test_parse_entry_rejects(bad):
    with pytest.raises(ParseError):
        record_from_payload(bad)


def test_parse_error_reports_location():
    with pytest.raises(ParseError) as exc:
        record_from_payload({"entries": [[0, 0], [0, "nope"]]})
    msg = str(exc.value)
    assert "1" in msg and "nope" in msg


def test_payload_shape_errors():
    with pytest.raises(ParseError):
        record_from_payload({"name": "x"})
    with pytest.raises(ParseError):
        record_from_payload({"entries": []})
    with pytest.raises(DimensionMismatch):
        record_from_payload({"entries": [[1, 2], [3]]})
    with pytest.raises(DimensionMismatch):
        record_from_payload({"entries": [[1, 2, 3], [4, 5, 6]]})
    with pytest.raises(DimensionMismatch):
        record_from_payload({"dim": 3, "entries": [[1, 2], [3, 4]]})


def test_payload_rejects_non_finite():
    with pytest.raises(NonFinite):
        record_from_payload({"entries": [[float("nan"), 0], [0, 1]]})
    with pytest.raises(NonFinite):
        record_from_payload({"entries": [[{"re": 0, "im": float("inf")}, 0], [0, 1]]})


def test_save_load_roundtrip_exact(tmp_path):
    rng = np.random.default_rng(3)
    m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    m.setflags(write=False)
    rec = MatrixRecord(name="roundtrip", matrix=m, reference_spectrum=(1 + 2j,))
    path = tmp_path / "m.json"
    save_matrix(rec, path)
    back = load_matrix(path)
    assert back.name == "roundtrip"
    assert np.array_equal(back.matrix, m)  # bit-exact through the JSON format
    assert back.reference_spectrum == (1 + 2j,)


def test_load_matrix_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ParseError):
        load_matrix(path)


def test_record_to_payload_keeps_full_precision():
    v = 1 / 3 + (2 / 7) * 1j
    m = np.array([[v, 0], [0, 1]], dtype=complex)
    m.setflags(write=False)
    doc = record_to_payload(MatrixRecord("p", m, ()))
    redone = json.loads(json.dumps(doc))
    assert redone["entries"][0][0]["re"] == v.real
    assert redone["entries"][0][0]["im"] == v.imag
