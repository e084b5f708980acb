"""HTTP service endpoints, exercised in-process via the test client."""

import numpy as np
import pytest
from fastapi.testclient import TestClient

from nonherm_vvqe import eigen
from nonherm_vvqe.matrices import builtin
from nonherm_vvqe.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def as_complex(doc):
    return complex(doc["re"], doc["im"])


def test_root_reports_name_and_version(client):
    r = client.get("/")
    assert r.status_code == 200
    body = r.json()
    assert body["name"] == "nonherm-vvqe"
    assert body["version"]


def test_matrix_catalog(client):
    r = client.get("/matrices")
    assert r.status_code == 200
    entries = r.json()["matrices"]
    assert len(entries) == 9
    by_name = {e["name"]: e for e in entries}
    assert by_name["M1"] == {"name": "M1", "dim": 2, "hermitian": False}
    assert by_name["A"]["hermitian"] is True
    assert by_name["M3"]["dim"] == 8


def test_solve_builtin_matrix(client):
    req = {"matrix": "M1", "options": {"starts": 4, "seed": 7}}
    r = client.post("/solve", json=req)
    assert r.status_code == 200
    body = r.json()
    assert body["matrix_name"] == "M1"
    assert body["dim"] == 2
    assert body["starts"] == 8
    assert len(body["eigenpairs"]) == 2
    truth = eigen(builtin("M1").matrix).eigenvalues
    for pair in body["eigenpairs"]:
        lam = as_complex(pair["eigenvalue"])
        assert min(abs(lam - mu) for mu in truth) <= 1e-6
        assert pair["variance"] <= 1e-12
        assert pair["gamma"] == pytest.approx(-2 * lam.imag)
    assert len(body["oracle_eigenvalues"]) == 2
    # identical request, identical bytes: no timestamps or run identifiers
    again = client.post("/solve", json=req)
    assert again.content == r.content


def test_solve_inline_matrix_payload(client):
    req = {
        "matrix": {"name": "custom", "entries": [["1+0i", "0"], ["0", "3-1i"]]},
        "options": {"starts": 3, "seed": 2},
    }
    r = client.post("/solve", json=req)
    assert r.status_code == 200
    body = r.json()
    assert body["matrix_name"] == "custom"
    lams = [as_complex(p["eigenvalue"]) for p in body["eigenpairs"]]
    assert any(abs(l - (1 + 0j)) <= 1e-6 for l in lams)
    assert any(abs(l - (3 - 1j)) <= 1e-6 for l in lams)


def test_solve_unknown_name_is_400(client):
    r = client.post("/solve", json={"matrix": "M9", "options": {}})
    assert r.status_code == 400
    body = r.json()
    assert body["error"] == "UnknownMatrix"
    assert "M9" in body["detail"]


def test_solve_malformed_options_is_422(client):
    r = client.post("/solve", json={"matrix": "M1", "options": {"starts": 0}})
    assert r.status_code == 422
    r = client.post("/solve", json={"matrix": "M1", "options": {"bogus": 1}})
    assert r.status_code == 422


def test_solve_without_convergence_is_409(client):
    req = {"matrix": "M1", "options": {"starts": 1, "max_iter": 2}}
    r = client.post("/solve", json=req)
    assert r.status_code == 409
    assert r.json()["error"] == "NoConvergedRuns"


def test_sweep_endpoint(client):
    req = {"matrix": "F", "grid": [0.1, 2.0], "options": {"seed": 1}}
    r = client.post("/sweep", json=req)
    assert r.status_code == 200
    body = r.json()
    assert body["matrix_name"] == "F"
    assert [e["init_angle"] for e in body["entries"]] == [0.1, 2.0]
    truth = eigen(builtin("F").matrix).eigenvalues
    for entry in body["entries"]:
        assert entry["variance"] <= 1e-10
        lam = as_complex(entry["eigenvalue"])
        assert min(abs(lam - mu) for mu in truth) <= 1e-6
    # an empty grid fails validation before reaching the solver
    r = client.post("/sweep", json={"matrix": "F", "grid": []})
    assert r.status_code == 422


def test_landscape_endpoint_reduced(client):
    r = client.post("/landscape", json={"matrix": "M1", "resolution": 11})
    assert r.status_code == 200
    body = r.json()
    assert body["axes_kind"] == "reduced"
    assert len(body["thetas"]) == 11
    assert len(body["costs"]) == 11
    assert len(body["costs"][0]) == 11
    assert body["eig_real"] is None


def test_landscape_endpoint_single_axis(client):
    r = client.post(
        "/landscape", json={"matrix": "A", "axes": [1], "resolution": 51}
    )
    assert r.status_code == 200
    body = r.json()
    assert body["axes_kind"] == "full"
    assert body["axis_indices"] == [1]
    assert len(body["costs"]) == 51
    assert len(body["eig_real"]) == 51
    r = client.post("/landscape", json={"matrix": "A", "resolution": 1})
    assert r.status_code == 422


def test_oracle_endpoint_with_vectors(client):
    r = client.post("/oracle", json={"matrix": "M2", "want_vectors": True})
    assert r.status_code == 200
    body = r.json()
    assert len(body["eigenvalues"]) == 4
    assert len(body["eigenvectors"]) == 4
    assert all(res <= 1e-8 for res in body["residuals"])
    m = builtin("M2").matrix
    for lam_doc, vec_doc in zip(body["eigenvalues"], body["eigenvectors"]):
        lam = as_complex(lam_doc)
        v = np.array([as_complex(c) for c in vec_doc])
        assert np.linalg.norm(m @ v - lam * v) <= 1e-8 * np.linalg.norm(m)


def test_oracle_endpoint_values_only(client):
    r = client.post("/oracle", json={"matrix": "M1"})
    assert r.status_code == 200
    body = r.json()
    assert body["eigenvectors"] is None
    assert body["residuals"] is None
    truth = eigen(builtin("M1").matrix).eigenvalues
    got = [as_complex(z) for z in body["eigenvalues"]]
    assert got == pytest.approx(list(truth))


def test_compare_endpoint(client):
    req = {"matrix": "A", "options": {"starts": 2, "seed": 3}}
    r = client.post("/compare", json=req)
    assert r.status_code == 200
    body = r.json()
    assert body["hermitian"] is True
    assert body["vqe_note"] is None
    lam_min = float(np.min(np.linalg.eigvalsh(builtin("A").matrix)))
    assert body["vqe_value"] == pytest.approx(lam_min, abs=1e-6)
    assert body["metrics"]["plain_strings"] >= 1
    assert body["rvvqe_best_cost"] <= 1e-12


def test_trace_endpoint(client):
    req = {"matrix": "M1", "runs": 2, "options": {"seed": 4}}
    r = client.post("/trace", json=req)
    assert r.status_code == 200
    body = r.json()
    assert body["matrix_name"] == "M1"
    assert len(body["series"]) == 2
    for series in body["series"]:
        assert series["points"]
        costs = [p["cost"] for p in series["points"]]
        assert all(b <= a + 1e-15 for a, b in zip(costs, costs[1:]))
        assert series["final_cost"] <= 1e-12
        assert series["converged"] is True
