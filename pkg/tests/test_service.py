import math

import numpy as np
import pytest
from fastapi.testclient import TestClient

from twinprep import formats, protocol
from twinprep.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_health(client):
    response = client.get("/api/v1/health")
    assert response.status_code == 200
    assert response.json()["status"] == "ok"


def test_run_equatorial(client):
    response = client.post("/api/v1/protocol/run",
                           json={"mode": "equatorial", "phi": 0.7})
    assert response.status_code == 200
    body = response.json()
    expected = 0.5 + 1 / (2 * math.sqrt(2))
    assert len(body["outcomes"]) == 2
    for outcome in body["outcomes"]:
        assert outcome["probability"] == pytest.approx(0.5, abs=1e-10)
        assert outcome["fidelity_B"] == pytest.approx(expected, abs=1e-9)
    assert body["pole_fidelity"] is None


def test_run_polar_with_alpha_flags_mismatch(client):
    response = client.post("/api/v1/protocol/run",
                           json={"mode": "polar", "theta": 0.9, "alpha": 1.0})
    assert response.status_code == 200
    body = response.json()
    assert body["mode"] == "general-alpha"
    assert body["pole_fidelity"] == 1.0
    assert body["pole_mismatch"] is True


def test_run_rejects_bad_angle(client):
    response = client.post("/api/v1/protocol/run",
                           json={"mode": "equatorial", "phi": 9.9})
    assert response.status_code == 422
    assert response.json()["detail"]["invariant"] == "protocol-spec"


def test_run_general_alpha_requires_alpha(client):
    response = client.post("/api/v1/protocol/run",
                           json={"mode": "general-alpha", "theta": 0.4})
    assert response.status_code == 422


def test_ree_endpoint_bell(client, bell_psi_minus):
    rho = np.outer(bell_psi_minus.amplitudes, bell_psi_minus.amplitudes.conj())
    response = client.post("/api/v1/ree",
                           json={"matrix_text": formats.dumps_matrix(rho)})
    assert response.status_code == 200
    body = response.json()
    assert body["value_bits"] == pytest.approx(1.0, abs=1e-3)
    assert body["eof_bits"] == pytest.approx(1.0, abs=1e-9)
    assert "0.6095" in body["note"] or body["reference_claims"]["equatorial"] == 0.6095
    sigma = formats.loads_matrix(body["sigma_text"])
    assert np.trace(sigma).real == pytest.approx(1.0, abs=1e-9)


def test_ree_endpoint_names_violated_invariant(client):
    text = formats.dumps_matrix(np.eye(4))  # trace 4
    response = client.post("/api/v1/ree", json={"matrix_text": text})
    assert response.status_code == 422
    assert response.json()["detail"]["invariant"] == "trace"


def test_locc_session_and_replay(client):
    response = client.post("/api/v1/locc/session",
                           json={"mode": "equatorial", "phi": 1.1, "seed": 7})
    assert response.status_code == 200
    body = response.json()
    assert body["classical_cost_bits"] == 1
    replayed = client.post("/api/v1/locc/replay",
                           json={"transcript_text": body["transcript_text"]})
    assert replayed.status_code == 200
    assert replayed.json()["matches"] is True
    assert replayed.json()["fidelity_B"] == body["fidelity_B"]


def test_locc_replay_rejects_garbage(client):
    response = client.post("/api/v1/locc/replay",
                           json={"transcript_text": "not a transcript"})
    assert response.status_code == 422
    assert response.json()["detail"]["invariant"] == "transcript"


def test_tradeoff_endpoint(client):
    response = client.post("/api/v1/tradeoff",
                           json={"alpha_steps": 2, "max_iters": 200})
    assert response.status_code == 200
    body = response.json()
    rows = formats.loads_tradeoff(body["csv_text"])
    alphas = [r.alpha for r in rows]
    assert alphas == sorted(alphas)
    assert any(abs(a - protocol.POLAR_ALPHA) < 1e-12 for a in alphas)
    assert any(abs(a - protocol.EQUATORIAL_ALPHA) < 1e-12 for a in alphas)
    assert "0.4425" in body["csv_text"]
    assert "0.6095" in body["note"]


def test_verify_endpoint_single_criterion(client):
    response = client.post("/api/v1/verify", json={"criteria": [5]})
    assert response.status_code == 200
    body = response.json()
    assert body["all_passed"] is True
    assert len(body["results"]) == 1
    record = body["results"][0]
    assert record["cid"] == 5
    assert record["passed"] is True
    assert record["seconds"] >= 0.0
