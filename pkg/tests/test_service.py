import math

import numpy as np
import pytest
from fastapi.testclient import TestClient

from optomech import derive_params
from optomech.analytic import lin_energy, quad_spectrum
from optomech.service.app import create_app

PAPER = derive_params(100.0, 0.01)
SMALL_CONFIG = {"n_max": 12, "m_max": 16, "t_steps": 40}


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(), raise_server_exceptions=False)


def test_info(client):
    reply = client.get("/api/info")
    assert reply.status_code == 200
    body = reply.json()
    assert body["name"] == "optomech"
    assert "mic2" in body["models"]


def test_spectrum_endpoint_matches_closed_form(client):
    reply = client.post("/api/spectrum", json={
        "config": SMALL_CONFIG, "model": "quad", "n_keep": 3, "m_keep": 2,
    })
    assert reply.status_code == 200
    body = reply.json()
    assert body["meta"]["model"] == "quad"
    assert len(body["rows"]) == 4 * 3
    for row in body["rows"]:
        want = quad_spectrum(row["n"], row["m"], PAPER)
        assert abs(row["energy"] - want.energy) / want.energy < 1e-8
        assert abs(row["x_mean"] - want.x_bar) < 1e-8
        assert row["confidence"] < 1e-10


def test_dynamics_endpoint_matches_oracle(client):
    reply = client.post("/api/dynamics", json={"config": SMALL_CONFIG, "model": "lin"})
    assert reply.status_code == 200
    rows = reply.json()["rows"]
    assert len(rows) == 41
    scale = PAPER.G / PAPER.Omega**2 * 4.5
    for row in rows:
        want = scale * (1.0 - math.cos(PAPER.Omega * row["t"]))
        assert abs(row["x_mean"] - want) < 1e-6
        assert row["norm_drift"] <= 1e-10
        assert row["a_abs"] == pytest.approx(math.hypot(row["a_re"], row["a_im"]), abs=1e-15)


def test_compare_spectrum_endpoint(client):
    config = dict(SMALL_CONFIG, models=["lin", "quad"])
    reply = client.post("/api/compare/spectrum", json={"config": config, "n_keep": 4})
    assert reply.status_code == 200
    body = reply.json()
    assert body["meta"]["benchmark"] == "mic"
    assert len(body["rows"]) == 2 * 5
    lin_rows = [row for row in body["rows"] if row["model"] == "lin"]
    quad_rows = [row for row in body["rows"] if row["model"] == "quad"]
    for n in range(1, 5):
        assert quad_rows[n]["err_E"] < lin_rows[n]["err_E"]


def test_compare_dynamics_endpoint(client):
    config = dict(SMALL_CONFIG, models=["lin", "mic2"])
    reply = client.post("/api/compare/dynamics", json={"config": config})
    assert reply.status_code == 200
    body = reply.json()
    summary = {entry["model"]: entry for entry in body["summary"]}
    assert summary["mic2"]["err_x_avg"] < summary["lin"]["err_x_avg"]
    assert len(body["rows"]) == 2 * 41


def test_converge_endpoint(client):
    reply = client.post("/api/converge", json={
        "config": SMALL_CONFIG,
        "model": "lin",
        "ladder": [[8, 10], [12, 16]],
        "quantities": ["energy"],
    })
    assert reply.status_code == 200
    body = reply.json()
    assert body["failures"] == []
    row = body["rows"][0]
    assert (row["n_max_from"], row["n_max_to"]) == (8, 12)
    assert row["converged"] is True
    assert row["max_change"] < 1e-6


def test_pathology_endpoint(client):
    reply = client.post("/api/pathology", json={"config": {}})
    assert reply.status_code == 200
    body = reply.json()
    assert body["n_star"] == 1_000_000
    assert body["energy_before"] > 0.0 > body["energy_at"]
    assert not body["saturated"]


def test_validation_errors_are_422(client):
    assert client.post("/api/spectrum", json={
        "config": {"mystery_knob": 1}, "model": "lin",
    }).status_code == 422
    assert client.post("/api/spectrum", json={
        "config": SMALL_CONFIG, "model": "septic",
    }).status_code == 422
    reply = client.post("/api/dynamics", json={
        "config": dict(SMALL_CONFIG, alpha_re=4.0), "model": "lin",
    })
    assert reply.status_code == 422
    assert "n_max" in reply.json()["detail"]
    assert client.post("/api/pathology", json={
        "config": {"g0_over_Omega": -1.0},
    }).status_code == 422


def test_truncation_cap_is_413(client):
    reply = client.post("/api/spectrum", json={
        "config": {"n_max": 300}, "model": "lin",
    })
    assert reply.status_code == 413


def test_identical_requests_are_byte_identical(client):
    payload = {"config": SMALL_CONFIG, "model": "mic", "n_keep": 4, "m_keep": 3}
    first = client.post("/api/spectrum", json=payload)
    second = client.post("/api/spectrum", json=payload)
    assert first.content == second.content
