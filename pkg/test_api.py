#!/usr/bin/env python3
"""
Тест эндпоинтов HTTP-сервиса через TestClient (без запущенного uvicorn)
"""

import os
import sys
import tempfile
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

_DB_DIR = tempfile.mkdtemp(prefix="percolation-api-")
os.environ["PERC_DATABASE_URL"] = f"sqlite:///{Path(_DB_DIR) / 'runs.db'}"

BACKEND = Path(__file__).resolve().parent / "backend"
if str(BACKEND) not in sys.path:
    sys.path.insert(0, str(BACKEND))

from percolation.config import get_settings  # noqa: E402

get_settings.cache_clear()

from main import app  # noqa: E402


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def test_root(client):
    response = client.get("/")
    assert response.status_code == 200
    body = response.json()
    assert body["endpoints"]["pc"] == "/simulation/pc"
    assert body["version"]


def test_parameters(client):
    response = client.get("/bounds/parameters", params={"n": 16, "k": 2})
    assert response.status_code == 200
    body = response.json()
    assert (body["D"], body["L"], body["i_star"]) == (6, 8, 3)
    assert body["p_star"] == pytest.approx(2.0 ** -15)

    assert client.get("/bounds/parameters", params={"n": 0, "k": 2}).status_code == 422


def test_bounds_report_is_archived(client):
    response = client.post("/bounds/report", json={"n": 16, "k": 2})
    assert response.status_code == 200
    run = response.json()
    assert run["command"] == "bounds"
    assert run["result"]["parameters"]["D"] == 6
    assert "second_moment" in run["result"]

    stored = client.get(f"/runs/{run['id']}")
    assert stored.status_code == 200
    assert stored.json()["result"] == run["result"]

    listing = client.get("/runs/", params={"command": "bounds"}).json()
    assert listing["total"] >= 1
    assert any(r["id"] == run["id"] for r in listing["runs"])


def test_bounds_report_large_n(client):
    response = client.post("/bounds/report", json={"n": 6400, "k": 2})
    assert response.status_code == 200
    second = response.json()["result"]["second_moment"]
    assert second["L"] == 3200
    assert len(second["terms"]) == 3201
    assert second["ratio_bound_infinite"] is False


def test_bounds_report_rejects_bad_probability(client):
    response = client.post("/bounds/report", json={"n": 16, "k": 2, "p": "2"})
    assert response.status_code == 400


def test_polynomial(client):
    response = client.post("/oracle/polynomial", json={"n": 2, "k": 2})
    assert response.status_code == 200
    result = response.json()["result"]
    assert result["counts"] == [0, 0, 2, 4, 1]
    assert result["root"] == pytest.approx(0.5406, abs=1e-3)

    assert client.post("/oracle/polynomial", json={"n": 5, "k": 2}).status_code == 413


def test_quadruples(client):
    response = client.post("/oracle/quadruples", json={"m": 2, "k": 2, "t": 2})
    assert response.status_code == 200
    assert response.json()["result"]["matches"] is True


def test_estimate(client):
    response = client.post("/simulation/estimate", json={"n": 2, "k": 2, "p": 1.0, "trials": 50, "seed": 1})
    assert response.status_code == 200
    result = response.json()["result"]
    assert result["p_hat"] == 1.0 and result["hits"] == 50


def test_pc_bracket_failure(client):
    response = client.post("/simulation/pc", json={"n": 2, "k": 2, "target": 1.0, "trials": 50, "seed": 1})
    assert response.status_code == 422
    detail = response.json()["detail"]
    assert detail["high"]["p_hat"] == 1.0
    assert "message" in detail


def test_missing_run(client):
    assert client.get("/runs/999999").status_code == 404


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
