"""HTTP service endpoints."""

import time

import pytest
from fastapi.testclient import TestClient

from drinfeld.api import create_app


@pytest.fixture()
def client():
    return TestClient(create_app())


def test_health(client):
    assert client.get("/health").json() == {"status": "ok"}


def test_cvalue_carlitz_base_one(client):
    r = client.post("/cvalue", json={"field": {"p": 3}, "model": "carlitz",
                                     "place": "t", "base": "1"})
    assert r.status_code == 200
    body = r.json()
    assert body["result"] == {"c": 0}
    assert body["config"]["model"] == "t + tau"
    assert body["config"]["field"] == {"p": 3, "k": 1, "modulus": None}


def test_cvalue_torsion(client):
    r = client.post("/cvalue", json={"field": {"p": 2}, "model": "carlitz",
                                     "place": "t^2+t+1", "base": "1"})
    assert r.json()["result"] == {"c": "inf", "torsion": True}


def test_unit_small_model(client):
    r = client.post("/unit", json={"field": {"p": 3}, "model": "t + (t^3)*tau"})
    assert r.json()["result"] == {"unit": "1 + T", "certified": True}


def test_places_extension_field_default_modulus(client):
    r = client.post("/places", json={"field": {"p": 2, "k": 2}, "degree": 1})
    body = r.json()
    assert body["config"]["field"]["modulus"] == [1, 1, 1]
    assert len(body["result"]) == 4


def test_lvalue(client):
    r = client.post("/lvalue", json={"field": {"p": 3}, "model": "carlitz",
                                     "place": "t", "prec": 3})
    body = r.json()
    assert body["result"]["valuation"] == 0
    assert body["result"]["value"].startswith("p^0*(")


def test_stats_exhaustive_cells(client):
    r = client.post("/stats", json={"field": {"p": 2}, "rank": 1,
                                    "degrees": [1, 2], "exhaustive": True,
                                    "nt_filter": "degree_one"})
    rows = r.json()["result"]
    got = {(row["degree"], row["column"]): row["rendered"] for row in rows}
    assert got == {(1, "all"): "1.14", (2, "all"): "1.71",
                   (1, "non_torsion"): "0.80", (2, "non_torsion"): "0.80"}


def test_search_job_lifecycle(client):
    r = client.post("/search", json={"field": {"p": 3}, "model": "carlitz",
                                     "max_degree": 6})
    job = r.json()["result"]["job"]
    for _ in range(240):
        s = client.get("/search/" + job).json()["result"]
        if s["status"] != "running":
            break
        time.sleep(0.25)
    assert s["status"] == "done"
    assert s["result"]["found"] == [
        {"degree": 6, "place": "t^6 + t^4 + t^3 + t^2 + 2*t + 2", "bound": 1}
    ]


def test_check_suite(client):
    r = client.post("/check", json={"suite": "stats"})
    body = r.json()["result"]
    assert body["ok"] is True
    assert all(row["suite"] == "stats" for row in body["checks"])


def test_check_euler_per_place(client):
    r = client.post("/check", json={"suite": "euler", "field": {"p": 2},
                                    "model": "carlitz", "max_degree": 2})
    body = r.json()["result"]
    assert body["ok"] is True
    assert [row["name"] for row in body["checks"]] == ["t", "t + 1", "t^2 + t + 1"]


def test_errors(client):
    assert client.post("/cvalue", json={"field": {"p": 3}, "model": "nonsense",
                                        "place": "t"}).status_code == 400
    assert client.post("/check", json={"suite": "nope"}).status_code == 400
    assert client.get("/search/deadbeef").status_code == 404
    assert client.post("/places", json={"field": {"p": 6}, "degree": 1}
                       ).status_code == 400
