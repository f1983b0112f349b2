import pytest
from fastapi.testclient import TestClient

from main import app
from tests.test_strategy import two_memory_strategy
from utils.game_io import fixture


@pytest.fixture
def client():
    return TestClient(app)


def test_root(client):
    datos = client.get("/").json()
    assert datos["status"] == "success"
    assert datos["schema_version"] == "1.0"


def test_fixture_text(client):
    respuesta = client.get("/api/fixtures/ex1")
    assert respuesta.status_code == 200
    assert respuesta.json()["nodes"] == ["v1", "v2", "v3", "v4", "v5"]
    assert respuesta.json()["game"].startswith("oblige 1")


def test_unknown_fixture(client):
    assert client.get("/api/fixtures/ex99").status_code == 404


def test_solve_with_strategy(client):
    datos = client.post("/api/solve", json={"fixture": "ex1-dashed", "strategy": True}).json()
    assert datos["status"] == "success"
    assert datos["report"]["winning_region"] == ["v1", "v2", "v3", "v4", "v5"]
    assert datos["report"]["verification"]["strong_ok"]
    assert datos["strategy"].startswith("oblige-strategy 1")


def test_solve_game_text_with_prior(client):
    texto = "oblige 1\nnodes: p q\nowners: AE\ncolors: a\nedge p p {a}\nedge p q {}\nedge q q {}\n" \
            "strong: Inf(a)\nweak: true\n"
    datos = client.post("/api/solve", json={"game": texto, "engine": "prior"}).json()
    assert datos["report"]["winning_region"] == []


def test_solve_guard(client):
    datos = client.post("/api/solve", json={"fixture": "ex1", "max_strong_colors": 2}).json()
    assert datos["status"] == "error"
    assert "Límite de recursos" in datos["mensaje"]


def test_verify_counterexample(client):
    texto = two_memory_strategy(fixture("ex1-dashed"))
    datos = client.post("/api/verify", json={"fixture": "ex1-dashed", "strategy": texto}).json()
    assert datos["status"] == "failed"
    assert not datos["verification"]["strong_ok"]
    assert datos["verification"]["counterexample"]["loop"]


def test_verify_parse_error(client):
    datos = client.post("/api/verify", json={"fixture": "ex1", "strategy": "hola"}).json()
    assert datos["status"] == "error"


@pytest.mark.parametrize("cuerpo", [{}, {"game": "oblige 1", "fixture": "ex1"}, {"fixture": "ex1", "engine": "x"}])
def test_invalid_body(client, cuerpo):
    respuesta = client.post("/api/solve", json=cuerpo)
    assert respuesta.status_code == 422
    assert respuesta.json()["status"] == "error"
