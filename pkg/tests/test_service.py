import json
import os

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from fairdiv.cli import main
from fairdiv.corpus import build
from fairdiv.model import problem_to_json
from fairdiv.server import create_app

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def fixture_path(name):
    return os.path.join(FIXTURES, f"{name}.json")


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(), raise_server_exceptions=False)


def run_cli(*args):
    return CliRunner().invoke(main, list(args))


# --- CLI ----------------------------------------------------------------------


def test_cli_solve_egalitarian_ex_a():
    res = run_cli("solve", "--rule", "egalitarian", "--in", fixture_path("ex_a_goods"))
    assert res.exit_code == 0
    doc = json.loads(res.stdout)
    assert doc["division"]["profile"] == ["64/7", "24/7"]


def test_cli_solve_competitive_enumerate_ex_c():
    res = run_cli(
        "solve", "--rule", "competitive", "--in", fixture_path("ex_c"),
        "--enumerate", "--verify",
    )
    assert res.exit_code == 0
    doc = json.loads(res.stdout)
    assert doc["division_count"] == 3
    prices = sorted(tuple(d["price"]) for d in doc["divisions"])
    assert prices == [("1", "1"), ("2/3", "4/3"), ("3/2", "1/2")]
    assert not doc["incomplete"]


def test_cli_solve_picks_max_nash_without_enumerate():
    res = run_cli("solve", "--rule", "competitive", "--in", fixture_path("ex_c"))
    doc = json.loads(res.stdout)
    assert doc["division_count"] == 1
    assert doc["divisions"][0]["price"] == ["3/2", "1/2"]


def test_cli_validation_error_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "goods", "u": [[0, 0], [1, 1]]}))
    res = run_cli("solve", "--rule", "competitive", "--in", str(bad))
    assert res.exit_code == 2
    assert json.loads(res.stderr.splitlines()[-1])["error"] == "null-row"


def test_cli_guard_exit_3(tmp_path):
    big = tmp_path / "big.json"
    big.write_text(json.dumps({"kind": "bads", "u": [[1] * 6 for _ in range(7)]}))
    res = run_cli("solve", "--rule", "competitive", "--in", str(big), "--enumerate")
    assert res.exit_code == 3
    assert json.loads(res.stderr.splitlines()[-1])["error"] == "too-large"


def test_cli_axioms_default_target():
    res = run_cli("axioms", "--in", fixture_path("ex_a_goods"))
    doc = json.loads(res.stdout)
    assert doc["target"] == "egalitarian"
    assert doc["checks"]["fair-share"]["verdict"] == "holds"
    assert doc["checks"]["envy"]["verdict"] == "holds"
    assert doc["checks"]["ete"]["verdict"] == "not-applicable"


def test_cli_axioms_with_allocation_file(tmp_path):
    alloc = tmp_path / "alloc.json"
    alloc.write_text(json.dumps([["1", "1"], ["0", "0"]]))
    res = run_cli(
        "axioms", "--in", fixture_path("ex_a_goods"),
        "--checks", "envy,competitive", "--allocation", str(alloc),
    )
    doc = json.loads(res.stdout)
    assert doc["checks"]["envy"]["verdict"] == "violated"
    assert doc["checks"]["competitive"]["verdict"] == "violated"


def test_cli_components():
    res = run_cli("components", "--in", fixture_path("comp_count_4"))
    assert json.loads(res.stdout)["count"] == 3


def test_cli_corpus():
    listing = json.loads(run_cli("corpus").stdout)
    assert len(listing["names"]) >= 12
    doc = json.loads(run_cli("corpus", "--name", "ex_b").stdout)
    assert doc["problem"]["u"] == [["2", "1"], ["0", "1"]]
    assert run_cli("corpus", "--name", "nonsense").exit_code == 2


def test_cli_demo_rm():
    doc = json.loads(run_cli("demo", "--which", "rm").stdout)
    assert doc["argument"]["group1_after_lower_bound"] == "10/9"


# --- HTTP ----------------------------------------------------------------------


def test_http_health(client):
    assert client.get("/v1/health").json() == {"status": "ok"}


def test_http_solve_ex_b(client):
    body = {"problem": problem_to_json(build("ex_b").problem), "enumerate": True}
    doc = client.post("/v1/solve", json=body).json()
    assert doc["division_count"] == 1
    assert doc["divisions"][0]["price"] == ["0", "2"]


def test_http_solve_guard_413(client):
    body = {
        "problem": {"kind": "bads", "u": [[1] * 6 for _ in range(7)]},
        "enumerate": True,
    }
    res = client.post("/v1/solve", json=body)
    assert res.status_code == 413
    assert res.json()["error"] == "too-large"


def test_http_validation_422(client):
    res = client.post(
        "/v1/solve", json={"problem": {"kind": "goods", "u": [[1, 0], [1, 0]]}}
    )
    assert res.status_code == 422
    assert res.json()["error"] == "null-column"
    assert client.post("/v1/solve", content=b"{not json").status_code == 422
    assert client.post("/v1/components", json={"problem": None}).status_code == 422


def test_http_axioms_with_allocation(client):
    body = {
        "problem": problem_to_json(build("ex_a_goods").problem),
        "allocation": [["1/5", "1"], ["4/5", "0"]],
        "checks": ["fair-share", "envy", "competitive"],
    }
    doc = client.post("/v1/axioms", json=body).json()
    assert doc["checks"]["competitive"]["verdict"] == "holds"
    assert doc["checks"]["competitive"]["price"] == ["5/4", "3/4"]


def test_http_unknown_check_422(client):
    body = {
        "problem": problem_to_json(build("ex_a_goods").problem),
        "checks": ["bogus"],
    }
    assert client.post("/v1/axioms", json=body).status_code == 422


def test_http_corpus(client):
    names = client.get("/v1/corpus").json()["names"]
    assert len(names) >= 12
    doc = client.get("/v1/corpus/comp_count_4").json()
    assert doc["expectations"]["component_count"] == 3
    assert client.get("/v1/corpus/nope").status_code == 422


def test_cli_and_http_reports_are_byte_identical(client):
    res = run_cli(
        "solve", "--rule", "competitive", "--in", fixture_path("ex_c"), "--enumerate"
    )
    body = {"problem": problem_to_json(build("ex_c").problem), "enumerate": True}
    http_bytes = client.post("/v1/solve", json=body).content
    assert res.stdout.encode() == http_bytes

    res2 = run_cli("components", "--in", fixture_path("comp_count_4"))
    http2 = client.post(
        "/v1/components",
        json={"problem": problem_to_json(build("comp_count_4").problem)},
    ).content
    assert res2.stdout.encode() == http2
