import json

import pytest
from fastapi.testclient import TestClient

from rulewb.server import create_app

from conftest import FIXTURES


@pytest.fixture
def client():
    return TestClient(create_app())


@pytest.fixture
def loaded(client):
    """Upload the case-study fixtures; returns (client, ids dict)."""
    did = client.post(
        "/datasets", content=(FIXTURES / "casestudy.csv").read_bytes()
    ).json()["id"]
    oid = client.post(
        "/ontologies", content=(FIXTURES / "casestudy_ontology.json").read_bytes()
    ).json()["id"]
    rid = client.post(
        f"/rulesets?dataset={did}", content=(FIXTURES / "table3_rules.txt").read_bytes()
    ).json()["ruleset"]
    sid = client.post(
        "/sessions", json={"ruleset": rid, "ontology": oid, "dataset": did}
    ).json()["id"]
    return client, {"dataset": did, "ontology": oid, "ruleset": rid, "session": sid}


def test_healthz(client):
    assert client.get("/healthz").status_code == 200


def test_dataset_stats(client):
    resp = client.post("/datasets", content=(FIXTURES / "casestudy.csv").read_bytes())
    assert resp.status_code == 200
    assert resp.json()["stats"]["n"] == 6


def test_extension_q1(loaded):
    client, ids = loaded
    resp = client.get(
        f"/ontologies/{ids['ontology']}/extension",
        params={"expr": "Q1", "dataset": ids["dataset"]},
    )
    assert resp.json()["count"] == 6


def test_extension_json_expr(loaded):
    client, ids = loaded
    expr = json.dumps({"and": [{"concept": "ComfortApartment"}, {"answerIn": [1, 2]}]})
    resp = client.get(
        f"/ontologies/{ids['ontology']}/extension",
        params={"expr": expr, "dataset": ids["dataset"]},
    )
    assert resp.json()["count"] == 10


def test_extension_unknown_concept(loaded):
    client, ids = loaded
    resp = client.get(
        f"/ontologies/{ids['ontology']}/extension", params={"expr": "Ghost"}
    )
    assert resp.status_code == 404
    assert resp.json()["error"]["code"] == "unknown_concept"


def test_concept_tree(loaded):
    client, ids = loaded
    concepts = client.get(f"/ontologies/{ids['ontology']}/concepts").json()["concepts"]
    by_name = {c["name"]: c for c in concepts}
    assert by_name["Q1"]["kind"] == "leaf"
    assert by_name["District"]["kind"] == "generalized"
    assert by_name["UnsatPrice"]["kind"] == "defined"
    assert by_name["Q44"]["parents"] == ["ComfortApartment"]


def test_mine_endpoint(client):
    csv = "a,b\n1,1\n1,1\n1,\n,1\n"
    did = client.post("/datasets", content=csv.encode()).json()["id"]
    resp = client.post(
        "/mine",
        json={"dataset": did, "min_sup": "0.5", "max_sup": "1", "min_conf": "0.6"},
    )
    assert resp.status_code == 200
    rid = resp.json()["ruleset"]
    rules = client.get(f"/rulesets/{rid}").json()
    assert rules["total"] == resp.json()["count"]


def test_pagination_concatenates(loaded):
    client, ids = loaded
    full = client.get(f"/rulesets/{ids['ruleset']}?offset=0&limit=100").json()["rules"]
    paged = []
    for offset in range(0, 20, 7):
        paged.extend(
            client.get(f"/rulesets/{ids['ruleset']}?offset={offset}&limit=7").json()["rules"]
        )
    assert paged == full


def test_apply_and_log(loaded, table2_script):
    client, ids = loaded
    sid = ids["session"]
    resp = client.post(f"/sessions/{sid}/schemas", json={"script": table2_script})
    assert resp.status_code == 200
    assert len(resp.json()["schemas"]) == 5

    r = client.post(f"/sessions/{sid}/apply", json={"op": "prune", "schema": "RS1"})
    assert r.status_code == 200
    assert r.json()["working_count"] == 18

    r = client.post(
        f"/sessions/{sid}/apply",
        json={"op": "unexpected", "scope": "condition", "schema": "RS5"},
    )
    assert r.json()["entry"]["result_count"] == 4
    result = client.get(f"/results/{r.json()['result']}").json()
    assert result["total"] == 4

    log = client.get(f"/sessions/{sid}/log").json()
    assert len(log["log"]) == 2
    assert log["working_count"] == 18


def test_undo_endpoint(loaded):
    client, ids = loaded
    sid = ids["session"]
    client.post(f"/sessions/{sid}/schemas", json={"script": "schema S: <Q1 -> Q2>\n"})
    client.post(f"/sessions/{sid}/apply", json={"op": "prune", "schema": "S"})
    resp = client.post(f"/sessions/{sid}/undo")
    assert resp.status_code == 200
    assert resp.json()["log_length"] == 0

    resp = client.post(f"/sessions/{sid}/undo")
    assert resp.status_code == 400
    assert resp.json()["error"]["code"] == "nothing_to_undo"


def test_unknown_ids_404(client):
    assert client.get("/rulesets/deadbeef").status_code == 404
    assert client.get("/sessions/deadbeef/log").status_code == 404


def test_validation_errors_400(loaded):
    client, ids = loaded
    sid = ids["session"]
    resp = client.post(f"/sessions/{sid}/schemas", json={"script": "schema <bad\n"})
    assert resp.status_code == 400
    body = resp.json()["error"]
    assert body["code"] == "script_syntax_error"
    assert body["location"] == [1, 1]


def test_report_endpoint(loaded, table2_script):
    client, ids = loaded
    sid = ids["session"]
    client.post(f"/sessions/{sid}/schemas", json={"script": table2_script})
    for op in (
        {"op": "prune", "schema": "RS1"},
        {"op": "conform", "schema": "RS3"},
    ):
        client.post(f"/sessions/{sid}/apply", json=op)
    report = client.get(f"/sessions/{sid}/report?format=json").json()
    assert len(report["log"]) == 2
    csv_report = client.get(f"/sessions/{sid}/report?format=csv")
    assert csv_report.headers["content-type"].startswith("text/csv")
