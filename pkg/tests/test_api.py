from sqlmodel import select

from app.models.run import RunRecord
from tests.conftest import fixture_path


def upload(name):
    with open(fixture_path(name), "rb") as fh:
        return {"file": (name, fh.read(), "text/plain")}


# 1. root and catalog
def test_root(client):
    response = client.get("/")
    assert response.status_code == 200
    assert response.json()["status"] == "Healthy"


def test_list_families(client):
    response = client.get("/api/families")
    assert response.status_code == 200
    families = [f["family"] for f in response.json()]
    assert families[:2] == ["N", "N_inf"]
    assert "Q+" in families


def test_get_family(client):
    response = client.get("/api/families/T1")
    assert response.status_code == 200
    body = response.json()
    assert body["claimed_class"] == "PreCu"
    assert body["finite"] is False

    response = client.get("/api/families/N_inf")
    assert response.json()["claimed_class"] == "Cu"


def test_unknown_family(client):
    response = client.get("/api/families/Z")
    assert response.status_code == 400
    assert response.json()["detail"]["code"] == "UnknownFamily"


# 2. way-below and sup queries
def test_way_below_in_naturals(client):
    response = client.post("/api/way-below", json={"family": "N", "x": "2", "y": "5"})
    assert response.status_code == 200
    assert response.json()["verdict"] == "True"


def test_one_is_not_compact_in_rationals(client):
    response = client.post("/api/way-below", json={"family": "Q+", "x": "1", "y": "1"})
    body = response.json()
    assert body["verdict"] == "False"
    assert body["witness"] is not None


def test_way_below_rejects_bad_elements(client):
    response = client.post("/api/way-below", json={"family": "N", "x": "1/2", "y": "1"})
    assert response.status_code == 422
    response = client.post("/api/way-below", json={"family": "N", "x": "1", "y": "2", "budget": 0})
    assert response.status_code == 422


def test_sup_of_named_chains(client):
    ramp = client.post("/api/sup", json={"family": "Q+", "chain": "ramp 1"}).json()
    assert (ramp["status"], ramp["value"]) == ("Sup", "1")
    root = client.post("/api/sup", json={"family": "Q+", "chain": "sqrt2"}).json()
    assert root["status"] == "NoSup"
    assert root["value"] is None
    top = client.post("/api/sup", json={"family": "N_inf", "chain": "counting"}).json()
    assert top["value"] == "∞"


def test_sup_of_explicit_terms(client):
    body = client.post("/api/sup", json={"family": "N", "terms": ["1", "3"]}).json()
    assert (body["status"], body["value"]) == ("Sup", "3")


def test_sup_needs_a_linear_family_for_named_chains(client):
    response = client.post("/api/sup", json={"family": "N^2", "chain": "ramp 1"})
    assert response.status_code == 400
    response = client.post("/api/sup", json={"family": "Q+", "chain": "spiral"})
    assert response.status_code == 422


# 3. classification is archived
def test_classify_logs_a_run(client, db):
    response = client.get("/api/families/T_3/classify", params={"budget": 16})
    assert response.status_code == 200
    assert response.json()["summary"] == "PreCu: pass; C: pass; Cu: pass"

    records = db.exec(select(RunRecord)).all()
    assert len(records) == 1
    assert (records[0].command, records[0].target, records[0].budget) == ("classify", "T_3", 16)

    runs = client.get("/api/runs").json()
    assert runs[0]["verdict"] == "pass"
    detail = client.get(f"/api/runs/{runs[0]['id']}").json()
    assert detail["report"]["family"] == "T_3"


def test_missing_run(client):
    response = client.get("/api/runs/999")
    assert response.status_code == 404
    assert response.json()["detail"]["code"] == "NotFound"


# 4. spec uploads
def test_validate_spec(client):
    response = client.post("/api/spec/validate", files=upload("finite.precu"))
    assert response.status_code == 200
    body = response.json()
    assert body["valid"] is True
    assert body["document"]["monoids"] == ["C2", "T3"]
    assert body["document"]["source"] == "finite.precu"


def test_validate_broken_spec(client):
    response = client.post("/api/spec/validate", files=upload("broken.precu"))
    assert response.status_code == 422
    detail = response.json()["detail"]
    assert detail["code"] == "ValidationError"
    assert detail["object"] == "B"


def test_validate_empty_spec(client):
    response = client.post("/api/spec/validate", files={"file": ("empty.precu", b"", "text/plain")})
    assert response.status_code == 422
    assert response.json()["detail"] == {"code": "ParseError", "line": 1, "col": 1, "message": "no declarations"}


def test_run_spec_archives_every_command(client):
    response = client.post("/api/spec/run", files=upload("finite.precu"), data={"budget": "16"})
    assert response.status_code == 200
    body = response.json()
    assert body["exit_code"] == 0
    assert len(body["results"]) == 4
    assert all(r["run_id"] is not None for r in body["results"])

    checks = client.get("/api/runs", params={"command": "check"}).json()
    assert len(checks) == 2
    assert {r["target"] for r in checks} == {"T3", "trunc"}
    assert all(r["budget"] == 16 for r in checks)

    newest = client.get("/api/runs", params={"limit": 1}).json()
    assert len(newest) == 1
    assert newest[0]["id"] == body["results"][-1]["run_id"]
