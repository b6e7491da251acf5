import json

import pytest
from fastapi.testclient import TestClient

from surfstudy import create_app, synthesize_dataset, write_dataset
from surfstudy.protocol import TASK_DISCRIMINATION, TASK_MAXIMUM


@pytest.fixture()
def data_dir(tmp_path):
    # small grids keep scene exports fast; the service picks the dataset up
    # from the manifest instead of synthesizing its own 64x64 one
    write_dataset(synthesize_dataset(7, n_rows=12, n_cols=12), tmp_path)
    return tmp_path


@pytest.fixture()
def client(data_dir):
    with TestClient(create_app(data_dir)) as c:
        yield c


def make_body(trial, chosen=None, **over):
    body = {
        "trial_id": trial["trial_id"],
        "participant_id": "p01",
        "chosen_year": chosen or trial["options"][0],
        "elapsed_ms": 1234.5,
        "confirmed": True,
        "client_timestamp": "2026-08-22T12:00:00Z",
    }
    body.update(over)
    return body


def test_healthz(client):
    r = client.get("/healthz")
    assert r.status_code == 200
    assert r.json()["status"] == "ok"


def test_plan_has_no_answers(client):
    plan = client.get("/api/plan/p01").json()
    assert plan["participant_id"] == "p01"
    assert len(plan["trials"]) == 36
    for t in plan["trials"]:
        assert set(t) == {"trial_id", "technique", "n_years", "task", "years", "options"}


def test_plan_stable_across_requests_and_restarts(data_dir):
    with TestClient(create_app(data_dir)) as c:
        first = c.get("/api/plan/p01").json()
        assert c.get("/api/plan/p01").json() == first
    with TestClient(create_app(data_dir)) as c:
        assert c.get("/api/plan/p01").json() == first


def test_trial_scene_payload(client):
    plan = client.get("/api/plan/p01").json()
    trial = plan["trials"][0]
    r = client.get(f"/api/trial/{trial['trial_id']}/scene")
    assert r.status_code == 200
    payload = r.json()
    assert payload["scene"]["schema"] == "surfstudy-scene/1"
    assert payload["scene"]["technique"] == trial["technique"]
    assert len(payload["meshes"]) == trial["n_years"]
    info = payload["trial"]
    assert info["trial_id"] == trial["trial_id"]
    assert "correct_year" not in info
    assert info["question"]
    assert len(info["probes"]) == trial["n_years"]
    for probe in info["probes"]:
        assert set(probe) == {"year_label", "x", "y"}


def test_probe_positions_follow_task(client):
    plan = client.get("/api/plan/p01").json()
    for trial in plan["trials"]:
        info = client.get(f"/api/trial/{trial['trial_id']}/scene").json()["trial"]
        spots = [(p["x"], p["y"]) for p in info["probes"]]
        if trial["task"] == TASK_MAXIMUM:
            assert len(set(spots)) == 1
        else:
            assert trial["task"] == TASK_DISCRIMINATION
            assert len(set(spots)) == len(spots)


def test_meshes_are_served_as_glb(client):
    plan = client.get("/api/plan/p01").json()
    trial = plan["trials"][0]
    payload = client.get(f"/api/trial/{trial['trial_id']}/scene").json()
    for url in payload["meshes"]:
        r = client.get(url)
        assert r.status_code == 200
        assert r.content[:4] == b"glTF"


def test_unknown_trial_scene_404(client):
    assert client.get("/api/trial/ghost/scene").status_code == 404


def test_practice_scene_has_no_trial(client):
    payload = client.get("/api/practice/scene").json()
    assert payload["trial"] is None
    assert payload["scene"]["technique"] == "shared_surface"
    assert len(payload["meshes"]) == 4


def test_response_roundtrip(client, data_dir):
    plan = client.get("/api/plan/p01").json()
    trial = plan["trials"][0]
    r = client.post(f"/api/trial/{trial['trial_id']}/response", json=make_body(trial))
    assert r.status_code == 200
    out = r.json()
    assert out["recorded"] is True
    assert "server_received" in out["record"]
    lines = (data_dir / "responses.jsonl").read_text().splitlines()
    assert len(lines) == 1
    assert json.loads(lines[0])["chosen_year"] == trial["options"][0]


def test_response_error_statuses(client):
    plan = client.get("/api/plan/p01").json()
    trial = plan["trials"][0]
    url = f"/api/trial/{trial['trial_id']}/response"

    body = make_body(trial, trial_id="other")
    assert client.post(url, json=body).status_code == 422

    assert client.post("/api/trial/ghost/response",
                       json=make_body(trial, trial_id="ghost")).status_code == 404

    assert client.post(url, json=make_body(trial, confirmed=False)).status_code == 422
    assert client.post(url, json=make_body(trial, chosen_year="1999")).status_code == 422
    assert client.post(url, json=make_body(trial, elapsed_ms=-5.0)).status_code == 422

    assert client.post(url, json=make_body(trial)).status_code == 200
    assert client.post(url, json=make_body(trial)).status_code == 409


def test_duplicate_rejected_after_restart(data_dir):
    with TestClient(create_app(data_dir)) as c:
        trial = c.get("/api/plan/p01").json()["trials"][0]
        assert c.post(f"/api/trial/{trial['trial_id']}/response",
                      json=make_body(trial)).status_code == 200
    with TestClient(create_app(data_dir)) as c:
        assert c.post(f"/api/trial/{trial['trial_id']}/response",
                      json=make_body(trial)).status_code == 409


def test_summary_reflects_responses(client):
    plan = client.get("/api/plan/p01").json()
    for trial in plan["trials"][:4]:
        client.post(f"/api/trial/{trial['trial_id']}/response", json=make_body(trial))
    summary = client.get("/api/summary").json()
    assert not summary["empty"]
    assert sum(v for k, v in summary["counts"].items() if k.count(":") == 2) == 4


def test_summary_empty_initially(client):
    assert client.get("/api/summary").json()["empty"] is True


def test_scripted_full_session(client, data_dir):
    """A scripted client standing in for the runner: finish all 36 trials."""
    plan = client.get("/api/plan/p01").json()
    assert len(plan["trials"]) == 36
    for trial in plan["trials"]:
        payload = client.get(f"/api/trial/{trial['trial_id']}/scene").json()
        assert payload["trial"]["options"] == trial["options"]
        body = make_body(trial, chosen=payload["trial"]["options"][-1])
        r = client.post(f"/api/trial/{trial['trial_id']}/response", json=body)
        assert r.status_code == 200
    lines = (data_dir / "responses.jsonl").read_text().splitlines()
    assert len(lines) == 36
    summary = client.get("/api/summary").json()
    total = sum(v for k, v in summary["counts"].items() if k.count(":") == 2)
    assert total == 36
    for key, pct in summary["accuracy_pct"].items():
        assert 0.0 <= pct <= 100.0


def test_frontend_mount(data_dir, tmp_path_factory):
    site = tmp_path_factory.mktemp("site")
    (site / "index.html").write_text("<!doctype html><title>study</title>")
    with TestClient(create_app(data_dir, frontend_dir=site)) as c:
        r = c.get("/")
        assert r.status_code == 200
        assert "study" in r.text


def test_scene_cache_reuses_export(client, data_dir):
    plan = client.get("/api/plan/p01").json()
    same = [t for t in plan["trials"]
            if t["technique"] == plan["trials"][0]["technique"]
            and t["n_years"] == plan["trials"][0]["n_years"]]
    a = client.get(f"/api/trial/{same[0]['trial_id']}/scene").json()
    b = client.get(f"/api/trial/{same[1]['trial_id']}/scene").json()
    assert a["scene"] == b["scene"]
    assert a["meshes"] == b["meshes"]
