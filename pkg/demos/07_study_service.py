"""
Study service: the HTTP loop a session runs on
==============================================

One data directory holds everything: dataset, per-condition scene exports,
participant roster, response log. The app is deterministic given that
directory, and correct answers never appear in any payload. Here a scripted
client plays the part of the browser runner.
"""

import json
import tempfile

from fastapi.testclient import TestClient

from surfstudy import create_app

data_dir = tempfile.mkdtemp(prefix="surfstudy-data-")
client = TestClient(create_app(data_dir))

print("health:", client.get("/healthz").json())

# a participant id fetches (and implicitly registers) a 36-trial plan
plan = client.get("/api/plan/demo").json()
first = plan["trials"][0]
print("plan has", len(plan["trials"]), "trials; first:", first)

# the scene payload bundles the manifest, mesh URLs, and probe markers
payload = client.get(f"/api/trial/{first['trial_id']}/scene").json()
print("\nscene technique:", payload["scene"]["technique"])
print("meshes:", payload["meshes"])
print("question:", payload["trial"]["question"])
for probe in payload["trial"]["probes"]:
    print("  probe %s at (%.2f, %.2f)" % (probe["year_label"], probe["x"], probe["y"]))

# answering: confirmed choice plus the client-side stopwatch reading
body = {
    "trial_id": first["trial_id"],
    "participant_id": "demo",
    "chosen_year": first["options"][0],
    "elapsed_ms": 4321.0,
    "confirmed": True,
    "client_timestamp": "2026-08-22T10:00:00Z",
}
print("\nfirst POST:", client.post(f"/api/trial/{first['trial_id']}/response",
                                   json=body).status_code)
print("repeat POST:", client.post(f"/api/trial/{first['trial_id']}/response",
                                  json=body).status_code, "(each trial answers once)")

# finish the rest of the session mechanically
for trial in plan["trials"][1:]:
    body = {
        "trial_id": trial["trial_id"], "participant_id": "demo",
        "chosen_year": trial["options"][-1], "elapsed_ms": 1500.0,
        "confirmed": True, "client_timestamp": "2026-08-22T10:05:00Z",
    }
    client.post(f"/api/trial/{trial['trial_id']}/response", json=body)

summary = client.get("/api/summary").json()
print("\nsummary cells:", json.dumps(summary["accuracy_pct"], indent=2))
