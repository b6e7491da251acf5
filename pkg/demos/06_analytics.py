"""
Analytics: from a response log to the study readout
===================================================

Responses append to a JSONL log as they arrive. The summary pools both tasks
into per-(technique, N) accuracy and completion time, then reports the
accuracy gap between the shared-location and per-year-location tasks.
"""

import random
import tempfile
from pathlib import Path

from surfstudy import (
    PlanStore,
    ResponseLog,
    TrialResponse,
    build_study_plan,
    record_response,
    summarize,
    synthesize_dataset,
    write_summary_tables,
)

dataset = synthesize_dataset(seed=7)
store = PlanStore()
for pid in ("p01", "p02", "p03"):
    store.add(build_study_plan(dataset, pid, seed=2016))

log_path = Path(tempfile.mkdtemp(prefix="surfstudy-log-")) / "responses.jsonl"
log = ResponseLog(log_path)

# simulate participants: mostly right, slower and less sure on some trials
rng = random.Random(42)
for pid in store.participants():
    for trial in store.plan(pid).trials:
        if rng.random() < 0.8:
            chosen = trial.correct_year
        else:
            chosen = rng.choice([y for y in trial.options if y != trial.correct_year])
        record_response(TrialResponse(
            trial_id=trial.trial_id,
            participant_id=pid,
            chosen_year=chosen,
            elapsed_ms=rng.uniform(2000, 15000),
            confirmed=True,
            client_timestamp="2026-08-22T10:00:00Z",
        ), store, log)

print("log lines:", len(log_path.read_text().splitlines()))

summary = summarize(log.records(), store)
print("\naccuracy by condition (%):")
for (tech, n), pct in summary.accuracy_pct.items():
    print(f"  {tech:>15} N={n}: {pct:5.1f}   "
          f"mean time {summary.mean_time_s[(tech, n)]:5.2f} s")

print("\ntask gap (shared-location minus per-year-location, points):")
for (tech, n), gap in summary.gap_pct.items():
    print(f"  {tech:>15} N={n}: {gap:+5.1f}")

tables = write_summary_tables(summary, log_path.parent)
print("\nwrote", sorted(p.name for p in tables))
print((log_path.parent / "accuracy.csv").read_text().splitlines()[0])
