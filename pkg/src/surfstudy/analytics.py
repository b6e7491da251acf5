"""Response logging and accuracy/time analytics.

Responses land in an append-only JSONL log, one confirmed answer per line.
Analytics pool both tasks per (technique, year-count) cell for the accuracy
and completion-time tables, and report the per-task accuracy gap
(maximum minus discrimination) separately. Everything is a pure function of
the log snapshot plus the plans, so summaries are reproducible and
order-independent.
"""

import csv
import json
import math
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Mapping

from .errors import (
    DuplicateResponseError,
    ResponseError,
    UnknownTrialError,
)
from .layout import TECHNIQUES
from .protocol import (
    N_YEARS_CHOICES,
    TASK_DISCRIMINATION,
    TASK_MAXIMUM,
    StudyPlan,
    Trial,
)

ConditionKey = tuple[str, int]          # (technique, n_years)
TaskKey = tuple[str, int, str]          # (technique, n_years, task)


@dataclass(frozen=True)
class TrialResponse:
    """One confirmed answer as reported by the runner."""

    trial_id: str
    participant_id: str
    chosen_year: str
    elapsed_ms: float
    confirmed: bool
    client_timestamp: str

    def to_dict(self) -> dict:
        return {
            "trial_id": self.trial_id,
            "participant_id": self.participant_id,
            "chosen_year": self.chosen_year,
            "elapsed_ms": self.elapsed_ms,
            "confirmed": self.confirmed,
            "client_timestamp": self.client_timestamp,
        }


class PlanStore:
    """Plans indexed by participant and by trial id."""

    def __init__(self, plans: Iterable[StudyPlan] = ()):
        self._by_participant: dict[str, StudyPlan] = {}
        self._by_trial: dict[str, tuple[str, Trial]] = {}
        for plan in plans:
            self.add(plan)

    def add(self, plan: StudyPlan) -> None:
        if plan.participant_id in self._by_participant:
            raise ResponseError(f"duplicate plan for participant '{plan.participant_id}'")
        for t in plan.trials:
            if t.trial_id in self._by_trial:
                raise ResponseError(f"trial id '{t.trial_id}' appears in two plans")
        self._by_participant[plan.participant_id] = plan
        for t in plan.trials:
            self._by_trial[t.trial_id] = (plan.participant_id, t)

    def plan(self, participant_id: str) -> StudyPlan | None:
        return self._by_participant.get(participant_id)

    def trial(self, trial_id: str) -> tuple[str, Trial] | None:
        return self._by_trial.get(trial_id)

    def participants(self) -> list[str]:
        return sorted(self._by_participant)

    def __len__(self) -> int:
        return len(self._by_participant)


class ResponseLog:
    """Append-only JSONL response log with a single serialized writer."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._answered: set[str] = set()
        if self.path.exists():
            for record in self.records():
                self._answered.add(record["trial_id"])

    def already_answered(self, trial_id: str) -> bool:
        return trial_id in self._answered

    def append(self, record: dict) -> None:
        line = json.dumps(record, sort_keys=True)
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as f:
                f.write(line + "\n")
                f.flush()
            self._answered.add(record["trial_id"])

    def records(self) -> list[dict]:
        if not self.path.exists():
            return []
        out = []
        with open(self.path, encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if line:
                    out.append(json.loads(line))
        return out


def record_response(resp: TrialResponse, store: PlanStore, log: ResponseLog) -> dict:
    """Validate and persist one response; returns the appended record.

    Rejects unknown trials, participant mismatches, unconfirmed submissions,
    answers outside the trial's options, nonpositive elapsed times, and
    duplicates. The appended record carries the server receive time for
    audit; scoring only ever uses the client-side elapsed_ms.
    """
    found = store.trial(resp.trial_id)
    if found is None:
        raise UnknownTrialError(f"unknown trial '{resp.trial_id}'")
    participant_id, trial = found
    if resp.participant_id != participant_id:
        raise ResponseError(
            f"trial '{resp.trial_id}' belongs to participant '{participant_id}', "
            f"not '{resp.participant_id}'"
        )
    if not resp.confirmed:
        raise ResponseError("response was not confirmed")
    if resp.chosen_year not in trial.options:
        raise ResponseError(
            f"chosen year '{resp.chosen_year}' is not among options {list(trial.options)}"
        )
    if not resp.elapsed_ms > 0:
        raise ResponseError("elapsed_ms must be > 0")
    if log.already_answered(resp.trial_id):
        raise DuplicateResponseError(f"trial '{resp.trial_id}' already has a response")

    record = resp.to_dict()
    record["server_received"] = datetime.now(timezone.utc).isoformat()
    log.append(record)
    return record


@dataclass(frozen=True)
class AnalyticsSummary:
    """Accuracy/time aggregates per condition cell."""

    accuracy_pct: dict[ConditionKey, float]
    mean_time_s: dict[ConditionKey, float]
    gap_pct: dict[ConditionKey, float]
    counts: dict[TaskKey, int]
    per_task_accuracy_pct: dict[TaskKey, float]
    empty: bool = field(default=False)


def _resolve(records: Iterable[Mapping], store: PlanStore) -> list[tuple[Mapping, Trial]]:
    resolved = []
    for record in records:
        found = store.trial(record["trial_id"])
        if found is None:
            raise UnknownTrialError(f"log references unknown trial '{record['trial_id']}'")
        resolved.append((record, found[1]))
    return resolved


def accuracy_gap(records: Iterable[Mapping], store: PlanStore) -> dict[ConditionKey, float]:
    """Accuracy difference (maximum minus discrimination) per condition cell.

    Cells missing either task's data are undefined and excluded.
    """
    totals: dict[TaskKey, int] = {}
    corrects: dict[TaskKey, int] = {}
    for record, trial in _resolve(records, store):
        key = (trial.technique, trial.n_years, trial.task)
        totals[key] = totals.get(key, 0) + 1
        if record["chosen_year"] == trial.correct_year:
            corrects[key] = corrects.get(key, 0) + 1

    gaps: dict[ConditionKey, float] = {}
    cells = {(tech, n) for tech, n, _ in totals}
    for tech, n in sorted(cells, key=lambda k: (TECHNIQUES.index(k[0]), k[1])):
        k_max = (tech, n, TASK_MAXIMUM)
        k_disc = (tech, n, TASK_DISCRIMINATION)
        if k_max in totals and k_disc in totals:
            acc_max = 100.0 * corrects.get(k_max, 0) / totals[k_max]
            acc_disc = 100.0 * corrects.get(k_disc, 0) / totals[k_disc]
            gaps[(tech, n)] = acc_max - acc_disc
    return gaps


def summarize(records: Iterable[Mapping], store: PlanStore) -> AnalyticsSummary:
    """Aggregate a response log into per-condition accuracy and mean time.

    Accuracy pools both tasks per (technique, n_years); the per-task
    breakdown is also emitted so either reading of the pooled table can be
    recovered. Uses exact summation, so any permutation of the log yields an
    identical summary. An empty log yields an empty summary, not an error.
    """
    records = list(records)
    if not records:
        return AnalyticsSummary({}, {}, {}, {}, {}, empty=True)

    counts: dict[TaskKey, int] = {}
    corrects: dict[TaskKey, int] = {}
    times: dict[ConditionKey, list[float]] = {}
    for record, trial in _resolve(records, store):
        tkey = (trial.technique, trial.n_years, trial.task)
        ckey = (trial.technique, trial.n_years)
        counts[tkey] = counts.get(tkey, 0) + 1
        if record["chosen_year"] == trial.correct_year:
            corrects[tkey] = corrects.get(tkey, 0) + 1
        times.setdefault(ckey, []).append(float(record["elapsed_ms"]))

    accuracy: dict[ConditionKey, float] = {}
    mean_time: dict[ConditionKey, float] = {}
    per_task: dict[TaskKey, float] = {}
    cells = sorted(times, key=lambda k: (TECHNIQUES.index(k[0]), k[1]))
    for cell in cells:
        tech, n = cell
        total = sum(counts.get((tech, n, t), 0) for t in (TASK_MAXIMUM, TASK_DISCRIMINATION))
        correct = sum(corrects.get((tech, n, t), 0) for t in (TASK_MAXIMUM, TASK_DISCRIMINATION))
        accuracy[cell] = 100.0 * correct / total
        # fsum makes the mean independent of log order
        mean_time[cell] = math.fsum(times[cell]) / len(times[cell]) / 1000.0
    for tkey in sorted(counts, key=lambda k: (TECHNIQUES.index(k[0]), k[1], k[2])):
        per_task[tkey] = 100.0 * corrects.get(tkey, 0) / counts[tkey]

    return AnalyticsSummary(
        accuracy_pct=accuracy,
        mean_time_s=mean_time,
        gap_pct=accuracy_gap(records, store),
        counts=counts,
        per_task_accuracy_pct=per_task,
    )


def summary_to_dict(summary: AnalyticsSummary) -> dict:
    def cond(k: ConditionKey) -> str:
        return f"{k[0]}:{k[1]}"

    def task(k: TaskKey) -> str:
        return f"{k[0]}:{k[1]}:{k[2]}"

    return {
        "empty": summary.empty,
        "accuracy_pct": {cond(k): v for k, v in summary.accuracy_pct.items()},
        "mean_time_s": {cond(k): v for k, v in summary.mean_time_s.items()},
        "gap_pct": {cond(k): v for k, v in summary.gap_pct.items()},
        "counts": {task(k): v for k, v in summary.counts.items()},
        "per_task_accuracy_pct": {task(k): v for k, v in summary.per_task_accuracy_pct.items()},
    }


def _sorted_cells(keys) -> list[ConditionKey]:
    return sorted(keys, key=lambda k: (TECHNIQUES.index(k[0]), k[1]))


def write_summary_tables(summary: AnalyticsSummary, out_dir: str | Path) -> list[Path]:
    """Write accuracy, completion-time, and task-gap CSV tables."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    def table(name: str, header: list[str], rows: list[list]) -> None:
        path = out_dir / name
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(header)
            writer.writerows(rows)
        written.append(path)

    table(
        "accuracy.csv",
        ["technique", "n_years", "accuracy_pct"],
        [[t, n, summary.accuracy_pct[(t, n)]] for t, n in _sorted_cells(summary.accuracy_pct)],
    )
    table(
        "completion_time.csv",
        ["technique", "n_years", "mean_time_s"],
        [[t, n, summary.mean_time_s[(t, n)]] for t, n in _sorted_cells(summary.mean_time_s)],
    )
    table(
        "accuracy_gap.csv",
        ["technique", "n_years", "gap_pct"],
        [[t, n, summary.gap_pct[(t, n)]] for t, n in _sorted_cells(summary.gap_pct)],
    )
    table(
        "per_task_accuracy.csv",
        ["technique", "n_years", "task", "accuracy_pct"],
        [
            [t, n, task, summary.per_task_accuracy_pct[(t, n, task)]]
            for t, n, task in sorted(
                summary.per_task_accuracy_pct,
                key=lambda k: (TECHNIQUES.index(k[0]), k[1], k[2]),
            )
        ],
    )
    return written
