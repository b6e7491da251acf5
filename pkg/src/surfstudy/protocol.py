"""Trial generation and study plans.

A trial asks which study year has the highest value at probed grid cells:
the Maximum task probes one location shared by all years, Discrimination
probes one location per year. Ground truth is a plain argmax over probe
values, decoupled from any geometry. A study plan is one participant's
ordered sequence of 36 trials: 3 techniques x 3 year-counts x 2 tasks, each
condition twice, technique blocks contiguous, Maximum before Discrimination
inside each block, block and year-count order seeded per participant.
"""

import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import TieError, TrialGenerationError
from .layout import TECHNIQUES
from .raster import Dataset

TASK_MAXIMUM = "maximum"
TASK_DISCRIMINATION = "discrimination"
TASKS = (TASK_MAXIMUM, TASK_DISCRIMINATION)
N_YEARS_CHOICES = (2, 3, 4)
CONDITION_REPEATS = 2
TRIALS_PER_PLAN = len(TECHNIQUES) * len(N_YEARS_CHOICES) * len(TASKS) * CONDITION_REPEATS

# a trial is admissible only if the winning probe beats every competitor by
# this fraction of the dataset's global max; near-ties are not visually
# decidable questions
WINNER_MARGIN_FRACTION = 0.02
_RETRY_BUDGET = 500


@dataclass(frozen=True)
class Probe:
    year_label: str
    row: int
    col: int


@dataclass(frozen=True)
class Trial:
    """One timed question, with its correct answer held server-side."""

    trial_id: str
    technique: str
    n_years: int
    task: str
    years: tuple[str, ...]
    probes: tuple[Probe, ...]
    correct_year: str
    options: tuple[str, ...]
    rng_seed: int

    def __post_init__(self):
        if self.task not in TASKS:
            raise TrialGenerationError(f"unknown task '{self.task}'")
        if self.technique not in TECHNIQUES:
            raise TrialGenerationError(f"unknown technique '{self.technique}'")
        if self.options != self.years:
            raise TrialGenerationError("options must equal the trial's years")
        if self.correct_year not in self.options:
            raise TrialGenerationError("correct_year must be one of the options")
        if self.task == TASK_MAXIMUM:
            if len({(p.row, p.col) for p in self.probes}) != 1:
                raise TrialGenerationError("maximum task probes must share one location")
        else:
            if len({(p.row, p.col) for p in self.probes}) != len(self.probes):
                raise TrialGenerationError("discrimination probes must be pairwise distinct")


@dataclass(frozen=True)
class StudyPlan:
    participant_id: str
    trials: tuple[Trial, ...]
    seed: int


def probe_value(probe: Probe, dataset: Dataset) -> float:
    field = dataset.field(probe.year_label)
    if field.nodata[probe.row, probe.col]:
        raise TrialGenerationError(f"probe {probe} lies on a nodata cell")
    return float(field.values[probe.row, probe.col])


def probe_xy(probe: Probe, dataset: Dataset) -> tuple[float, float]:
    """Probe position in scene base-plane coordinates (pre-translation).

    Must match the vertex placement used when triangulating, so a marker
    drawn here lands on the surface point being probed.
    """
    field = dataset.field(probe.year_label)
    x = field.origin_lon + probe.col * field.cell_size
    y = field.origin_lat + probe.row * field.cell_size
    return (x, y)


def _argmax_year(probes: tuple[Probe, ...], dataset: Dataset, context: str) -> str:
    values = np.array([probe_value(p, dataset) for p in probes])
    order = np.argsort(values)
    if len(values) > 1 and values[order[-1]] == values[order[-2]]:
        raise TieError(f"{context}: top probe values tie at {values[order[-1]]}")
    return probes[int(order[-1])].year_label


def ground_truth(trial: Trial, dataset: Dataset) -> str:
    """The year whose probe value is strictly greatest; pure lookup + argmax.

    This is the oracle every piece of scoring uses. Raises TieError on an
    exact top tie, which generation is required to have prevented.
    """
    return _argmax_year(trial.probes, dataset, f"trial {trial.trial_id}")


def _margin_ok(values: list[float], margin: float) -> bool:
    ranked = sorted(values, reverse=True)
    return ranked[0] - ranked[1] >= margin


def generate_trial(
    dataset: Dataset,
    technique: str,
    n_years: int,
    task: str,
    rng_seed: int,
    trial_id: str | None = None,
) -> Trial:
    """Draw probes for one (technique, N, task) condition.

    Probes are drawn uniformly from non-nodata cells with a deterministic
    generator; candidate sets whose winner margin is below 2% of global_max
    are rejected and redrawn. The selected years are the chronologically
    first n_years of the dataset.
    """
    if n_years < 2 or n_years > len(dataset):
        raise TrialGenerationError(
            f"need between 2 and {len(dataset)} years, got {n_years}"
        )
    years = dataset.year_labels[:n_years]
    fields = [dataset.field(y) for y in years]
    margin = WINNER_MARGIN_FRACTION * dataset.global_max
    rng = np.random.default_rng(rng_seed)

    if task == TASK_MAXIMUM:
        shared_valid = ~fields[0].nodata
        for f in fields[1:]:
            shared_valid = shared_valid & ~f.nodata
        candidates = np.flatnonzero(shared_valid)
        if candidates.size == 0:
            raise TrialGenerationError("no location is valid in every selected year")
        n_cols = fields[0].n_cols
        for _ in range(_RETRY_BUDGET):
            flat = int(candidates[rng.integers(candidates.size)])
            row, col = divmod(flat, n_cols)
            values = [float(f.values[row, col]) for f in fields]
            if _margin_ok(values, margin):
                probes = tuple(Probe(y, row, col) for y in years)
                break
        else:
            raise TrialGenerationError(
                f"retry budget exhausted for ({technique}, N={n_years}, {task}): "
                "dataset too flat or tied at shared locations"
            )
    elif task == TASK_DISCRIMINATION:
        per_year = [np.flatnonzero(~f.nodata) for f in fields]
        n_cols = fields[0].n_cols
        for _ in range(_RETRY_BUDGET):
            cells = [int(c[rng.integers(c.size)]) for c in per_year]
            if len(set(cells)) != len(cells):
                continue
            coords = [divmod(flat, n_cols) for flat in cells]
            values = [float(f.values[r, c]) for f, (r, c) in zip(fields, coords)]
            if _margin_ok(values, margin):
                probes = tuple(Probe(y, r, c) for y, (r, c) in zip(years, coords))
                break
        else:
            raise TrialGenerationError(
                f"retry budget exhausted for ({technique}, N={n_years}, {task}): "
                "dataset too flat for distinct-location margins"
            )
    else:
        raise TrialGenerationError(f"unknown task '{task}'")

    condition = f"({technique}, N={n_years}, {task}, seed={rng_seed})"
    return Trial(
        trial_id=trial_id if trial_id is not None else f"adhoc-{technique}-{n_years}-{task}-{rng_seed}",
        technique=technique,
        n_years=n_years,
        task=task,
        years=years,
        probes=probes,
        correct_year=_argmax_year(probes, dataset, condition),
        options=years,
        rng_seed=rng_seed,
    )


def _participant_entropy(participant_id: str) -> int:
    digest = hashlib.sha256(participant_id.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def build_study_plan(dataset: Dataset, participant_id: str, seed: int) -> StudyPlan:
    """Build one participant's ordered 36-trial plan.

    Deterministic in (participant_id, seed): the technique block order is a
    seeded permutation, and within each block's task group the 6 trials
    (3 year-counts x 2 repetitions) appear in seeded random order.
    """
    if len(dataset) < max(N_YEARS_CHOICES):
        raise TrialGenerationError(
            f"plan needs a dataset with >= {max(N_YEARS_CHOICES)} years, got {len(dataset)}"
        )
    root = np.random.SeedSequence([seed, _participant_entropy(participant_id)])
    order_ss, seed_ss = root.spawn(2)
    order_rng = np.random.default_rng(order_ss)
    trial_seeds = np.random.default_rng(seed_ss).integers(0, 2**63, size=TRIALS_PER_PLAN)

    technique_order = [TECHNIQUES[i] for i in order_rng.permutation(len(TECHNIQUES))]
    trials = []
    index = 0
    for technique in technique_order:
        for task in TASKS:  # maximum first: tasks ordered simple to complex
            group = [n for n in N_YEARS_CHOICES for _ in range(CONDITION_REPEATS)]
            shuffled = [group[i] for i in order_rng.permutation(len(group))]
            for n_years in shuffled:
                trials.append(
                    generate_trial(
                        dataset,
                        technique,
                        n_years,
                        task,
                        rng_seed=int(trial_seeds[index]),
                        trial_id=f"{participant_id}-t{index:02d}",
                    )
                )
                index += 1
    return StudyPlan(participant_id=participant_id, trials=tuple(trials), seed=seed)


def trial_to_dict(trial: Trial) -> dict:
    return {
        "trial_id": trial.trial_id,
        "technique": trial.technique,
        "n_years": trial.n_years,
        "task": trial.task,
        "years": list(trial.years),
        "probes": [{"year_label": p.year_label, "row": p.row, "col": p.col} for p in trial.probes],
        "correct_year": trial.correct_year,
        "options": list(trial.options),
        "rng_seed": trial.rng_seed,
    }


def trial_from_dict(d: dict) -> Trial:
    return Trial(
        trial_id=d["trial_id"],
        technique=d["technique"],
        n_years=d["n_years"],
        task=d["task"],
        years=tuple(d["years"]),
        probes=tuple(Probe(p["year_label"], p["row"], p["col"]) for p in d["probes"]),
        correct_year=d["correct_year"],
        options=tuple(d["options"]),
        rng_seed=d["rng_seed"],
    )


def plan_to_dict(plan: StudyPlan) -> dict:
    return {
        "participant_id": plan.participant_id,
        "seed": plan.seed,
        "trials": [trial_to_dict(t) for t in plan.trials],
    }


def plan_from_dict(d: dict) -> StudyPlan:
    return StudyPlan(
        participant_id=d["participant_id"],
        trials=tuple(trial_from_dict(t) for t in d["trials"]),
        seed=d["seed"],
    )


def plan_without_answers(plan: StudyPlan) -> dict:
    """Runner-facing plan payload: no correct answers, no probe coordinates."""
    return {
        "participant_id": plan.participant_id,
        "trials": [
            {
                "trial_id": t.trial_id,
                "technique": t.technique,
                "n_years": t.n_years,
                "task": t.task,
                "years": list(t.years),
                "options": list(t.options),
            }
            for t in plan.trials
        ],
    }
