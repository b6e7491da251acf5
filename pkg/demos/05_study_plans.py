"""
Study plans: 36 balanced trials per participant
===============================================

A session crosses 3 techniques x 3 year-counts x 2 tasks, twice each.
Techniques come in contiguous blocks (per participant order), and within a
block every shared-location trial precedes the per-year-location ones.
"""

from collections import Counter

from surfstudy import build_study_plan, ground_truth, probe_value, synthesize_dataset

dataset = synthesize_dataset(seed=7)
plan = build_study_plan(dataset, participant_id="p01", seed=2016)
print("participant:", plan.participant_id, " trials:", len(plan.trials))

blocks = []
for t in plan.trials:
    if not blocks or blocks[-1] != t.technique:
        blocks.append(t.technique)
print("technique block order:", " -> ".join(blocks))

counts = Counter((t.technique, t.n_years, t.task) for t in plan.trials)
print("distinct conditions:", len(counts), " repeats:", set(counts.values()))

# one trial in full: the probes, their values, and the stored answer
trial = plan.trials[0]
print(f"\n{trial.trial_id}: {trial.technique}, N={trial.n_years}, {trial.task}")
for p in trial.probes:
    print(f"  {p.year_label} at (row {p.row}, col {p.col}): "
          f"{probe_value(p, dataset):6.2f}")
print("correct answer:", trial.correct_year,
      "== oracle:", ground_truth(trial, dataset))

# the same seed and participant id always reproduce the same plan;
# a different participant gets a different ordering of the same conditions
again = build_study_plan(dataset, "p01", 2016)
other = build_study_plan(dataset, "p02", 2016)
print("\nreproducible:", again == plan)
print("p02 order differs:",
      [t.trial_id for t in other.trials] != [t.trial_id for t in plan.trials]
      or [t.task for t in other.trials] != [t.task for t in plan.trials])
print("p02 runs the same conditions:",
      Counter((t.technique, t.n_years, t.task) for t in other.trials) == counts)
