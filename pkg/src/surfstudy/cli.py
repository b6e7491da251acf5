"""Command-line entry points.

Subcommands cover the whole pipeline: ingest and validate raw grids,
synthesize demo data, export scenes, generate participant plans, run the
study service, and turn a response log into summary tables. Every random
choice flows from an explicit --seed.
"""

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .analytics import PlanStore, summarize, summary_to_dict, write_summary_tables
from .errors import SurfStudyError
from .gltf import export_scene
from .layout import DEFAULT_BANDS, DEFAULT_S, TECHNIQUES, assemble_scene, default_layout
from .protocol import build_study_plan, plan_from_dict, plan_to_dict
from .raster import (
    load_dataset_manifest,
    read_ascii_grid,
    subset_dataset,
    synthesize_dataset,
    validate_dataset,
    write_dataset,
)
from .service import create_app


def _cmd_ingest(args: argparse.Namespace) -> int:
    fields = []
    for spec in args.grids:
        if "=" not in spec:
            raise SurfStudyError(f"expected YEAR=PATH, got '{spec}'")
        label, path = spec.split("=", 1)
        fields.append(read_ascii_grid(path, year_label=label))
    dataset = validate_dataset(fields)
    manifest = write_dataset(dataset, args.out)
    print(f"validated {len(dataset)} years "
          f"(range {dataset.global_min:g}..{dataset.global_max:g}) -> {manifest}")
    return 0


def _cmd_demo_data(args: argparse.Namespace) -> int:
    dataset = synthesize_dataset(args.seed, n_years=args.years)
    manifest = write_dataset(dataset, args.out)
    print(f"wrote {len(dataset)}-year demo dataset (seed {args.seed}) -> {manifest}")
    return 0


def _cmd_build_scene(args: argparse.Namespace) -> int:
    dataset = load_dataset_manifest(Path(args.data) / "manifest.json")
    if args.years is not None:
        labels = [y.strip() for y in args.years.split(",") if y.strip()]
        dataset = subset_dataset(dataset, labels)
    params = default_layout(args.technique, len(dataset), S=args.S, h=args.h, B=args.B)
    manifest = export_scene(assemble_scene(dataset, params), args.out)
    print(f"exported {args.technique} scene ({len(dataset)} years) -> {manifest.parent}")
    return 0


def _cmd_plan(args: argparse.Namespace) -> int:
    dataset = load_dataset_manifest(Path(args.data) / "manifest.json")
    plan = build_study_plan(dataset, args.participant, args.seed)
    text = json.dumps(plan_to_dict(plan), indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {len(plan.trials)}-trial plan for '{args.participant}' -> {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    app = create_app(data_dir=args.data_dir, frontend_dir=args.frontend)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    store = PlanStore()
    for path in args.plans:
        store.add(plan_from_dict(json.loads(Path(path).read_text())))
    records = []
    with open(args.log, encoding="utf-8") as f:
        for line in f:
            if line.strip():
                records.append(json.loads(line))
    summary = summarize(records, store)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary_path = out_dir / "summary.json"
    summary_path.write_text(json.dumps(summary_to_dict(summary), indent=2, sort_keys=True) + "\n")
    tables = write_summary_tables(summary, out_dir)
    print(f"summarized {len(records)} responses -> {summary_path}")
    for t in tables:
        print(f"  {t}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="surfstudy",
        description="3D surface-graph study pipeline: data, scenes, plans, service, analytics.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate ASCII grids into a dataset directory")
    p.add_argument("grids", nargs="+", metavar="YEAR=PATH",
                   help="year label and grid file, chronological order")
    p.add_argument("--out", required=True, help="dataset output directory")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("demo-data", help="synthesize a demo dataset")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--years", type=int, default=4)
    p.add_argument("--out", required=True, help="dataset output directory")
    p.set_defaults(func=_cmd_demo_data)

    p = sub.add_parser("build-scene", help="export one technique's scene to a directory")
    p.add_argument("--data", required=True, help="dataset directory (holds manifest.json)")
    p.add_argument("--technique", required=True, choices=TECHNIQUES)
    p.add_argument("--years", default=None,
                   help="comma-separated year labels (default: all, chronological)")
    p.add_argument("--S", type=float, default=DEFAULT_S, help="vertical space budget")
    p.add_argument("--h", type=float, default=None,
                   help="minimum readable slot height (default 5%% of S)")
    p.add_argument("--B", type=int, default=DEFAULT_BANDS, help="horizon band count")
    p.add_argument("--out", required=True, help="scene output directory")
    p.set_defaults(func=_cmd_build_scene)

    p = sub.add_parser("plan", help="generate one participant's trial plan")
    p.add_argument("--data", required=True, help="dataset directory (holds manifest.json)")
    p.add_argument("--participant", required=True)
    p.add_argument("--seed", type=int, required=True, help="study-level seed")
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")
    p.set_defaults(func=_cmd_plan)

    p = sub.add_parser("serve", help="run the study HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--data-dir", default=None,
                   help="data directory (default: $STUDY_DATA_DIR or ./study-data)")
    p.add_argument("--frontend", default=None, help="built runner directory to serve at /")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("analyze", help="summarize a response log into JSON + CSV tables")
    p.add_argument("--log", required=True, help="responses.jsonl path")
    p.add_argument("--plans", nargs="+", required=True, help="plan JSON files (with answers)")
    p.add_argument("--out", required=True, help="output directory for summary + tables")
    p.set_defaults(func=_cmd_analyze)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SurfStudyError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
