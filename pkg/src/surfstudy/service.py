"""HTTP service for running a study: plans, trial scenes, responses, summary.

One service instance owns a data directory holding the dataset, the response
log, exported scene directories, and the participant registry. Everything the
service hands out is deterministic given the directory contents and the
configured seed, so restarting mid-study reconstructs the same plans and
scenes. Correct answers never leave the server.
"""

import json
import os
import threading
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .analytics import (
    PlanStore,
    ResponseLog,
    TrialResponse,
    record_response,
    summarize,
    summary_to_dict,
)
from .errors import DuplicateResponseError, ResponseError, UnknownTrialError
from .gltf import export_scene
from .layout import (
    DEFAULT_BANDS,
    DEFAULT_S,
    H_FRACTION_DEFAULT,
    assemble_scene,
    default_layout,
)
from .protocol import StudyPlan, build_study_plan, plan_without_answers, probe_xy
from .raster import (
    Dataset,
    load_dataset_manifest,
    subset_dataset,
    synthesize_dataset,
    write_dataset,
)

DATA_DIR_ENV = "STUDY_DATA_DIR"
DEFAULT_DATA_DIR = "study-data"
DEFAULT_STUDY_SEED = 2016

QUESTION_TEMPLATES = {
    "maximum": "At the marked location, which year has the greatest value?",
    "discrimination": "Comparing the marked locations, which year has the greatest value?",
}


@dataclass(frozen=True)
class StudyConfig:
    """Server-side knobs; everything else is derived."""

    seed: int = DEFAULT_STUDY_SEED
    S: float = DEFAULT_S
    h: float | None = None
    B: int = DEFAULT_BANDS

    @property
    def h_value(self) -> float:
        return H_FRACTION_DEFAULT * self.S if self.h is None else self.h


def load_config(data_dir: Path) -> StudyConfig:
    path = data_dir / "config.json"
    if not path.exists():
        return StudyConfig()
    raw = json.loads(path.read_text())
    known = {k: raw[k] for k in ("seed", "S", "h", "B") if k in raw}
    return StudyConfig(**known)


def resolve_data_dir(data_dir: str | Path | None) -> Path:
    if data_dir is None:
        data_dir = os.environ.get(DATA_DIR_ENV, DEFAULT_DATA_DIR)
    return Path(data_dir)


class StudyService:
    """State behind the HTTP app; usable directly for scripted studies."""

    def __init__(self, data_dir: str | Path | None = None):
        self.data_dir = resolve_data_dir(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.config = load_config(self.data_dir)
        self.dataset = self._ensure_dataset()
        self.log = ResponseLog(self.data_dir / "responses.jsonl")
        self.store = PlanStore()
        self._lock = threading.Lock()
        self._scene_cache: dict[tuple[str, int], Path] = {}
        for participant_id in self._registered_participants():
            self.store.add(self._build_plan(participant_id))

    # -- dataset ----------------------------------------------------------

    def _ensure_dataset(self) -> Dataset:
        manifest = self.data_dir / "manifest.json"
        if not manifest.exists():
            dataset = synthesize_dataset(self.config.seed)
            write_dataset(dataset, self.data_dir)
        return load_dataset_manifest(manifest)

    # -- plans ------------------------------------------------------------

    def _participants_path(self) -> Path:
        return self.data_dir / "participants.json"

    def _registered_participants(self) -> list[str]:
        path = self._participants_path()
        if not path.exists():
            return []
        return json.loads(path.read_text())

    def _build_plan(self, participant_id: str) -> StudyPlan:
        return build_study_plan(self.dataset, participant_id, self.config.seed)

    def plan_for(self, participant_id: str) -> StudyPlan:
        """Existing plan, or a new deterministic one registered on first ask."""
        with self._lock:
            plan = self.store.plan(participant_id)
            if plan is None:
                plan = self._build_plan(participant_id)
                self.store.add(plan)
                roster = self._registered_participants()
                roster.append(participant_id)
                self._participants_path().write_text(json.dumps(roster, indent=2) + "\n")
            return plan

    # -- scenes -----------------------------------------------------------

    def scene_key(self, technique: str, n_years: int) -> str:
        return f"{technique}-n{n_years}"

    def ensure_scene(self, technique: str, n_years: int) -> Path:
        """Exported scene directory for a condition, building it on first use.

        Trials of one (technique, n_years) condition share geometry because
        the displayed years are always the chronologically first n_years.
        """
        cache_key = (technique, n_years)
        with self._lock:
            if cache_key in self._scene_cache:
                return self._scene_cache[cache_key]
            years = self.dataset.year_labels[:n_years]
            shown = subset_dataset(self.dataset, years)
            params = default_layout(
                technique, n_years, S=self.config.S, h=self.config.h_value, B=self.config.B
            )
            scene_dir = self.data_dir / "scenes" / self.scene_key(technique, n_years)
            if not (scene_dir / "scene.json").exists():
                export_scene(assemble_scene(shown, params), scene_dir)
            self._scene_cache[cache_key] = scene_dir
            return scene_dir

    def scene_payload(self, technique: str, n_years: int) -> dict:
        scene_dir = self.ensure_scene(technique, n_years)
        manifest = json.loads((scene_dir / "scene.json").read_text())
        base = f"/scenes/{self.scene_key(technique, n_years)}"
        meshes = [f"{base}/{slot['mesh']}" for slot in manifest["slots"]]
        return {"scene": manifest, "meshes": meshes}

    def trial_payload(self, trial_id: str) -> dict:
        found = self.store.trial(trial_id)
        if found is None:
            raise UnknownTrialError(f"unknown trial '{trial_id}'")
        participant_id, trial = found
        payload = self.scene_payload(trial.technique, trial.n_years)
        shown = subset_dataset(self.dataset, trial.years)
        payload["trial"] = {
            "trial_id": trial.trial_id,
            "participant_id": participant_id,
            "technique": trial.technique,
            "n_years": trial.n_years,
            "task": trial.task,
            "years": list(trial.years),
            "options": list(trial.options),
            "question": QUESTION_TEMPLATES[trial.task],
            "probes": [
                {
                    "year_label": p.year_label,
                    "x": probe_xy(p, shown)[0],
                    "y": probe_xy(p, shown)[1],
                }
                for p in trial.probes
            ],
        }
        return payload


class ResponseBody(BaseModel):
    trial_id: str
    participant_id: str
    chosen_year: str
    elapsed_ms: float
    confirmed: bool
    client_timestamp: str


def create_app(
    data_dir: str | Path | None = None,
    frontend_dir: str | Path | None = None,
) -> FastAPI:
    """Build the study app around one data directory.

    frontend_dir, when it exists, is served at the site root so the runner
    and the API share an origin.
    """
    service = StudyService(data_dir)
    app = FastAPI(title="surfstudy", docs_url=None, redoc_url=None)
    app.state.service = service

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok", "participants": len(service.store)}

    @app.get("/api/plan/{participant_id}")
    def get_plan(participant_id: str) -> dict:
        return plan_without_answers(service.plan_for(participant_id))

    @app.get("/api/trial/{trial_id}/scene")
    def get_trial_scene(trial_id: str) -> dict:
        try:
            return service.trial_payload(trial_id)
        except UnknownTrialError as e:
            raise HTTPException(status_code=404, detail=str(e))

    @app.get("/api/practice/scene")
    def get_practice_scene() -> dict:
        payload = service.scene_payload("shared_surface", len(service.dataset))
        payload["trial"] = None
        return payload

    @app.post("/api/trial/{trial_id}/response")
    def post_response(trial_id: str, body: ResponseBody) -> dict:
        if body.trial_id != trial_id:
            raise HTTPException(
                status_code=422,
                detail=f"body trial_id '{body.trial_id}' does not match path '{trial_id}'",
            )
        resp = TrialResponse(
            trial_id=body.trial_id,
            participant_id=body.participant_id,
            chosen_year=body.chosen_year,
            elapsed_ms=body.elapsed_ms,
            confirmed=body.confirmed,
            client_timestamp=body.client_timestamp,
        )
        try:
            record = record_response(resp, service.store, service.log)
        except UnknownTrialError as e:
            raise HTTPException(status_code=404, detail=str(e))
        except DuplicateResponseError as e:
            raise HTTPException(status_code=409, detail=str(e))
        except ResponseError as e:
            raise HTTPException(status_code=422, detail=str(e))
        return {"recorded": True, "record": record}

    @app.get("/api/summary")
    def get_summary() -> dict:
        return summary_to_dict(summarize(service.log.records(), service.store))

    scenes_dir = service.data_dir / "scenes"
    scenes_dir.mkdir(parents=True, exist_ok=True)
    app.mount("/scenes", StaticFiles(directory=scenes_dir), name="scenes")

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="runner")

    return app
