// Typed client for the study service. Every payload shape here mirrors the
// server exactly; note there is no correct-answer field anywhere below.

export interface PlanTrial {
  trial_id: string;
  technique: string;
  n_years: number;
  task: string;
  years: string[];
  options: string[];
}

export interface Plan {
  participant_id: string;
  trials: PlanTrial[];
}

export interface ProbeMarker {
  year_label: string;
  x: number;
  y: number;
}

export interface TrialInfo extends PlanTrial {
  participant_id: string;
  question: string;
  probes: ProbeMarker[];
}

export interface SlotEntry {
  year_label: string;
  translation: [number, number, number];
  z_scale: number;
  mesh: string;
  n_vertices: number;
  n_triangles: number;
}

export interface SceneManifest {
  schema: string;
  technique: string;
  layout: { S: number; h: number; N: number; B: number | null };
  slots: SlotEntry[];
  legend: Record<string, unknown>;
  separators: number[];
  bounds: { min: number[]; max: number[] };
}

export interface ScenePayload {
  scene: SceneManifest;
  meshes: string[];
  trial: TrialInfo | null;
}

export interface ResponseBody {
  trial_id: string;
  participant_id: string;
  chosen_year: string;
  elapsed_ms: number;
  confirmed: boolean;
  client_timestamp: string;
}

export interface SummaryPayload {
  empty: boolean;
  accuracy_pct: Record<string, number>;
  mean_time_s: Record<string, number>;
  gap_pct: Record<string, number>;
  counts: Record<string, number>;
  per_task_accuracy_pct: Record<string, number>;
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
  }
}

async function errorDetail(r: Response): Promise<string> {
  try {
    const body = (await r.json()) as { detail?: unknown };
    if (typeof body.detail === "string") return body.detail;
    return JSON.stringify(body);
  } catch {
    return r.statusText;
  }
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async getJson<T>(path: string): Promise<T> {
    const r = await fetch(this.base + path);
    if (!r.ok) throw new ApiError(r.status, await errorDetail(r));
    return (await r.json()) as T;
  }

  getPlan(participantId: string): Promise<Plan> {
    return this.getJson(`/api/plan/${encodeURIComponent(participantId)}`);
  }

  getTrialScene(trialId: string): Promise<ScenePayload> {
    return this.getJson(`/api/trial/${encodeURIComponent(trialId)}/scene`);
  }

  getPracticeScene(): Promise<ScenePayload> {
    return this.getJson(`/api/practice/scene`);
  }

  getSummary(): Promise<SummaryPayload> {
    return this.getJson(`/api/summary`);
  }

  async fetchMesh(url: string): Promise<ArrayBuffer> {
    const r = await fetch(this.base + url);
    if (!r.ok) throw new ApiError(r.status, await errorDetail(r));
    return r.arrayBuffer();
  }

  async postResponse(body: ResponseBody): Promise<void> {
    const r = await fetch(
      `${this.base}/api/trial/${encodeURIComponent(body.trial_id)}/response`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
      },
    );
    if (!r.ok) throw new ApiError(r.status, await errorDetail(r));
  }
}
