// End-to-end against a live service process: a scripted session plays a
// full 36-trial plan over real HTTP, including mesh download and parsing,
// a mid-run duplicate rejection, and a check of the persisted log.

import { ChildProcess, execFileSync, spawn } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { Mesh } from "three";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, PlanTrial } from "../src/api.js";
import { CameraInput, RestrictedOrbitCamera } from "../src/camera.js";
import { buildSceneGraph, parseGlb } from "../src/scene.js";
import { Session } from "../src/session.js";

const PORT = 18000 + (process.pid % 2000);
const BASE = `http://127.0.0.1:${PORT}`;
const PARTICIPANT = "e2e-p01";

let dataDir: string;
let server: ChildProcess;
let serverLog = "";

const sleep = (ms: number) => new Promise((r) => setTimeout(r, ms));

beforeAll(async () => {
  dataDir = mkdtempSync(join(tmpdir(), "surfstudy-ui-e2e-"));
  // small grids keep scene export fast; the service treats the directory
  // as authoritative once a manifest exists
  execFileSync("python3", [
    "-c",
    [
      "import sys",
      "from surfstudy import synthesize_dataset, write_dataset",
      "write_dataset(synthesize_dataset(3, n_rows=12, n_cols=12), sys.argv[1])",
    ].join("\n"),
    dataDir,
  ]);

  server = spawn("surfstudy", ["serve", "--data-dir", dataDir, "--port", String(PORT)], {
    stdio: ["ignore", "pipe", "pipe"],
  });
  server.stdout?.on("data", (d) => (serverLog += d));
  server.stderr?.on("data", (d) => (serverLog += d));

  for (let i = 0; i < 240; i += 1) {
    if (server.exitCode !== null) break;
    try {
      const r = await fetch(`${BASE}/healthz`);
      if (r.ok) return;
    } catch {
      // not up yet
    }
    await sleep(250);
  }
  throw new Error(`service did not come up on ${BASE}\n${serverLog}`);
}, 120_000);

afterAll(() => {
  server?.kill();
  if (dataDir) rmSync(dataDir, { recursive: true, force: true });
});

function countMeshes(root: { traverse(cb: (o: unknown) => void): void }): number {
  let n = 0;
  root.traverse((o) => {
    if (o instanceof Mesh) n += 1;
  });
  return n;
}

describe("live service", () => {
  const api = new ApiClient(BASE);
  const chosen = new Map<string, string>();
  let trialsSeen: PlanTrial[] = [];

  it("serves a parseable demo scene and the camera target stays pinned", async () => {
    const payload = await api.getPracticeScene();
    expect(payload.trial).toBeNull();
    expect(payload.scene.schema).toBe("surfstudy-scene/1");
    expect(payload.meshes.length).toBe(payload.scene.slots.length);

    const buffers = await Promise.all(payload.meshes.map((u) => api.fetchMesh(u)));
    const objects = await Promise.all(buffers.map((b) => parseGlb(b)));
    const graph = buildSceneGraph(payload.scene, objects);
    expect(countMeshes(graph.root)).toBeGreaterThanOrEqual(payload.scene.slots.length);

    const cam = new RestrictedOrbitCamera(graph.home);
    const input = new CameraInput(cam);
    const homeTarget = cam.state().target;
    input.pointerDrag({ buttons: 2, movementX: 150, movementY: 90 }); // right drag
    input.pointerDrag({ buttons: 4, movementX: -60, movementY: 40 }); // middle drag
    input.pointerDrag({ buttons: 1, movementX: 30, movementY: 30, shiftKey: true });
    input.wheel({ deltaY: 400 });
    expect(cam.state().target).toEqual(homeTarget);
    cam.reset();
    expect(cam.state().radius).toBe(graph.home.radius);
  }, 60_000);

  it("a scripted session completes the full plan with a mid-run duplicate", async () => {
    let now = 5_000;
    const notices: string[] = [];
    const session = new Session(api, PARTICIPANT, () => now, {
      onNotice: (m) => notices.push(m),
    });
    await session.start();
    expect(session.trials).toHaveLength(36);
    trialsSeen = session.trials;
    session.finishTraining();
    session.finishPractice();

    while (session.phase === "trial") {
      const index = session.currentIndex;
      const trial = session.currentTrial;
      const payload = await api.getTrialScene(trial.trial_id);
      expect(payload.trial?.trial_id).toBe(trial.trial_id);
      expect(payload.meshes.length).toBe(payload.scene.slots.length);
      expect(payload.trial).not.toHaveProperty("correct_year");
      expect(payload.trial?.probes.length).toBeGreaterThan(0);

      if (index < 2) {
        // exercise the real render path on the first trials
        const buffers = await Promise.all(payload.meshes.map((u) => api.fetchMesh(u)));
        const objects = await Promise.all(buffers.map((b) => parseGlb(b)));
        const graph = buildSceneGraph(payload.scene, objects, payload.trial!.probes);
        expect(graph.slotGroups).toHaveLength(payload.scene.slots.length);
        expect(graph.pins).toHaveLength(payload.trial!.probes.length);
        expect(countMeshes(graph.root)).toBeGreaterThan(0);
      }

      session.markSceneReady();
      now += 800 + index * 31;
      const year = trial.options[index % trial.options.length];
      session.select(year);
      session.beginConfirm();
      await session.confirmAndSubmit();
      chosen.set(trial.trial_id, year);

      if (index === 5) {
        // second POST for an answered trial must bounce without derailing us
        await expect(
          api.postResponse({
            trial_id: trial.trial_id,
            participant_id: PARTICIPANT,
            chosen_year: trial.options[0],
            elapsed_ms: 123,
            confirmed: true,
            client_timestamp: new Date().toISOString(),
          }),
        ).rejects.toMatchObject({ status: 409 });
      }
    }

    expect(session.phase).toBe("done");
    expect(session.currentIndex).toBe(36);
    expect(notices).toHaveLength(0); // the scripted run itself never collided
  }, 180_000);

  it("every persisted response is confirmed, timed, and within its options", () => {
    const lines = readFileSync(join(dataDir, "responses.jsonl"), "utf-8")
      .split("\n")
      .filter((l) => l.trim());
    expect(lines).toHaveLength(36);
    const byId = new Map(trialsSeen.map((t) => [t.trial_id, t]));
    for (const line of lines) {
      const record = JSON.parse(line) as {
        trial_id: string;
        participant_id: string;
        chosen_year: string;
        elapsed_ms: number;
        confirmed: boolean;
      };
      const trial = byId.get(record.trial_id);
      expect(trial).toBeDefined();
      expect(record.participant_id).toBe(PARTICIPANT);
      expect(record.confirmed).toBe(true);
      expect(record.elapsed_ms).toBeGreaterThan(0);
      expect(trial!.options).toContain(record.chosen_year);
      expect(record.chosen_year).toBe(chosen.get(record.trial_id));
    }
    expect(new Set(lines.map((l) => JSON.parse(l).trial_id)).size).toBe(36);
  });

  it("replaying the whole plan only draws duplicate rejections yet still finishes", async () => {
    let now = 99_000;
    const notices: string[] = [];
    const replay = new Session(api, PARTICIPANT, () => now, {
      onNotice: (m) => notices.push(m),
    });
    await replay.start();
    replay.finishTraining();
    replay.finishPractice();
    while (replay.phase === "trial") {
      replay.markSceneReady();
      now += 500;
      replay.select(replay.currentTrial.options[0]);
      replay.beginConfirm();
      await replay.confirmAndSubmit();
    }
    expect(replay.phase).toBe("done");
    expect(notices).toHaveLength(36);
    const lines = readFileSync(join(dataDir, "responses.jsonl"), "utf-8")
      .split("\n")
      .filter((l) => l.trim());
    expect(lines).toHaveLength(36); // nothing was double-recorded
  }, 120_000);

  it("the summary reflects exactly the completed session", async () => {
    const summary = await api.getSummary();
    expect(summary.empty).toBe(false);
    // every response lands in exactly one technique:n_years:task cell
    const total = Object.values(summary.counts).reduce((acc, v) => acc + v, 0);
    expect(total).toBe(36);
    for (const key of Object.keys(summary.counts)) {
      expect(key.split(":")).toHaveLength(3);
    }
    for (const value of Object.values(summary.accuracy_pct)) {
      expect(value).toBeGreaterThanOrEqual(0);
      expect(value).toBeLessThanOrEqual(100);
    }
  });
});
