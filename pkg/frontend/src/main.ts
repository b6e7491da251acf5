// Boot: resolve the participant, walk training -> practice -> trials ->
// done. Each trial fetches its scene payload, renders it, and arms the
// form; failures land on a retry prompt instead of a dead page.

import { ApiClient, ScenePayload } from "./api.js";
import { AnswerForm, FormHooks, buildAnswerForm } from "./form.js";
import { buildSceneGraph, checkManifest, parseGlb } from "./scene.js";
import { Phase, Session } from "./session.js";
import { SceneView } from "./view.js";

const api = new ApiClient();

const viewport = document.getElementById("viewport")!;
const hud = document.getElementById("hud")!;
const status = document.getElementById("status")!;
const notice = document.getElementById("notice")!;
const progress = document.getElementById("progress")!;
const resetBtn = document.getElementById("reset-camera") as HTMLButtonElement;

let view: SceneView | null = null;
let form: AnswerForm;
let session: Session;

// the form holds this object by reference, so phases retarget the handlers
// by assignment
const hooks: FormHooks = {
  onSelect: () => void 0,
  onSubmit: () => void 0,
  onConfirm: () => void 0,
  onCancel: () => void 0,
};

function showStatus(html: string): void {
  status.innerHTML = html;
  status.classList.remove("hidden");
}

function hideStatus(): void {
  status.classList.add("hidden");
}

function flashNotice(message: string): void {
  notice.textContent = message;
  notice.classList.remove("hidden");
  setTimeout(() => notice.classList.add("hidden"), 4000);
}

function fatal(message: string): void {
  view?.dispose();
  hud.classList.add("hidden");
  showStatus(`<h2>Something broke</h2><p>${message}</p><p>Reload to start over.</p>`);
}

function participantId(): string {
  const fromQuery = new URLSearchParams(location.search).get("participant");
  if (fromQuery) return fromQuery;
  const answer = prompt("Participant id?");
  if (!answer) throw new Error("a participant id is required");
  return answer;
}

// one Retry button; resolves when the user asks to try again
function offerRetry(label: string, message: string): Promise<void> {
  return new Promise((resolve) => {
    showStatus(`<p>${label} failed: ${message}</p><button id="retry">Retry</button>`);
    document.getElementById("retry")!.addEventListener("click", () => {
      hideStatus();
      resolve();
    });
  });
}

async function withRetry(label: string, work: () => Promise<void>): Promise<void> {
  for (;;) {
    try {
      await work();
      return;
    } catch (e) {
      await offerRetry(label, e instanceof Error ? e.message : String(e));
    }
  }
}

async function renderPayload(payload: ScenePayload, onReady: () => void): Promise<void> {
  checkManifest(payload.scene);
  const buffers = await Promise.all(payload.meshes.map((url) => api.fetchMesh(url)));
  const objects = await Promise.all(buffers.map((b) => parseGlb(b)));
  const graph = buildSceneGraph(payload.scene, objects, payload.trial?.probes ?? []);
  view?.dispose();
  view = new SceneView(viewport, graph, onReady);
}

async function loadCurrentTrial(): Promise<void> {
  const trial = session.currentTrial;
  progress.textContent = `Trial ${session.currentIndex + 1} of ${session.trials.length}`;
  await withRetry("Loading scene", async () => {
    const payload = await api.getTrialScene(trial.trial_id);
    await renderPayload(payload, () => session.markSceneReady());
    form.setTrial(payload.trial!.question, trial.options);
  });
}

function onPhase(phase: Phase): void {
  if (phase === "done") {
    view?.dispose();
    hud.classList.add("hidden");
    showStatus("<h2>All done</h2><p>Thank you; your responses are recorded.</p>");
  }
}

async function showTraining(): Promise<void> {
  await withRetry("Loading demo scene", async () => {
    const payload = await api.getPracticeScene();
    await renderPayload(payload, () => void 0);
  });
  await new Promise<void>((resolve) => {
    showStatus(
      `<h2>Welcome</h2>
       <p>You will see 3D surfaces of the same region across several years,
       darker meaning higher. Drag to rotate, scroll to zoom; the view cannot
       be panned. Each question asks about values at the marked location(s).
       Pick a year, press Submit, then Confirm.</p>
       <button id="begin">Try a practice round</button>`,
    );
    document.getElementById("begin")!.addEventListener("click", () => {
      hideStatus();
      resolve();
    });
  });
  session.finishTraining();
}

// practice reuses the demo scene already on screen and rehearses the form
// once; nothing is sent to the server
function showPractice(): Promise<void> {
  progress.textContent = "Practice";
  form.setTrial("Practice: pick either option, press Submit, then Confirm.", [
    "first year",
    "last year",
  ]);
  return new Promise((resolve) => {
    hooks.onSelect = () => form.setSubmitEnabled(true);
    hooks.onSubmit = () => form.showConfirm("your practice answer");
    hooks.onCancel = () => form.hideConfirm();
    hooks.onConfirm = () => {
      form.hideConfirm();
      session.finishPractice();
      resolve();
    };
  });
}

function armTrialHooks(): void {
  hooks.onSelect = (year) => {
    session.select(year);
    form.setSubmitEnabled(session.canSubmit);
  };
  hooks.onSubmit = () => {
    if (!session.canSubmit) return;
    session.beginConfirm();
    form.showConfirm(session.selection!);
  };
  hooks.onCancel = () => {
    session.cancelConfirm();
    form.hideConfirm();
  };
  hooks.onConfirm = () => {
    void (async () => {
      for (;;) {
        try {
          await session.confirmAndSubmit();
          form.hideConfirm();
          return;
        } catch (e) {
          await offerRetry("Submitting", e instanceof Error ? e.message : String(e));
          if (!session.hasPendingDraft) return;
        }
      }
    })();
  };
}

async function run(): Promise<void> {
  session = new Session(api, participantId(), undefined, {
    onPhase,
    onNotice: flashNotice,
  });
  form = buildAnswerForm(hud, hooks);
  resetBtn.addEventListener("click", () => view?.resetCamera());

  await withRetry("Loading plan", () => session.start());
  await showTraining();
  await showPractice();
  armTrialHooks();

  while (session.phase === "trial") {
    const index = session.currentIndex;
    await loadCurrentTrial();
    // wait for this trial to be acknowledged (submit or duplicate notice)
    await new Promise<void>((resolve) => {
      const poll = setInterval(() => {
        if (session.phase !== "trial" || session.currentIndex !== index) {
          clearInterval(poll);
          resolve();
        }
      }, 50);
    });
  }
}

run().catch((e) => fatal(e instanceof Error ? e.message : String(e)));
