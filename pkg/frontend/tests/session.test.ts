import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, Plan, ResponseBody } from "../src/api.js";
import { Phase, Session } from "../src/session.js";

function makePlan(n = 3): Plan {
  return {
    participant_id: "p01",
    trials: Array.from({ length: n }, (_, i) => ({
      trial_id: `t${i}`,
      technique: "shared_surface",
      n_years: 2,
      task: "maximum",
      years: ["2010", "2012"],
      options: ["2010", "2012"],
    })),
  };
}

interface StubBehavior {
  failPosts?: number; // reject this many posts with a network error first
  alreadyAnswered?: Set<string>;
}

function stubApi(plan: Plan, behavior: StubBehavior = {}) {
  const posted: ResponseBody[] = [];
  let failPosts = behavior.failPosts ?? 0;
  const stub = {
    async getPlan(): Promise<Plan> {
      return plan;
    },
    async postResponse(body: ResponseBody): Promise<void> {
      if (failPosts > 0) {
        failPosts -= 1;
        throw new Error("network down");
      }
      if (behavior.alreadyAnswered?.has(body.trial_id)) {
        throw new ApiError(409, "already answered");
      }
      posted.push(body);
    },
  };
  return { api: stub as unknown as ApiClient, posted };
}

// walks a started session up to the trial phase
async function inTrialPhase(behavior: StubBehavior = {}, n = 3) {
  const plan = makePlan(n);
  const { api, posted } = stubApi(plan, behavior);
  let now = 1000;
  const phases: Phase[] = [];
  const notices: string[] = [];
  const trialEvents: number[] = [];
  const session = new Session(
    api,
    "p01",
    () => now,
    {
      onPhase: (p) => phases.push(p),
      onTrial: (i) => trialEvents.push(i),
      onNotice: (m) => notices.push(m),
    },
    () => "2026-08-22T00:00:00Z",
  );
  await session.start();
  session.finishTraining();
  session.finishPractice();
  return {
    session,
    posted,
    phases,
    notices,
    trialEvents,
    tick: (ms: number) => {
      now += ms;
    },
  };
}

describe("phase order", () => {
  it("runs training -> practice -> trial, one-way", async () => {
    const { api } = stubApi(makePlan());
    const session = new Session(api, "p01");
    await session.start();
    expect(session.phase).toBe("training");
    expect(() => session.finishPractice()).toThrow(/not in practice/);
    session.finishTraining();
    expect(session.phase).toBe("practice");
    expect(() => session.finishTraining()).toThrow(/not in training/);
    session.finishPractice();
    expect(session.phase).toBe("trial");
    expect(session.currentIndex).toBe(0);
  });

  it("exposes no current trial outside the trial phase", async () => {
    const { api } = stubApi(makePlan());
    const session = new Session(api, "p01");
    await session.start();
    expect(() => session.currentTrial).toThrow(/no current trial/);
    expect(() => session.trials).not.toThrow();
  });

  it("requires start before anything else", () => {
    const { api } = stubApi(makePlan());
    const session = new Session(api, "p01");
    expect(() => session.trials).toThrow(/not started/);
  });
});

describe("answering", () => {
  it("rejects a selection that is not an offered option", async () => {
    const { session } = await inTrialPhase();
    expect(() => session.select("1999")).toThrow(/not one of the offered/);
    expect(session.selection).toBeNull();
  });

  it("gates submit on scene ready plus a selection", async () => {
    const { session } = await inTrialPhase();
    expect(session.canSubmit).toBe(false);
    session.select("2010");
    expect(session.canSubmit).toBe(false); // scene not ready yet
    session.markSceneReady();
    expect(session.canSubmit).toBe(true);
  });

  it("refuses to submit without the confirmation step", async () => {
    const { session } = await inTrialPhase();
    session.markSceneReady();
    session.select("2010");
    await expect(session.confirmAndSubmit()).rejects.toThrow(/confirmation step/);
    expect(() => session.beginConfirm()).not.toThrow();
    session.cancelConfirm();
    await expect(session.confirmAndSubmit()).rejects.toThrow(/confirmation step/);
  });

  it("stamps elapsed_ms from scene-ready to confirm on the injected clock", async () => {
    const { session, posted, tick } = await inTrialPhase();
    session.markSceneReady();
    tick(2500);
    session.select("2012");
    session.beginConfirm();
    await session.confirmAndSubmit();
    expect(posted).toHaveLength(1);
    expect(posted[0]).toEqual({
      trial_id: "t0",
      participant_id: "p01",
      chosen_year: "2012",
      elapsed_ms: 2500,
      confirmed: true,
      client_timestamp: "2026-08-22T00:00:00Z",
    });
  });

  it("advances only after the server acknowledges", async () => {
    const { session, trialEvents } = await inTrialPhase();
    session.markSceneReady();
    session.select("2010");
    session.beginConfirm();
    expect(session.currentIndex).toBe(0);
    await session.confirmAndSubmit();
    expect(session.currentIndex).toBe(1);
    expect(session.selection).toBeNull();
    expect(session.sceneReadyAt).toBeNull();
    expect(trialEvents).toEqual([0, 1]);
  });
});

describe("failure handling", () => {
  it("keeps the draft on a network failure and resubmits the same timing", async () => {
    const { session, posted, tick } = await inTrialPhase({ failPosts: 2 });
    session.markSceneReady();
    tick(700);
    session.select("2010");
    session.beginConfirm();
    await expect(session.confirmAndSubmit()).rejects.toThrow(/network down/);
    expect(session.hasPendingDraft).toBe(true);
    expect(session.currentIndex).toBe(0);
    tick(60_000); // a long time passes before the retry lands
    await expect(session.confirmAndSubmit()).rejects.toThrow(/network down/);
    tick(60_000);
    await session.confirmAndSubmit();
    expect(posted).toHaveLength(1);
    expect(posted[0].elapsed_ms).toBe(700); // original stamp, not inflated
    expect(session.currentIndex).toBe(1);
    expect(session.hasPendingDraft).toBe(false);
  });

  it("treats a duplicate rejection as answered: notice plus advance", async () => {
    const { session, posted, notices } = await inTrialPhase({
      alreadyAnswered: new Set(["t0"]),
    });
    session.markSceneReady();
    session.select("2010");
    session.beginConfirm();
    await session.confirmAndSubmit(); // 409 resolves rather than throwing
    expect(posted).toHaveLength(0);
    expect(notices).toHaveLength(1);
    expect(notices[0]).toMatch(/already answered/);
    expect(session.currentIndex).toBe(1);
  });

  it("other HTTP errors are surfaced, not swallowed", async () => {
    const plan = makePlan();
    const api = {
      async getPlan() {
        return plan;
      },
      async postResponse() {
        throw new ApiError(422, "chosen_year not offered");
      },
    } as unknown as ApiClient;
    const session = new Session(api, "p01");
    await session.start();
    session.finishTraining();
    session.finishPractice();
    session.markSceneReady();
    session.select("2010");
    session.beginConfirm();
    await expect(session.confirmAndSubmit()).rejects.toThrow(/422/);
    expect(session.currentIndex).toBe(0);
  });
});

describe("completion", () => {
  it("reaches done after the last acknowledged trial", async () => {
    const { session, posted, phases } = await inTrialPhase({}, 3);
    for (let i = 0; i < 3; i += 1) {
      session.markSceneReady();
      session.select(session.currentTrial.options[i % 2]);
      session.beginConfirm();
      await session.confirmAndSubmit();
    }
    expect(session.phase).toBe("done");
    expect(posted).toHaveLength(3);
    expect(posted.map((p) => p.trial_id)).toEqual(["t0", "t1", "t2"]);
    expect(phases).toEqual(["training", "practice", "trial", "done"]);
    expect(() => session.currentTrial).toThrow(/no current trial/);
  });

  it("a mid-run duplicate still lets the session finish", async () => {
    const { session, posted } = await inTrialPhase({ alreadyAnswered: new Set(["t1"]) }, 3);
    for (let i = 0; i < 3; i += 1) {
      session.markSceneReady();
      session.select("2010");
      session.beginConfirm();
      await session.confirmAndSubmit();
    }
    expect(session.phase).toBe("done");
    expect(posted.map((p) => p.trial_id)).toEqual(["t0", "t2"]);
  });
});
