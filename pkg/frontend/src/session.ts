// Session state machine. The index advances only after the server
// acknowledges a confirmed submission (a duplicate rejection counts as
// acknowledged: the answer is already on file). Nothing in this module ever
// sees a correct answer; the payload types have no field for one.

import { ApiClient, ApiError, Plan, PlanTrial, ResponseBody } from "./api.js";
import { Clock, monotonicClock } from "./timing.js";

export type Phase = "training" | "practice" | "trial" | "done";

export interface SessionEvents {
  onPhase?(phase: Phase): void;
  onTrial?(index: number, trial: PlanTrial): void;
  onNotice?(message: string): void;
}

export class Session {
  plan: Plan | null = null;
  phase: Phase = "training";
  currentIndex = 0;
  sceneReadyAt: number | null = null;
  selection: string | null = null;
  confirming = false;

  private inFlight = false;
  private draft: ResponseBody | null = null;

  constructor(
    private readonly api: ApiClient,
    readonly participantId: string,
    private readonly clock: Clock = monotonicClock,
    private readonly events: SessionEvents = {},
    private readonly timestamp: () => string = () => new Date().toISOString(),
  ) {}

  async start(): Promise<void> {
    this.plan = await this.api.getPlan(this.participantId);
    this.setPhase("training");
  }

  get trials(): PlanTrial[] {
    if (!this.plan) throw new Error("session not started");
    return this.plan.trials;
  }

  get currentTrial(): PlanTrial {
    if (this.phase !== "trial") throw new Error(`no current trial in phase '${this.phase}'`);
    return this.trials[this.currentIndex];
  }

  // training -> practice -> trial are one-way doors
  finishTraining(): void {
    if (this.phase !== "training") throw new Error("not in training");
    this.setPhase("practice");
  }

  finishPractice(): void {
    if (this.phase !== "practice") throw new Error("not in practice");
    this.setPhase("trial");
    this.events.onTrial?.(this.currentIndex, this.currentTrial);
  }

  markSceneReady(): void {
    this.sceneReadyAt = this.clock();
  }

  select(year: string): void {
    if (this.phase !== "trial") throw new Error("no trial to answer");
    if (!this.currentTrial.options.includes(year)) {
      throw new Error(`'${year}' is not one of the offered options`);
    }
    this.selection = year;
  }

  get canSubmit(): boolean {
    return (
      this.phase === "trial" &&
      this.selection !== null &&
      this.sceneReadyAt !== null &&
      !this.inFlight
    );
  }

  beginConfirm(): void {
    if (!this.canSubmit) throw new Error("nothing to confirm yet");
    this.confirming = true;
  }

  cancelConfirm(): void {
    this.confirming = false;
  }

  /** The confirmation click: stamps elapsed_ms and submits.
   *
   * On a network or server error the stamped draft is retained, so a retry
   * resubmits the original timing instead of quietly inflating it.
   */
  async confirmAndSubmit(): Promise<void> {
    if (!this.confirming) throw new Error("confirmation step required before submit");
    if (this.inFlight) throw new Error("a submission is already in flight");
    const trial = this.currentTrial;
    if (this.draft === null) {
      if (this.selection === null || this.sceneReadyAt === null) {
        throw new Error("nothing to submit");
      }
      this.draft = {
        trial_id: trial.trial_id,
        participant_id: this.participantId,
        chosen_year: this.selection,
        elapsed_ms: this.clock() - this.sceneReadyAt,
        confirmed: true,
        client_timestamp: this.timestamp(),
      };
    }
    this.inFlight = true;
    try {
      await this.api.postResponse(this.draft);
    } catch (e) {
      this.inFlight = false;
      if (e instanceof ApiError && e.status === 409) {
        this.events.onNotice?.("This trial was already answered; moving on.");
      } else {
        throw e; // draft kept for retry
      }
    }
    this.inFlight = false;
    this.draft = null;
    this.advance();
  }

  get hasPendingDraft(): boolean {
    return this.draft !== null;
  }

  private advance(): void {
    this.selection = null;
    this.confirming = false;
    this.sceneReadyAt = null;
    this.currentIndex += 1;
    if (this.currentIndex >= this.trials.length) {
      this.setPhase("done");
    } else {
      this.events.onTrial?.(this.currentIndex, this.currentTrial);
    }
  }

  private setPhase(phase: Phase): void {
    this.phase = phase;
    this.events.onPhase?.(phase);
  }
}
