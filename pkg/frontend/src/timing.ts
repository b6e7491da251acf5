// Trial timing runs on the monotonic clock so wall-clock adjustments can
// never produce negative or skewed durations.

export type Clock = () => number;

export const monotonicClock: Clock = () => performance.now();

export class Stopwatch {
  private startAt: number | null = null;

  constructor(private readonly clock: Clock = monotonicClock) {}

  start(): void {
    this.startAt = this.clock();
  }

  get started(): boolean {
    return this.startAt !== null;
  }

  elapsedMs(): number {
    if (this.startAt === null) throw new Error("stopwatch never started");
    return this.clock() - this.startAt;
  }

  reset(): void {
    this.startAt = null;
  }
}
