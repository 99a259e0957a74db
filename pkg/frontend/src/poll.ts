/** Polling discipline: at most one request in flight per gate, and anything
 * that resolves after the gate moved on (newer poll, channel switch) is
 * discarded by sequence number instead of clobbering fresher state. */

export const MIN_POLL_PERIOD_MS = 1000;

export function clampPollPeriod(periodMs: number): number {
  return Math.max(MIN_POLL_PERIOD_MS, periodMs);
}

export class PollGate {
  private seq = 0;
  private busy = false;

  /** Invalidate everything in flight (e.g. the selected channel changed). */
  invalidate(): void {
    this.seq += 1;
  }

  get inFlight(): boolean {
    return this.busy;
  }

  /**
   * Run one poll. Returns true when apply/onError ran, false when the
   * result was stale or another poll was already in flight.
   */
  async run<T>(
    load: () => Promise<T>,
    apply: (value: T) => void,
    onError?: (error: unknown) => void,
  ): Promise<boolean> {
    if (this.busy) return false;
    const ticket = ++this.seq;
    this.busy = true;
    try {
      const value = await load();
      if (ticket !== this.seq) return false;
      apply(value);
      return true;
    } catch (error) {
      if (ticket !== this.seq) return false;
      onError?.(error);
      return true;
    } finally {
      this.busy = false;
    }
  }
}
