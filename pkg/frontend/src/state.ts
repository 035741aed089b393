import { ApiError, ReviewApi } from "./api.js";
import { isValidBox } from "./geometry.js";
import type { Correction, ReviewView, VerdictKind, VerdictPayload } from "./types.js";

export type Phase = "idle" | "loading" | "reviewing" | "submitting" | "backoff";

export interface Notice {
  kind: "info" | "error";
  text: string;
}

export type Scheduler = (fn: () => void, delayMs: number) => () => void;

const defaultScheduler: Scheduler = (fn, delayMs) => {
  const handle = setTimeout(fn, delayMs);
  return () => clearTimeout(handle);
};

export interface SessionOptions {
  clock?: () => number; // epoch ms
  scheduler?: Scheduler;
  backoffMs?: number;
  maxBackoffMs?: number;
  imageSize?: { width: number; height: number };
}

/**
 * The tagger session state machine.
 *
 * One candidate on screen at a time, one in-flight verdict at a time, lease
 * renewal scheduled at half-expiry, and no path submits once the lease has
 * expired: submit() checks the lease locally before any network call.
 */
export class ReviewSession {
  phase: Phase = "idle";
  view: ReviewView | null = null;
  notice: Notice | null = null;
  validationError: string | null = null;
  retryDelayMs: number;

  private cancelRenewal: (() => void) | null = null;
  private clock: () => number;
  private scheduler: Scheduler;
  private backoffMs: number;
  private maxBackoffMs: number;
  imageSize: { width: number; height: number };

  constructor(private api: ReviewApi, private taggerId: string,
              options: SessionOptions = {}) {
    this.clock = options.clock ?? (() => Date.now());
    this.scheduler = options.scheduler ?? defaultScheduler;
    this.backoffMs = options.backoffMs ?? 1000;
    this.maxBackoffMs = options.maxBackoffMs ?? 30000;
    this.retryDelayMs = this.backoffMs;
    this.imageSize = options.imageSize ?? { width: 0, height: 0 };
  }

  leaseExpired(): boolean {
    if (this.view === null) {
      return true;
    }
    return this.clock() >= this.view.lease_expires_at * 1000;
  }

  canSubmit(): boolean {
    return this.phase === "reviewing" && this.view !== null && !this.leaseExpired();
  }

  async start(): Promise<void> {
    await this.fetchNext();
  }

  async fetchNext(): Promise<void> {
    this.stopRenewal();
    this.phase = "loading";
    this.view = null;
    this.validationError = null;
    try {
      const view = await this.api.fetchNext(this.taggerId);
      this.retryDelayMs = this.backoffMs;
      if (view === null) {
        this.phase = "idle";
        return;
      }
      this.view = view;
      this.phase = "reviewing";
      this.scheduleRenewal();
    } catch (err) {
      this.phase = "backoff";
      this.notice = {
        kind: "error",
        text: `server unreachable, retrying in ${Math.round(this.retryDelayMs / 1000)}s`,
      };
      const delay = this.retryDelayMs;
      this.retryDelayMs = Math.min(this.retryDelayMs * 2, this.maxBackoffMs);
      this.scheduler(() => void this.fetchNext(), delay);
    }
  }

  /** Client-side mirror of the server record invariants. */
  validate(verdict: VerdictKind, correction: Correction): string | null {
    const { width, height } = this.imageSize;
    if (verdict === "wrong_class" && !correction.label) {
      return "pick the correct article type";
    }
    if (verdict === "wrong_box") {
      if (!correction.box) {
        return "draw the corrected box first";
      }
      if (width > 0 && !isValidBox(correction.box, width, height)) {
        return "corrected box is out of bounds";
      }
    }
    if (verdict === "missed_object" && (!correction.box || !correction.label)) {
      return "a missed object needs both a box and a label";
    }
    return null;
  }

  async submit(verdict: VerdictKind, correction: Correction = {}): Promise<boolean> {
    if (this.phase !== "reviewing" || this.view === null) {
      return false;
    }
    if (this.leaseExpired()) {
      this.notice = { kind: "error", text: "lease expired; fetching a fresh candidate" };
      await this.fetchNext();
      return false;
    }
    const problem = this.validate(verdict, correction);
    if (problem !== null) {
      this.validationError = problem;
      return false;
    }
    this.validationError = null;
    const payload: VerdictPayload = {
      candidate_id: this.view.candidate_id,
      tagger_id: this.taggerId,
      verdict,
    };
    if (correction.label) {
      payload.corrected_label = correction.label;
    }
    if (correction.box) {
      payload.corrected_box = correction.box;
    }
    this.phase = "submitting";
    try {
      await this.api.submitVerdict(payload);
      this.notice = null;
      await this.fetchNext();
      return true;
    } catch (err) {
      if (err instanceof ApiError && (err.status === 409 || err.status === 410)) {
        this.notice = {
          kind: "info",
          text: err.status === 409
            ? "someone already reviewed this one; skipping"
            : "lease expired on the server; skipping",
        };
        await this.fetchNext();
        return false;
      }
      if (err instanceof ApiError && err.status === 422) {
        this.validationError = err.message;
        this.phase = "reviewing";
        return false;
      }
      this.phase = "backoff";
      this.notice = { kind: "error", text: "submit failed, server unreachable" };
      this.scheduler(() => void this.fetchNext(), this.retryDelayMs);
      return false;
    }
  }

  /** Renewal pings at half of the remaining lease. */
  private scheduleRenewal(): void {
    if (this.view === null) {
      return;
    }
    const remainingMs = this.view.lease_expires_at * 1000 - this.clock();
    if (remainingMs <= 0) {
      return;
    }
    this.cancelRenewal = this.scheduler(() => void this.renew(), remainingMs / 2);
  }

  private async renew(): Promise<void> {
    if (this.view === null || this.phase !== "reviewing") {
      return;
    }
    try {
      const expiry = await this.api.renewLease(this.view.candidate_id, this.taggerId);
      this.view.lease_expires_at = expiry;
      this.scheduleRenewal();
    } catch {
      // lease lost: the expiry check will block submission
    }
  }

  private stopRenewal(): void {
    if (this.cancelRenewal !== null) {
      this.cancelRenewal();
      this.cancelRenewal = null;
    }
  }
}
