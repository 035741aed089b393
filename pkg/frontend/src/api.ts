import type { ReviewStats, ReviewView, VerdictPayload } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

/** Thin client over the review HTTP API; fetch is injectable for tests. */
export class ReviewApi {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  /** Lease the next candidate; null when the queue is empty (204). */
  async fetchNext(taggerId: string): Promise<ReviewView | null> {
    const resp = await this.fetchFn(
      `${this.baseUrl}/v1/review/next?tagger=${encodeURIComponent(taggerId)}`,
    );
    if (resp.status === 204) {
      return null;
    }
    if (!resp.ok) {
      throw new ApiError(resp.status, `fetch_next failed: ${resp.status}`);
    }
    return (await resp.json()) as ReviewView;
  }

  async submitVerdict(payload: VerdictPayload): Promise<void> {
    const resp = await this.fetchFn(`${this.baseUrl}/v1/review/verdict`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
    if (!resp.ok) {
      const detail = await resp.text().catch(() => "");
      throw new ApiError(resp.status, `verdict rejected (${resp.status}): ${detail}`);
    }
  }

  /** Extend the lease; returns the new expiry (epoch seconds). */
  async renewLease(candidateId: string, taggerId: string): Promise<number> {
    const resp = await this.fetchFn(`${this.baseUrl}/v1/review/renew`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ candidate_id: candidateId, tagger_id: taggerId }),
    });
    if (!resp.ok) {
      throw new ApiError(resp.status, `renew failed: ${resp.status}`);
    }
    const body = (await resp.json()) as { lease_expires_at: number };
    return body.lease_expires_at;
  }

  async stats(): Promise<ReviewStats> {
    const resp = await this.fetchFn(`${this.baseUrl}/v1/review/stats`);
    if (!resp.ok) {
      throw new ApiError(resp.status, `stats failed: ${resp.status}`);
    }
    return (await resp.json()) as ReviewStats;
  }

  imageUrl(view: ReviewView): string {
    return `${this.baseUrl}${view.image_url}`;
  }
}
