export interface Box {
  x_min: number;
  y_min: number;
  x_max: number;
  y_max: number;
}

export interface DetectionView {
  x_min: number;
  y_min: number;
  x_max: number;
  y_max: number;
  article_type: string;
  score: number;
}

/** Server payload for a leased candidate (mirrors ReviewCandidate). */
export interface ReviewView {
  candidate_id: string;
  image_ref: string;
  image_url: string;
  detection: DetectionView;
  reason: string;
  status: string;
  taxonomy: string[];
  lease_expires_at: number; // epoch seconds
}

export type VerdictKind = "correct" | "wrong_class" | "wrong_box" | "missed_object";

export interface Correction {
  label?: string;
  box?: Box;
}

export interface VerdictPayload {
  candidate_id: string;
  tagger_id: string;
  verdict: VerdictKind;
  corrected_label?: string;
  corrected_box?: Box;
}

export interface ReviewStats {
  candidates: number;
  pending: number;
  leased: number;
  reviewed: number;
  by_verdict: Record<string, number>;
}
