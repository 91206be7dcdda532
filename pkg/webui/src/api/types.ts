/** Typed mirrors of the HTTP API's JSON payloads. */

export interface ApplicationRecord {
  student_id: string;
  mention: string;
  level: string;
  age: number;
  employed: boolean;
  bacc_year: number;
  nationality: string;
  enrolled: boolean;
  passed_exam: boolean;
  cp: number;
  op: number;
  ltp: number;
  ec: number;
  dd_km: number;
}

export interface CohortSummary {
  id: string;
  mention: string;
  level: string;
  count: number;
  student_ids: string[];
}

export interface CohortDetail extends CohortSummary {
  screened: boolean;
}

export interface ScreeningCounts {
  received: number;
  eligible: number;
  rejected: number;
}

export interface ScreeningOutcome {
  student_id: string;
  verdict: "ELIGIBLE" | "REJECTED";
  failed_rules: string[];
}

export interface ScreeningResponse {
  cohort_id: string;
  counts: ScreeningCounts;
  eligible_ids: string[];
  outcomes: ScreeningOutcome[];
}

export type SessionStatus = "INCOMPLETE" | "CONSISTENT" | "INCONSISTENT";

export interface ConsistencyView {
  lambda_max: number;
  ci: number;
  cr: number;
  ri: number;
  n: number;
  consistent: boolean;
}

export interface SessionView {
  id: string;
  criteria: string[];
  entered_pairs: number;
  total_pairs: number;
  /** Both orientations, keyed "A:B"; the server fills reciprocals. */
  judgments: Record<string, number>;
  status: SessionStatus;
  consistency: ConsistencyView | null;
  weights: Record<string, number> | null;
}

export interface SessionWeightsResponse {
  session_id: string;
  status: SessionStatus;
  weights: Record<string, number>;
  consistency: ConsistencyView;
}

export interface RankEntry {
  student_id: string;
  score: number;
  rank: number;
}

export interface RankResponse {
  cohort_id: string;
  weights: Record<string, number>;
  consistency: ConsistencyView | null;
  forced: boolean;
  rankings: Record<string, RankEntry[]>;
}

export interface SimilarityEntry {
  method_a: string;
  method_b: string;
  matches: number;
  n: number;
  percent: number;
}

export interface CompareResponse {
  cohort_id: string;
  similarity: SimilarityEntry[];
}

export interface AllocationResponse {
  cohort_id: string;
  capacity: number;
  basis: string;
  allocated: string[];
  waitlist: string[];
}

export interface ErrorDetail {
  message: string;
  field?: string | null;
  errors?: unknown[];
}
