import type {
  AllocationResponse,
  ApplicationRecord,
  CohortDetail,
  CohortSummary,
  CompareResponse,
  ErrorDetail,
  RankResponse,
  ScreeningResponse,
  SessionView,
  SessionWeightsResponse,
} from "./types";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Error raised for every non-2xx response and for transport failures. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: ErrorDetail,
    /** True for transport-level failures that are safe to retry verbatim. */
    readonly retriable = false,
  ) {
    super(detail.message);
    this.name = "ApiError";
  }
}

export interface RankOptions {
  method?: string;
  sessionId?: string;
  weights?: Record<string, number>;
  force?: boolean;
}

function normalizeDetail(detail: unknown): ErrorDetail {
  if (typeof detail === "string") return { message: detail };
  if (detail && typeof detail === "object" && "message" in detail) {
    return detail as ErrorDetail;
  }
  return { message: "unexpected error response" };
}

/**
 * Thin typed wrapper over the decision-support HTTP API. All numbers the UI
 * displays come from these responses; the client computes nothing itself.
 */
export class ApiClient {
  constructor(
    private readonly baseUrl = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch {
      throw new ApiError(0, { message: "network request failed" }, true);
    }
    const payload = await response.json().catch(() => null);
    if (!response.ok) {
      const detail =
        payload && typeof payload === "object" && "detail" in payload
          ? normalizeDetail((payload as { detail: unknown }).detail)
          : { message: `unexpected response status ${response.status}` };
      throw new ApiError(response.status, detail);
    }
    return payload as T;
  }

  createCohort(applications: ApplicationRecord[]): Promise<CohortSummary> {
    return this.request("POST", "/cohorts", { applications });
  }

  getCohort(cohortId: string): Promise<CohortDetail> {
    return this.request("GET", `/cohorts/${cohortId}`);
  }

  screenCohort(cohortId: string): Promise<ScreeningResponse> {
    return this.request("POST", `/cohorts/${cohortId}/screen`);
  }

  createSession(criteria?: string[]): Promise<SessionView> {
    return this.request("POST", "/sessions", criteria ? { criteria } : {});
  }

  getSession(sessionId: string): Promise<SessionView> {
    return this.request("GET", `/sessions/${sessionId}`);
  }

  putJudgment(
    sessionId: string,
    first: string,
    second: string,
    value: number | null,
  ): Promise<SessionView> {
    return this.request("PUT", `/sessions/${sessionId}/judgments`, { first, second, value });
  }

  getWeights(sessionId: string): Promise<SessionWeightsResponse> {
    return this.request("GET", `/sessions/${sessionId}/weights`);
  }

  rank(cohortId: string, options: RankOptions = {}): Promise<RankResponse> {
    const query = options.method ? `?method=${encodeURIComponent(options.method)}` : "";
    const body: Record<string, unknown> = {};
    if (options.sessionId !== undefined) body.session_id = options.sessionId;
    if (options.weights !== undefined) body.weights = options.weights;
    if (options.force) body.force = true;
    return this.request("POST", `/cohorts/${cohortId}/rank${query}`, body);
  }

  compare(cohortId: string): Promise<CompareResponse> {
    return this.request("GET", `/cohorts/${cohortId}/compare`);
  }

  allocate(cohortId: string, capacity: number, basis?: string): Promise<AllocationResponse> {
    const body: Record<string, unknown> = { capacity };
    if (basis !== undefined) body.basis = basis;
    return this.request("POST", `/cohorts/${cohortId}/allocate`, body);
  }
}
