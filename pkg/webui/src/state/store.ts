import { ApiClient, ApiError } from "../api/client";
import type {
  AllocationResponse,
  ApplicationRecord,
  CohortDetail,
  CompareResponse,
  RankResponse,
  ScreeningResponse,
  SessionView,
} from "../api/types";
import { t } from "./locale";

export interface BannerState {
  message: string;
  /** Re-issues the failed request verbatim. */
  retry: () => Promise<void>;
}

export interface AppState {
  cohort: CohortDetail | null;
  screening: ScreeningResponse | null;
  session: SessionView | null;
  /** The ranking currently on display (may be a what-if). */
  ranking: RankResponse | null;
  /** The last ranking computed from the session weights. */
  baselineRanking: RankResponse | null;
  whatIfActive: boolean;
  comparison: CompareResponse | null;
  allocation: AllocationResponse | null;
  /** The allocation before the latest capacity change, for gain/loss diffs. */
  previousAllocation: AllocationResponse | null;
  banner: BannerState | null;
}

function initialState(): AppState {
  return {
    cohort: null,
    screening: null,
    session: null,
    ranking: null,
    baselineRanking: null,
    whatIfActive: false,
    comparison: null,
    allocation: null,
    previousAllocation: null,
    banner: null,
  };
}

/**
 * Single source of truth for the page. Every mutation is a server round
 * trip: state only changes when a response arrives, so a failed request
 * leaves the view exactly as it was (plus a retriable banner).
 */
export class AppStore {
  private state = initialState();
  private listeners = new Set<() => void>();

  constructor(private readonly client: ApiClient) {}

  getState(): Readonly<AppState> {
    return this.state;
  }

  // Arrow property so the method can be passed around detached (`mount`).
  subscribe = (listener: () => void): (() => void) => {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  };

  private patch(partial: Partial<AppState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of [...this.listeners]) listener();
  }

  /** Runs one server action; on transport failure shows a retry banner. */
  private async run<T>(
    action: () => Promise<T>,
    apply: (result: T) => Partial<AppState>,
    retry: () => Promise<void>,
  ): Promise<T | undefined> {
    try {
      const result = await action();
      this.patch({ banner: null, ...apply(result) });
      return result;
    } catch (error) {
      if (error instanceof ApiError && error.retriable) {
        this.patch({ banner: { message: t("banner.network"), retry } });
        return undefined;
      }
      throw error;
    }
  }

  async loadCohort(applications: ApplicationRecord[]): Promise<void> {
    await this.run(
      async () => {
        const created = await this.client.createCohort(applications);
        return this.client.getCohort(created.id);
      },
      (cohort) => ({ ...initialState(), cohort }),
      () => this.loadCohort(applications),
    );
  }

  async screenCohort(): Promise<void> {
    const cohort = this.requireCohort();
    await this.run(
      async () => {
        const screening = await this.client.screenCohort(cohort.id);
        return { screening, cohort: await this.client.getCohort(cohort.id) };
      },
      (result) => ({ screening: result.screening, cohort: result.cohort }),
      () => this.screenCohort(),
    );
  }

  async startSession(criteria?: string[]): Promise<void> {
    await this.run(
      () => this.client.createSession(criteria),
      (session) => ({ session }),
      () => this.startSession(criteria),
    );
  }

  /** One grid edit; the response carries both cells of the pair. */
  async setJudgment(first: string, second: string, value: number | null): Promise<void> {
    const session = this.requireSession();
    await this.run(
      () => this.client.putJudgment(session.id, first, second, value),
      (updated) => ({ session: updated }),
      () => this.setJudgment(first, second, value),
    );
  }

  /** Ranking is allowed only once the server reports a consistent matrix. */
  get canRank(): boolean {
    return this.state.session?.status === "CONSISTENT";
  }

  /** An inconsistent matrix can still be ranked, but only explicitly forced. */
  get canForceRank(): boolean {
    return this.state.session?.status === "INCONSISTENT";
  }

  async rankCohort(options: { force?: boolean } = {}): Promise<void> {
    const cohort = this.requireCohort();
    const session = this.requireSession();
    await this.run(
      () =>
        this.client.rank(cohort.id, {
          sessionId: session.id,
          force: options.force,
        }),
      (ranking) => ({ ranking, baselineRanking: ranking, whatIfActive: false }),
      () => this.rankCohort(options),
    );
  }

  /**
   * What-if re-ranking with slider weights. The raw weights are renormalized
   * to sum 1 and sent to the server; every displayed number comes back from
   * the response.
   */
  async applyWhatIf(rawWeights: Record<string, number>): Promise<void> {
    const cohort = this.requireCohort();
    const total = Object.values(rawWeights).reduce((acc, v) => acc + v, 0);
    if (!(total > 0)) throw new Error("what-if weights must sum to a positive value");
    const weights: Record<string, number> = {};
    for (const [label, value] of Object.entries(rawWeights)) {
      weights[label] = value / total;
    }
    await this.run(
      () => this.client.rank(cohort.id, { weights }),
      (ranking) => ({ ranking, whatIfActive: true }),
      () => this.applyWhatIf(rawWeights),
    );
  }

  /** One action back to the session-derived weights. */
  async restoreDerivedWeights(): Promise<void> {
    const cohort = this.requireCohort();
    const session = this.requireSession();
    await this.run(
      () => this.client.rank(cohort.id, { sessionId: session.id }),
      (ranking) => ({ ranking, baselineRanking: ranking, whatIfActive: false }),
      () => this.restoreDerivedWeights(),
    );
  }

  async compareMethods(): Promise<void> {
    const cohort = this.requireCohort();
    await this.run(
      () => this.client.compare(cohort.id),
      (comparison) => ({ comparison }),
      () => this.compareMethods(),
    );
  }

  async allocateUnits(capacity: number, basis?: string): Promise<void> {
    const cohort = this.requireCohort();
    await this.run(
      () => this.client.allocate(cohort.id, capacity, basis),
      (allocation) => ({
        allocation,
        previousAllocation: this.state.allocation,
      }),
      () => this.allocateUnits(capacity, basis),
    );
  }

  private requireCohort(): CohortDetail {
    if (!this.state.cohort) throw new Error("no cohort loaded");
    return this.state.cohort;
  }

  private requireSession(): SessionView {
    if (!this.state.session) throw new Error("no active session");
    return this.state.session;
  }
}
