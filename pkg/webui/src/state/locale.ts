/** English label catalog with a hook for swapping in other locales. */

const en = {
  "app.title": "Student housing decision support",
  "app.cohort": "Cohort",
  "app.loadCohort": "Create cohort",
  "app.screen": "Screen applications",
  "app.startSession": "Start judgment session",
  "grid.title": "Pairwise judgments",
  "grid.empty": "Start a session to enter judgments.",
  "grid.selectPlaceholder": "–",
  "grid.status.INCOMPLETE": "Incomplete",
  "grid.status.CONSISTENT": "Consistent",
  "grid.status.INCONSISTENT": "Inconsistent",
  "grid.progress": "pairs entered",
  "grid.weights.title": "Derived weights",
  "grid.cr.label": "Consistency ratio",
  "grid.cr.threshold": "0.1 acceptability threshold",
  "actions.rank": "Rank cohort",
  "actions.rankForced": "Rank anyway (recorded as forced)",
  "actions.retry": "Retry",
  "banner.network": "The server could not be reached; nothing was changed.",
  "explorer.title": "Rankings",
  "explorer.empty": "Rank the cohort to explore results.",
  "explorer.rank": "Rank",
  "explorer.student": "Student",
  "explorer.score": "Score",
  "explorer.compare.title": "Side-by-side comparison",
  "explorer.compare.identical": "identical ranks",
  "explorer.allocation.title": "Allocation",
  "explorer.allocation.capacity": "Capacity",
  "explorer.allocation.allocated": "Allocated",
  "explorer.allocation.waitlist": "Waiting list",
  "explorer.allocation.gains": "gains a unit",
  "explorer.allocation.loses": "loses a unit",
  "whatif.title": "What-if weights",
  "whatif.hint": "Sliders renormalize to sum 1; ranking is recomputed by the server.",
  "whatif.restore": "Restore derived weights",
};

export type LocaleKey = keyof typeof en;

let active: Record<LocaleKey, string> = { ...en };

export function t(key: LocaleKey): string {
  return active[key] ?? en[key];
}

/** Overlay translations on the English fallback catalog. */
export function registerLocale(overrides: Partial<Record<LocaleKey, string>>): void {
  active = { ...en, ...overrides };
}

export function resetLocale(): void {
  active = { ...en };
}
