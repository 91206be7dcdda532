import { t } from "../state/locale";
import { SAATY_CHOICES, saatyLabel } from "../state/saaty";
import type { AppStore } from "../state/store";
import { el } from "./dom";

/** Fraction of the gauge width covered by a CR value (gauge spans 0..20%). */
const GAUGE_SPAN = 0.2;
const CR_THRESHOLD = 0.1;

/**
 * Upper-triangular judgment editor with weight bars, the server-reported CR
 * gauge, and the ranking actions gated on consistency.
 *
 * The grid never computes weights or consistency itself: the selects hold
 * what the server last returned, the lower triangle mirrors the reciprocal
 * cells from the same response, and the gauge renders the server's latest
 * consistency report.
 */
export class JudgmentGrid {
  constructor(private readonly store: AppStore) {}

  render(): HTMLElement {
    const { session } = this.store.getState();
    if (!session) {
      return el("section", { class: "judgment-grid" }, el("p", {}, t("grid.empty")));
    }

    const labels = session.criteria;
    const head = el(
      "tr",
      {},
      el("th", {}),
      ...labels.map((label) => el("th", { scope: "col" }, label)),
    );
    const rows = labels.map((rowLabel, i) =>
      el(
        "tr",
        {},
        el("th", { scope: "row" }, rowLabel),
        ...labels.map((colLabel, j) => this.cell(session.judgments, rowLabel, colLabel, i, j)),
      ),
    );

    return el(
      "section",
      { class: "judgment-grid" },
      el("h2", {}, t("grid.title")),
      this.statusBadge(session.status),
      el(
        "p",
        { class: "progress" },
        `${session.entered_pairs}/${session.total_pairs} ${t("grid.progress")}`,
      ),
      el("table", { class: "grid-table" }, el("thead", {}, head), el("tbody", {}, ...rows)),
      this.weightBars(session.weights),
      this.crGauge(session.consistency),
      this.rankActions(),
    );
  }

  private cell(
    judgments: Record<string, number>,
    rowLabel: string,
    colLabel: string,
    i: number,
    j: number,
  ): HTMLElement {
    if (i === j) return el("td", { class: "diagonal" }, "1");
    const key = `${rowLabel}:${colLabel}`;
    const value = judgments[key];
    if (i > j) {
      // Mirrored from the server response, so the reciprocal appears the
      // moment the paired edit round-trips.
      return el(
        "td",
        { class: "reciprocal", "data-cell": key },
        value === undefined ? "·" : saatyLabel(value),
      );
    }
    const select = el("select", {
      "data-first": rowLabel,
      "data-second": colLabel,
      onchange: (event: Event) => {
        const raw = (event.target as HTMLSelectElement).value;
        void this.store.setJudgment(rowLabel, colLabel, raw === "" ? null : Number(raw));
      },
    });
    select.append(el("option", { value: "" }, t("grid.selectPlaceholder")));
    for (const choice of SAATY_CHOICES) {
      select.append(el("option", { value: String(choice.value) }, choice.label));
    }
    select.value = value === undefined ? "" : String(value);
    return el("td", {}, select);
  }

  private statusBadge(status: "INCOMPLETE" | "CONSISTENT" | "INCONSISTENT"): HTMLElement {
    return el(
      "span",
      { class: "badge", "data-status": status },
      t(`grid.status.${status}`),
    );
  }

  private weightBars(weights: Record<string, number> | null): HTMLElement | null {
    if (!weights) return null;
    const bars = Object.entries(weights).map(([label, weight]) =>
      el(
        "div",
        { class: "weight-row" },
        el("span", { class: "weight-label" }, label),
        el("div", {
          class: "weight-bar",
          style: `width: ${(weight * 100).toFixed(1)}%`,
        }),
        el("span", { class: "weight-value", "data-criterion": label }, weight.toFixed(2)),
      ),
    );
    return el(
      "div",
      { class: "weights" },
      el("h3", {}, t("grid.weights.title")),
      ...bars,
    );
  }

  private crGauge(
    consistency: { cr: number; consistent: boolean } | null,
  ): HTMLElement | null {
    if (!consistency) return null; // incomplete matrix: no CR to show
    const fill = Math.min(consistency.cr / GAUGE_SPAN, 1) * 100;
    const marker = (CR_THRESHOLD / GAUGE_SPAN) * 100;
    return el(
      "div",
      { class: "cr-gauge", "data-state": consistency.consistent ? "ok" : "warn" },
      el("span", { class: "cr-label" }, t("grid.cr.label")),
      el(
        "div",
        { class: "cr-track" },
        el("div", { class: "cr-fill", style: `width: ${fill.toFixed(1)}%` }),
        el("div", {
          class: "cr-threshold",
          style: `left: ${marker}%`,
          title: t("grid.cr.threshold"),
        }),
      ),
      el("span", { class: "cr-value" }, `${(consistency.cr * 100).toFixed(2)}%`),
    );
  }

  private rankActions(): HTMLElement {
    const rank = el(
      "button",
      {
        class: "rank-action",
        disabled: !this.store.canRank,
        onclick: () => void this.store.rankCohort(),
      },
      t("actions.rank"),
    );
    const actions = el("div", { class: "rank-actions" }, rank);
    if (this.store.canForceRank) {
      actions.append(
        el(
          "button",
          {
            class: "rank-force",
            onclick: () => void this.store.rankCohort({ force: true }),
          },
          t("actions.rankForced"),
        ),
      );
    }
    return actions;
  }
}
