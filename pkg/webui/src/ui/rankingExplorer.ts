import { t } from "../state/locale";
import type { RankEntry, SimilarityEntry } from "../api/types";
import type { AppStore } from "../state/store";
import { el } from "./dom";

type SortOrder = "rank" | "score-desc" | "score-asc";

/**
 * Per-method ranking tables, a side-by-side pair comparison with
 * matched-rank highlighting and the server's similarity percentage, and the
 * allocation cutoff with a gain/loss diff against the previous capacity.
 *
 * Sorting and diffing are presentation only — ranks, similarity and
 * allocation membership all come verbatim from API responses.
 */
export class RankingExplorer {
  private sortOrders = new Map<string, SortOrder>();
  private pair: [string, string] = ["ahp", "wsm"];
  private host: HTMLElement | null = null;

  constructor(private readonly store: AppStore) {}

  /** Keeps a host reference so presentation-state changes can re-render. */
  attach(host: HTMLElement): void {
    this.host = host;
    this.redraw();
  }

  redraw(): void {
    if (this.host) this.host.replaceChildren(this.render());
  }

  render(): HTMLElement {
    const { ranking } = this.store.getState();
    if (!ranking) {
      return el("section", { class: "ranking-explorer" }, el("p", {}, t("explorer.empty")));
    }
    const tables = Object.entries(ranking.rankings).map(([method, entries]) =>
      this.methodTable(method, entries),
    );
    return el(
      "section",
      { class: "ranking-explorer" },
      el("h2", {}, t("explorer.title")),
      el("div", { class: "method-tables" }, ...tables),
      this.comparison(ranking.rankings),
      this.allocation(),
    );
  }

  private sortedEntries(method: string, entries: RankEntry[]): RankEntry[] {
    const order = this.sortOrders.get(method) ?? "rank";
    const sorted = [...entries];
    if (order === "score-desc") sorted.sort((a, b) => b.score - a.score);
    if (order === "score-asc") sorted.sort((a, b) => a.score - b.score);
    if (order === "rank") sorted.sort((a, b) => a.rank - b.rank);
    return sorted;
  }

  private toggleSort(method: string): void {
    const current = this.sortOrders.get(method) ?? "rank";
    this.sortOrders.set(method, current === "score-desc" ? "score-asc" : "score-desc");
    this.redraw();
  }

  private methodTable(method: string, entries: RankEntry[]): HTMLElement {
    const header = el(
      "tr",
      {},
      el(
        "th",
        { class: "sort-rank", onclick: () => {
          this.sortOrders.set(method, "rank");
          this.redraw();
        } },
        t("explorer.rank"),
      ),
      el("th", {}, t("explorer.student")),
      el(
        "th",
        { class: "sort-score", onclick: () => this.toggleSort(method) },
        t("explorer.score"),
      ),
    );
    const rows = this.sortedEntries(method, entries).map((entry) =>
      el(
        "tr",
        { "data-student": entry.student_id },
        el("td", {}, String(entry.rank)),
        el("td", {}, entry.student_id),
        el("td", {}, entry.score.toFixed(4)),
      ),
    );
    return el(
      "table",
      { class: "ranking-table", "data-method": method },
      el("caption", {}, method),
      el("thead", {}, header),
      el("tbody", {}, ...rows),
    );
  }

  setPair(a: string, b: string): void {
    this.pair = [a, b];
    this.redraw();
  }

  private similarityFor(a: string, b: string): SimilarityEntry | null {
    const { comparison } = this.store.getState();
    if (!comparison) return null;
    return (
      comparison.similarity.find(
        (s) =>
          (s.method_a === a && s.method_b === b) ||
          (s.method_a === b && s.method_b === a),
      ) ?? null
    );
  }

  private comparison(rankings: Record<string, RankEntry[]>): HTMLElement | null {
    const [a, b] = this.pair;
    const left = rankings[a];
    const right = rankings[b];
    if (!left || !right) return null;

    const methods = Object.keys(rankings);
    const pairSelect = (slot: 0 | 1, selected: string) => {
      const select = el("select", {
        class: `pair-select pair-${slot === 0 ? "a" : "b"}`,
        onchange: (event: Event) => {
          const value = (event.target as HTMLSelectElement).value;
          const next: [string, string] = [...this.pair];
          next[slot] = value;
          this.setPair(next[0], next[1]);
        },
      });
      for (const method of methods) {
        select.append(el("option", { value: method }, method));
      }
      select.value = selected;
      return select;
    };

    const rankOf = new Map(right.map((entry) => [entry.student_id, entry.rank]));
    const rows = [...left]
      .sort((x, y) => x.rank - y.rank)
      .map((entry) => {
        const other = rankOf.get(entry.student_id);
        const matched = other === entry.rank;
        return el(
          "tr",
          { "data-student": entry.student_id, class: matched ? "match" : "" },
          el("td", {}, entry.student_id),
          el("td", {}, String(entry.rank)),
          el("td", {}, other === undefined ? "—" : String(other)),
        );
      });

    const similarity = this.similarityFor(a, b);
    const summary = similarity
      ? el(
          "p",
          { class: "similarity" },
          `${similarity.matches}/${similarity.n} ${t("explorer.compare.identical")} (`,
          el("span", { class: "similarity-percent" }, `${similarity.percent.toFixed(2)}%`),
          ")",
        )
      : null;

    return el(
      "div",
      { class: "comparison" },
      el("h3", {}, t("explorer.compare.title")),
      el("div", { class: "pair-pickers" }, pairSelect(0, a), pairSelect(1, b)),
      summary,
      el(
        "table",
        { class: "comparison-table" },
        el(
          "thead",
          {},
          el("tr", {}, el("th", {}, t("explorer.student")), el("th", {}, a), el("th", {}, b)),
        ),
        el("tbody", {}, ...rows),
      ),
    );
  }

  private allocation(): HTMLElement | null {
    const { allocation, previousAllocation, screening } = this.store.getState();
    if (!allocation) return null;
    const max = screening ? screening.counts.eligible : allocation.capacity;

    const slider = el("input", {
      type: "range",
      class: "capacity-slider",
      min: 0,
      max,
      value: allocation.capacity,
      onchange: (event: Event) => {
        const capacity = Number((event.target as HTMLInputElement).value);
        void this.store.allocateUnits(capacity, allocation.basis);
      },
    });

    const deltas: HTMLElement[] = [];
    if (previousAllocation) {
      const before = new Set(previousAllocation.allocated);
      const after = new Set(allocation.allocated);
      for (const sid of allocation.allocated) {
        if (!before.has(sid)) {
          deltas.push(
            el("li", { class: "gain", "data-student": sid }, `${sid} ${t("explorer.allocation.gains")}`),
          );
        }
      }
      for (const sid of previousAllocation.allocated) {
        if (!after.has(sid)) {
          deltas.push(
            el("li", { class: "loss", "data-student": sid }, `${sid} ${t("explorer.allocation.loses")}`),
          );
        }
      }
    }

    const list = (title: string, cls: string, ids: string[]) =>
      el(
        "div",
        { class: cls },
        el("h4", {}, title),
        el("ol", {}, ...ids.map((sid) => el("li", { "data-student": sid }, sid))),
      );

    return el(
      "div",
      { class: "allocation" },
      el("h3", {}, t("explorer.allocation.title")),
      el(
        "label",
        {},
        `${t("explorer.allocation.capacity")}: ${allocation.capacity} (${allocation.basis})`,
        slider,
      ),
      deltas.length ? el("ul", { class: "allocation-delta" }, ...deltas) : null,
      list(t("explorer.allocation.allocated"), "allocated", allocation.allocated),
      list(t("explorer.allocation.waitlist"), "waitlist", allocation.waitlist),
    );
  }
}
