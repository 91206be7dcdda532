import { t } from "../state/locale";
import type { AppStore } from "../state/store";
import { el } from "./dom";

/**
 * What-if weight sliders. Moving a slider pins that criterion's share and
 * rescales the others so the total stays 1 (dragging one slider to 1
 * renormalizes the rest to 0); each change triggers a server re-ranking.
 * The restore button returns to the session-derived weights in one action.
 */
export class WhatIfPanel {
  private draft: Record<string, number> | null = null;

  constructor(private readonly store: AppStore) {}

  /** The weights backing the sliders: the draft, else the displayed ranking's. */
  currentWeights(): Record<string, number> | null {
    if (this.draft) return { ...this.draft };
    const { ranking } = this.store.getState();
    return ranking ? { ...ranking.weights } : null;
  }

  /** Pin `label` at `value` (0..1) and rescale the others to keep sum 1. */
  setWeight(label: string, value: number): Record<string, number> {
    const weights = this.currentWeights();
    if (!weights || !(label in weights)) throw new Error(`unknown criterion ${label}`);
    const pinned = Math.min(Math.max(value, 0), 1);
    const othersTotal = Object.entries(weights)
      .filter(([other]) => other !== label)
      .reduce((acc, [, v]) => acc + v, 0);
    const remainder = 1 - pinned;
    const next: Record<string, number> = {};
    const otherCount = Object.keys(weights).length - 1;
    for (const [other, v] of Object.entries(weights)) {
      if (other === label) {
        next[other] = pinned;
      } else if (othersTotal > 0) {
        next[other] = (v / othersTotal) * remainder;
      } else {
        next[other] = otherCount ? remainder / otherCount : 0;
      }
    }
    this.draft = next;
    return { ...next };
  }

  async apply(): Promise<void> {
    if (!this.draft) return;
    await this.store.applyWhatIf(this.draft);
  }

  async restore(): Promise<void> {
    this.draft = null;
    await this.store.restoreDerivedWeights();
  }

  render(): HTMLElement {
    const weights = this.currentWeights();
    if (!weights) {
      return el("section", { class: "whatif-panel" });
    }
    const sliders = Object.entries(weights).map(([label, weight]) =>
      el(
        "label",
        { class: "whatif-slider" },
        `${label} (${weight.toFixed(2)})`,
        el("input", {
          type: "range",
          min: 0,
          max: 100,
          value: Math.round(weight * 100),
          "data-criterion": label,
          onchange: (event: Event) => {
            const share = Number((event.target as HTMLInputElement).value) / 100;
            this.setWeight(label, share);
            void this.apply();
          },
        }),
      ),
    );
    return el(
      "section",
      { class: "whatif-panel" },
      el("h2", {}, t("whatif.title")),
      el("p", { class: "hint" }, t("whatif.hint")),
      ...sliders,
      el(
        "button",
        {
          class: "whatif-restore",
          disabled: !this.store.getState().whatIfActive,
          onclick: () => void this.restore(),
        },
        t("whatif.restore"),
      ),
    );
  }
}
