import "./styles.css";
import { ApiClient } from "./api/client";
import type { ApplicationRecord } from "./api/types";
import { t } from "./state/locale";
import { AppStore } from "./state/store";
import { Banner } from "./ui/banner";
import { el, mount } from "./ui/dom";
import { JudgmentGrid } from "./ui/judgmentGrid";
import { RankingExplorer } from "./ui/rankingExplorer";
import { WhatIfPanel } from "./ui/whatIfPanel";

const store = new AppStore(new ApiClient(""));
const banner = new Banner(store);
const grid = new JudgmentGrid(store);
const explorer = new RankingExplorer(store);
const whatIf = new WhatIfPanel(store);

// The explorer keeps presentation state (sort order, compared pair), so it
// owns a persistent host element instead of being rebuilt per render.
const explorerHost = el("div", { class: "explorer-host" });
explorer.attach(explorerHost);
store.subscribe(() => explorer.redraw());

function cohortControls(): HTMLElement {
  const state = store.getState();
  const input = el("textarea", {
    class: "applications-input",
    rows: 6,
    placeholder: '[{"student_id": "...", "mention": "...", ...}]',
  });
  const status = state.cohort
    ? `${state.cohort.mention}/${state.cohort.level} — ${state.cohort.count} applications` +
      (state.screening
        ? `, ${state.screening.counts.eligible} eligible / ${state.screening.counts.rejected} rejected`
        : "")
    : "";
  return el(
    "section",
    { class: "cohort-controls" },
    el("h2", {}, t("app.cohort")),
    input,
    el(
      "div",
      {},
      el(
        "button",
        {
          onclick: () => {
            const records = JSON.parse(input.value) as ApplicationRecord[];
            void store.loadCohort(records);
          },
        },
        t("app.loadCohort"),
      ),
      el(
        "button",
        {
          disabled: !state.cohort,
          onclick: () => void store.screenCohort(),
        },
        t("app.screen"),
      ),
      el(
        "button",
        {
          disabled: !state.cohort?.screened,
          onclick: () => void store.startSession(),
        },
        t("app.startSession"),
      ),
    ),
    status ? el("p", { class: "cohort-status" }, status) : null,
  );
}

function page(): HTMLElement {
  return el(
    "main",
    {},
    el("h1", {}, t("app.title")),
    banner.render(),
    cohortControls(),
    grid.render(),
    whatIf.render(),
    explorerHost,
  );
}

const root = document.querySelector<HTMLElement>("#app");
if (root) {
  mount(root, page, (listener) => store.subscribe(listener));
}
