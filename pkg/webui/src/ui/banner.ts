import { t } from "../state/locale";
import type { AppStore } from "../state/store";
import { el } from "./dom";

/** Retriable error banner; rendering nothing when the last call succeeded. */
export class Banner {
  constructor(private readonly store: AppStore) {}

  render(): HTMLElement | null {
    const { banner } = this.store.getState();
    if (!banner) return null;
    return el(
      "div",
      { class: "banner", role: "alert" },
      el("span", { class: "banner-message" }, banner.message),
      el(
        "button",
        { class: "banner-retry", onclick: () => void banner.retry() },
        t("actions.retry"),
      ),
    );
  }
}
