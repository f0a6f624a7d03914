/**
 * Top-N country bar chart with an actor1/actor2 switch. Bars render
 * in payload order; the server already sorts by count.
 */

import { ApiClient, CountriesPayload, isAbortError } from "../api";
import { clear, el, option } from "../dom";
import { criteriaParams, StateStore } from "../state";

export class CountriesView {
  readonly name = "countries" as const;
  readonly el: HTMLElement;
  pending: Promise<void> | null = null;

  private chart: HTMLElement;
  private criteriaSelect: HTMLSelectElement;
  private whichSelect: HTMLSelectElement;
  private nInput: HTMLInputElement;

  constructor(
    private api: ApiClient,
    private store: StateStore,
  ) {
    this.criteriaSelect = el(
      "select",
      {
        name: "criteria",
        onchange: () =>
          store.update({ criteria: this.criteriaSelect.value as "1" | "2" }),
      },
      option("1", "1: refugee actor"),
      option("2", "2: refugee actor + discrimination themes"),
    );
    this.whichSelect = el(
      "select",
      {
        name: "which",
        onchange: () =>
          store.update({ which: this.whichSelect.value as "actor1" | "actor2" }),
      },
      option("actor1", "actor 1"),
      option("actor2", "actor 2"),
    );
    this.nInput = el("input", {
      type: "number",
      name: "n",
      min: 1,
      onchange: () => {
        const n = Number.parseInt(this.nInput.value, 10);
        if (Number.isInteger(n) && n >= 1) store.update({ n });
      },
    });
    this.chart = el("div", { class: "chart" });
    this.el = el(
      "section",
      { class: "view view-countries" },
      el(
        "div",
        { class: "controls" },
        el("label", {}, "criteria ", this.criteriaSelect),
        el("label", {}, "actor ", this.whichSelect),
        el("label", {}, "top ", this.nInput),
      ),
      this.chart,
    );
    store.subscribe((s) => {
      if (s.view === this.name) this.refresh();
    });
  }

  refresh(): Promise<void> {
    this.pending = this.load();
    return this.pending;
  }

  private async load(): Promise<void> {
    const s = this.store.state;
    this.criteriaSelect.value = s.criteria;
    this.whichSelect.value = s.which;
    this.nInput.value = String(s.n);
    const params = {
      ...criteriaParams(s),
      n: String(s.n),
      which: s.which,
    };
    let payload: CountriesPayload;
    try {
      payload = await this.api.countries(params);
    } catch (err) {
      if (isAbortError(err)) return;
      clear(this.chart);
      this.chart.append(
        el("div", { class: "error" }, err instanceof Error ? err.message : String(err)),
      );
      return;
    }
    this.render(payload);
  }

  private render(payload: CountriesPayload): void {
    clear(this.chart);
    if (!payload.entries.length) {
      this.chart.append(
        el("div", { class: "empty" }, "No country data for these filters."),
      );
      return;
    }
    const max = Math.max(...payload.entries.map((e) => e.count), 1);
    const list = el("div", { class: "bars" });
    for (const entry of payload.entries) {
      list.append(
        el(
          "div",
          {
            class: "bar-row",
            "data-country": entry.country,
            "data-count": String(entry.count),
          },
          el("span", { class: "bar-label" }, entry.country),
          el(
            "div",
            { class: "bar-track" },
            el("div", {
              class: "bar-fill",
              style: `width:${(entry.count / max) * 100}%`,
            }),
          ),
          el("span", { class: "bar-count" }, String(entry.count)),
        ),
      );
    }
    this.chart.append(list);
    this.chart.append(
      el("div", { class: "legend" }, `${payload.which} country codes`),
    );
  }
}
