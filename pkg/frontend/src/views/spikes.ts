/**
 * Table of timeline buckets flagged as spikes. Each bucket links back
 * to the timeline view zoomed to the window around the flag.
 */

import { ApiClient, isAbortError, SpikesPayload } from "../api";
import { clear, el, option } from "../dom";
import { criteriaParams, encodeState, StateStore } from "../state";

/** Move an ISO bucket date by `delta` buckets of the given size. */
export function shiftBucket(
  bucket: string,
  granularity: "day" | "month",
  delta: number,
): string {
  const [year, month, day] = bucket.split("-").map(Number);
  if (granularity === "month") {
    const total = year * 12 + (month - 1) + delta;
    const y = Math.floor(total / 12);
    const m = (((total % 12) + 12) % 12) + 1;
    return `${String(y).padStart(4, "0")}-${String(m).padStart(2, "0")}-01`;
  }
  const when = new Date(Date.UTC(year, month - 1, day) + delta * 86_400_000);
  return when.toISOString().slice(0, 10);
}

export class SpikesView {
  readonly name = "spikes" as const;
  readonly el: HTMLElement;
  pending: Promise<void> | null = null;

  private table: HTMLElement;
  private criteriaSelect: HTMLSelectElement;
  private granularitySelect: HTMLSelectElement;
  private windowInput: HTMLInputElement;
  private kInput: HTMLInputElement;

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
    this.granularitySelect = el(
      "select",
      {
        name: "granularity",
        onchange: () =>
          store.update({
            granularity: this.granularitySelect.value as "day" | "month",
          }),
      },
      option("day", "daily"),
      option("month", "monthly"),
    );
    this.windowInput = el("input", {
      type: "number",
      name: "window",
      min: 3,
      onchange: () => {
        const window = Number.parseInt(this.windowInput.value, 10);
        if (Number.isInteger(window) && window >= 3) store.update({ window });
      },
    });
    this.kInput = el("input", {
      type: "number",
      name: "k",
      min: 0.5,
      step: 0.5,
      onchange: () => {
        const k = Number(this.kInput.value);
        if (Number.isFinite(k) && k > 0) store.update({ k });
      },
    });
    this.table = el("div", { class: "chart" });
    this.el = el(
      "section",
      { class: "view view-spikes" },
      el(
        "div",
        { class: "controls" },
        el("label", {}, "criteria ", this.criteriaSelect),
        el("label", {}, "granularity ", this.granularitySelect),
        el("label", {}, "window ", this.windowInput),
        el("label", {}, "k ", this.kInput),
      ),
      this.table,
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
    this.granularitySelect.value = s.granularity;
    this.windowInput.value = String(s.window);
    this.kInput.value = String(s.k);
    const params = {
      ...criteriaParams(s),
      granularity: s.granularity,
      unit: s.unit,
      window: String(s.window),
      k: String(s.k),
    };
    let payload: SpikesPayload;
    try {
      payload = await this.api.spikes(params);
    } catch (err) {
      if (isAbortError(err)) return;
      clear(this.table);
      this.table.append(
        el("div", { class: "error" }, err instanceof Error ? err.message : String(err)),
      );
      return;
    }
    this.render(payload);
  }

  /** Link target: the timeline zoomed to the flagged bucket's window. */
  private zoomRange(bucket: string, window: number): { from: string; to: string } {
    const granularity = this.store.state.granularity;
    return {
      from: shiftBucket(bucket, granularity, -window),
      to: shiftBucket(bucket, granularity, 2),
    };
  }

  private render(payload: SpikesPayload): void {
    clear(this.table);
    this.table.append(
      el(
        "div",
        { class: "legend" },
        `window ${payload.window}, threshold k=${payload.k}`,
      ),
    );
    if (!payload.flagged.length) {
      this.table.append(
        el("div", { class: "empty" }, "No spikes flagged for these settings."),
      );
      return;
    }
    const body = el("tbody");
    for (const flag of payload.flagged) {
      const range = this.zoomRange(flag.bucket, payload.window);
      const target = {
        ...this.store.state,
        view: "timeline" as const,
        ...range,
      };
      const link = el(
        "a",
        {
          href: "?" + encodeState(target),
          onclick: (ev: Event) => {
            ev.preventDefault();
            this.store.update({ view: "timeline", ...range });
          },
        },
        flag.bucket,
      );
      body.append(
        el(
          "tr",
          {
            "data-bucket": flag.bucket,
            "data-z": String(flag.z_score),
          },
          el("td", {}, link),
          el("td", {}, String(flag.value)),
          el("td", {}, String(flag.baseline_mean)),
          el("td", {}, String(flag.baseline_std)),
          el("td", {}, String(flag.z_score)),
        ),
      );
    }
    this.table.append(
      el(
        "table",
        { class: "spike-table" },
        el(
          "thead",
          {},
          el(
            "tr",
            {},
            el("th", {}, "bucket"),
            el("th", {}, "count"),
            el("th", {}, "baseline mean"),
            el("th", {}, "baseline std"),
            el("th", {}, "z-score"),
          ),
        ),
        body,
      ),
    );
  }
}
