/**
 * Tone band chart: shaded min-to-max area with a median line, one
 * band sample per bucket.
 */

import { ApiClient, isAbortError, TonePayload } from "../api";
import { clear, el, option, svg } from "../dom";
import { criteriaParams, StateStore } from "../state";

const W = 720;
const H = 240;
const PAD = 36;

export class ToneView {
  readonly name = "tone" as const;
  readonly el: HTMLElement;
  pending: Promise<void> | null = null;

  private chart: HTMLElement;
  private criteriaSelect: HTMLSelectElement;
  private granularitySelect: HTMLSelectElement;

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
    this.chart = el("div", { class: "chart" });
    this.el = el(
      "section",
      { class: "view view-tone" },
      el(
        "div",
        { class: "controls" },
        el("label", {}, "criteria ", this.criteriaSelect),
        el("label", {}, "granularity ", this.granularitySelect),
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
    this.granularitySelect.value = s.granularity;
    const params = { ...criteriaParams(s), granularity: s.granularity };
    let payload: TonePayload;
    try {
      payload = await this.api.tone(params);
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

  private render(payload: TonePayload): void {
    clear(this.chart);
    const points = payload.points;
    if (!points.length) {
      this.chart.append(
        el("div", { class: "empty" }, "No tone data for these filters."),
      );
      return;
    }
    const lo = Math.min(...points.map((p) => p.min));
    const hi = Math.max(...points.map((p) => p.max));
    const span = Math.max(hi - lo, 1e-9);
    const scaleY = (v: number) => H - PAD - ((v - lo) / span) * (H - 2 * PAD);
    const scaleX = (i: number) =>
      PAD + (i * (W - 2 * PAD)) / Math.max(points.length - 1, 1);

    const root = svg("svg", {
      viewBox: `0 0 ${W} ${H}`,
      class: "tone-chart",
      role: "img",
    });
    const upper = points.map(
      (p, i) => `${i ? "L" : "M"}${scaleX(i)},${scaleY(p.max)}`,
    );
    const lower = [...points]
      .reverse()
      .map((p, i) => `L${scaleX(points.length - 1 - i)},${scaleY(p.min)}`);
    root.append(
      svg("path", { d: upper.join("") + lower.join("") + "Z", class: "tone-band" }),
    );
    const medianLine = points
      .map((p, i) => `${i ? "L" : "M"}${scaleX(i)},${scaleY(p.median)}`)
      .join("");
    root.append(svg("path", { d: medianLine, class: "median-line" }));
    points.forEach((p, i) => {
      const mark = svg("g", {
        class: "tone-bucket",
        "data-bucket": p.bucket,
        "data-min": String(p.min),
        "data-median": String(p.median),
        "data-max": String(p.max),
        "data-n": String(p.n),
      });
      const dot = svg("circle", { cx: scaleX(i), cy: scaleY(p.median), r: 3 });
      dot.append(
        svg(
          "title",
          {},
          `${p.bucket}: min ${p.min}, median ${p.median}, max ${p.max} (n=${p.n})`,
        ),
      );
      mark.append(dot);
      root.append(mark);
    });
    root.append(
      svg("text", { x: 4, y: PAD, class: "axis" }, String(hi)),
      svg("text", { x: 4, y: H - PAD, class: "axis" }, String(lo)),
      svg("text", { x: PAD, y: H - 8, class: "axis" }, points[0].bucket),
      svg(
        "text",
        { x: W - PAD, y: H - 8, class: "axis", "text-anchor": "end" },
        points[points.length - 1].bucket,
      ),
    );
    this.chart.append(root);
    this.chart.append(
      el("div", { class: "legend" }, `document tone per ${payload.granularity}`),
    );
  }
}
