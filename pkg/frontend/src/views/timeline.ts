/**
 * Article-count line chart with date range, criteria, granularity and
 * unit controls plus an optional percent-of-total overlay. Every
 * rendered figure is a field of the timeline payload.
 */

import { ApiClient, isAbortError, TimelinePayload } from "../api";
import { clear, el, option, svg } from "../dom";
import { criteriaParams, FilterState, StateStore } from "../state";

const W = 720;
const H = 240;
const PAD = 36;

export class TimelineView {
  readonly name = "timeline" as const;
  readonly el: HTMLElement;
  pending: Promise<void> | null = null;

  private chart: HTMLElement;
  private fromInput: HTMLInputElement;
  private toInput: HTMLInputElement;
  private criteriaSelect: HTMLSelectElement;
  private granularitySelect: HTMLSelectElement;
  private unitSelect: HTMLSelectElement;
  private percentBox: HTMLInputElement;

  constructor(
    private api: ApiClient,
    private store: StateStore,
  ) {
    const onRange = () =>
      store.update({ from: this.fromInput.value, to: this.toInput.value });
    this.fromInput = el("input", { type: "date", name: "from", onchange: onRange });
    this.toInput = el("input", { type: "date", name: "to", onchange: onRange });
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
    this.unitSelect = el(
      "select",
      {
        name: "unit",
        onchange: () =>
          store.update({
            unit: this.unitSelect.value as FilterState["unit"],
          }),
      },
      option("auto", "auto"),
      option("events", "events"),
      option("distinct-articles", "distinct articles"),
    );
    this.percentBox = el("input", {
      type: "checkbox",
      name: "percent",
      onchange: () => store.update({ percent: this.percentBox.checked }),
    });
    this.chart = el("div", { class: "chart" });
    this.el = el(
      "section",
      { class: "view view-timeline" },
      el(
        "div",
        { class: "controls" },
        el("label", {}, "from ", this.fromInput),
        el("label", {}, "to ", this.toInput),
        el("label", {}, "criteria ", this.criteriaSelect),
        el("label", {}, "granularity ", this.granularitySelect),
        el("label", {}, "unit ", this.unitSelect),
        el("label", {}, this.percentBox, " % of total volume"),
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
    this.syncControls(s);
    const params: Record<string, string> = {
      ...criteriaParams(s),
      granularity: s.granularity,
      unit: s.unit,
    };
    if (s.percent) params.percent = "1";
    let payload: TimelinePayload;
    try {
      payload = await this.api.timeline(params);
    } catch (err) {
      if (isAbortError(err)) return;
      this.renderError(err);
      return;
    }
    this.render(payload);
  }

  private syncControls(s: FilterState): void {
    this.fromInput.value = s.from;
    this.toInput.value = s.to;
    this.criteriaSelect.value = s.criteria;
    this.granularitySelect.value = s.granularity;
    this.unitSelect.value = s.unit;
    this.percentBox.checked = s.percent;
  }

  private renderError(err: unknown): void {
    clear(this.chart);
    this.chart.append(
      el("div", { class: "error" }, err instanceof Error ? err.message : String(err)),
    );
  }

  private render(payload: TimelinePayload): void {
    clear(this.chart);
    const points = payload.points;
    if (!points.length || points.every((p) => p.count === 0)) {
      this.chart.append(
        el("div", { class: "empty" }, "No matching articles in this range."),
      );
      return;
    }
    const counts = points.map((p) => p.count);
    const top = Math.max(...counts);
    const scaleY = (count: number) =>
      H - PAD - (count / Math.max(top, 1)) * (H - 2 * PAD);
    const scaleX = (i: number) =>
      PAD + (i * (W - 2 * PAD)) / Math.max(points.length - 1, 1);

    const root = svg("svg", {
      viewBox: `0 0 ${W} ${H}`,
      class: "timeline-chart",
      role: "img",
    });
    const line = points
      .map((p, i) => `${i ? "L" : "M"}${scaleX(i)},${scaleY(p.count)}`)
      .join("");
    root.append(svg("path", { d: line, class: "count-line" }));
    points.forEach((p, i) => {
      const dot = svg("circle", {
        cx: scaleX(i),
        cy: scaleY(p.count),
        r: 3,
        class: "pt",
        "data-bucket": p.bucket,
        "data-count": String(p.count),
      });
      dot.append(svg("title", {}, `${p.bucket}: ${p.count}`));
      root.append(dot);
    });
    root.append(
      svg("text", { x: 4, y: PAD, class: "axis" }, String(top)),
      svg("text", { x: PAD, y: H - 8, class: "axis" }, points[0].bucket),
      svg(
        "text",
        { x: W - PAD, y: H - 8, class: "axis", "text-anchor": "end" },
        points[points.length - 1].bucket,
      ),
    );

    if (payload.percent) {
      const percent = payload.percent;
      const topPct = Math.max(...percent);
      const scaleP = (value: number) =>
        H - PAD - (value / Math.max(topPct, 1)) * (H - 2 * PAD);
      const overlay = percent
        .map((value, i) => `${i ? "L" : "M"}${scaleX(i)},${scaleP(value)}`)
        .join("");
      root.append(svg("path", { d: overlay, class: "percent-line" }));
      percent.forEach((value, i) => {
        const dot = svg("circle", {
          cx: scaleX(i),
          cy: scaleP(value),
          r: 3,
          class: "pct",
          "data-bucket": points[i].bucket,
          "data-percent": String(value),
        });
        dot.append(svg("title", {}, `${points[i].bucket}: ${value}%`));
        root.append(dot);
      });
      root.append(
        svg(
          "text",
          { x: W - 4, y: PAD, class: "axis percent-axis", "text-anchor": "end" },
          `${topPct}%`,
        ),
      );
    }

    this.chart.append(root);
    this.chart.append(
      el("div", { class: "legend" }, `${payload.unit} per ${payload.granularity}`),
    );
    const dry = payload.zero_denominator_buckets ?? [];
    if (dry.length) {
      this.chart.append(
        el(
          "div",
          { class: "note" },
          `No denominator volume for: ${dry.join(", ")}`,
        ),
      );
    }
  }
}
