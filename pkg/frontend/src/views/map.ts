/**
 * Choropleth of event counts by actor country with a root-code
 * checkbox filter and a hover tooltip.
 *
 * Counts arrive keyed by CAMEO country code while the bundled
 * polygons are keyed by ISO alpha-3; the join uses the mapping served
 * by the country metadata endpoint, so no code table lives here.
 * Checking no boxes means no root filter at all, as the caption says.
 */

import { ApiClient, ChoroplethPayload, isAbortError } from "../api";
import { clear, el, option, svg } from "../dom";
import { countryShapes, MAP_HEIGHT, MAP_WIDTH } from "../geo";
import { criteriaParams, StateStore } from "../state";

interface CountryMapping {
  byIso3: Map<string, { cameo: string; name: string }>;
}

export class MapView {
  readonly name = "map" as const;
  readonly el: HTMLElement;
  pending: Promise<void> | null = null;

  private criteriaSelect: HTMLSelectElement;
  private boxes: HTMLElement;
  private mapRoot: SVGSVGElement;
  private paths = new Map<string, SVGPathElement>();
  private tooltip: HTMLElement;
  private totalLine: HTMLElement;
  private mapping: Promise<CountryMapping> | null = null;

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
    this.boxes = el("div", { class: "root-boxes" });
    this.tooltip = el("div", { class: "tooltip", hidden: true });
    this.totalLine = el("div", { class: "legend" });
    this.mapRoot = svg("svg", {
      viewBox: `0 0 ${MAP_WIDTH} ${MAP_HEIGHT}`,
      class: "world-map",
      role: "img",
    });
    for (const shape of countryShapes()) {
      const path = svg("path", {
        d: shape.path,
        class: "country",
        "data-iso3": shape.iso3,
        "data-name": shape.defaultName,
        "data-count": "0",
      });
      this.paths.set(shape.iso3, path);
      this.mapRoot.append(path);
    }
    this.mapRoot.addEventListener("mouseover", (ev) => {
      const target = ev.target as SVGPathElement;
      if (target.dataset?.iso3) this.showTooltip(target, ev as MouseEvent);
    });
    this.mapRoot.addEventListener("mouseout", () => {
      this.tooltip.hidden = true;
    });
    this.el = el(
      "section",
      { class: "view view-map" },
      el(
        "div",
        { class: "controls" },
        el("label", {}, "criteria ", this.criteriaSelect),
      ),
      el(
        "div",
        { class: "root-filter" },
        el("div", { class: "note" }, "Event root codes (none checked = all):"),
        this.boxes,
      ),
      this.mapRoot,
      this.tooltip,
      this.totalLine,
    );
    store.subscribe((s) => {
      if (s.view === this.name) this.refresh();
    });
  }

  refresh(): Promise<void> {
    this.pending = this.load();
    return this.pending;
  }

  private ensureMapping(): Promise<CountryMapping> {
    if (!this.mapping) {
      this.mapping = Promise.all([
        this.api.metaCountries(),
        this.api.metaRootcodes(),
      ]).then(([meta, roots]) => {
        this.renderBoxes(roots.roots);
        const byIso3 = new Map<string, { cameo: string; name: string }>();
        for (const info of meta.countries) {
          if (info.iso3) byIso3.set(info.iso3, { cameo: info.cameo, name: info.name });
        }
        return { byIso3 };
      });
    }
    return this.mapping;
  }

  private renderBoxes(roots: Record<string, string>): void {
    clear(this.boxes);
    const codes = Object.keys(roots).sort();
    for (const code of codes) {
      const box = el("input", {
        type: "checkbox",
        value: code,
        checked: this.store.state.roots.includes(code),
        onchange: () => {
          const checked = [
            ...this.boxes.querySelectorAll<HTMLInputElement>("input:checked"),
          ]
            .map((input) => input.value)
            .sort();
          this.store.update({ roots: checked });
        },
      });
      this.boxes.append(
        el("label", { class: "root-box" }, box, ` ${code} ${roots[code]}`),
      );
    }
  }

  private async load(): Promise<void> {
    const s = this.store.state;
    this.criteriaSelect.value = s.criteria;
    let payload: ChoroplethPayload;
    let mapping: CountryMapping;
    try {
      mapping = await this.ensureMapping();
      this.syncBoxes();
      const params: Record<string, string> = { ...criteriaParams(s) };
      if (s.roots.length) params.roots = [...s.roots].sort().join(",");
      payload = await this.api.choropleth(params);
    } catch (err) {
      if (isAbortError(err)) return;
      this.totalLine.textContent =
        err instanceof Error ? err.message : String(err);
      this.totalLine.className = "error";
      return;
    }
    this.paint(payload, mapping);
  }

  private syncBoxes(): void {
    const roots = this.store.state.roots;
    for (const input of this.boxes.querySelectorAll<HTMLInputElement>("input")) {
      input.checked = roots.includes(input.value);
    }
  }

  private paint(payload: ChoroplethPayload, mapping: CountryMapping): void {
    const max = Math.max(...Object.values(payload.counts), 1);
    for (const [iso3, path] of this.paths) {
      const hit = mapping.byIso3.get(iso3);
      const count = hit ? payload.counts[hit.cameo] ?? 0 : 0;
      const name =
        (hit && (payload.country_names[hit.cameo] ?? hit.name)) ||
        path.dataset.name ||
        iso3;
      if (hit) path.dataset.cameo = hit.cameo;
      path.dataset.count = String(count);
      path.dataset.name = name;
      if (count > 0) {
        const lightness = 88 - (count / max) * 50;
        path.style.fill = `hsl(215, 65%, ${lightness}%)`;
      } else {
        path.style.fill = "#e8e8e8";
      }
    }
    this.totalLine.className = "legend";
    this.totalLine.textContent = `Total on map: ${payload.total}`;
  }

  private showTooltip(path: SVGPathElement, ev: MouseEvent): void {
    this.tooltip.textContent = `${path.dataset.name}: ${path.dataset.count}`;
    this.tooltip.style.left = `${ev.clientX + 12}px`;
    this.tooltip.style.top = `${ev.clientY + 12}px`;
    this.tooltip.hidden = false;
  }
}
