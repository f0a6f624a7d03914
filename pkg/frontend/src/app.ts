/**
 * App shell: navigation tabs, ingest status line, and one instance of
 * each view. Only the active view is visible and only it refetches
 * when filters change; the others catch up when activated.
 */

import { ApiClient } from "./api";
import { clear, el } from "./dom";
import { StateStore, ViewName, VIEW_NAMES } from "./state";
import { CountriesView } from "./views/countries";
import { MapView } from "./views/map";
import { SpikesView } from "./views/spikes";
import { TimelineView } from "./views/timeline";
import { ToneView } from "./views/tone";

export interface View {
  readonly name: ViewName;
  readonly el: HTMLElement;
  pending: Promise<void> | null;
  refresh(): Promise<void>;
}

export interface App {
  store: StateStore;
  views: Record<ViewName, View>;
  statusReady: Promise<void>;
}

const TAB_LABELS: Record<ViewName, string> = {
  timeline: "Timeline",
  tone: "Tone",
  countries: "Countries",
  map: "Map",
  spikes: "Spikes",
};

export function createApp(
  root: HTMLElement,
  api: ApiClient,
  store: StateStore,
): App {
  const views: Record<ViewName, View> = {
    timeline: new TimelineView(api, store),
    tone: new ToneView(api, store),
    countries: new CountriesView(api, store),
    map: new MapView(api, store),
    spikes: new SpikesView(api, store),
  };

  const tabs = new Map<ViewName, HTMLButtonElement>();
  const nav = el("nav", { class: "tabs" });
  for (const name of VIEW_NAMES) {
    const tab = el(
      "button",
      {
        type: "button",
        "data-view": name,
        onclick: () => store.update({ view: name }),
      },
      TAB_LABELS[name],
    );
    tabs.set(name, tab);
    nav.append(tab);
  }

  const status = el("div", { class: "ingest-status" }, "loading status...");
  const statusReady = api
    .ingestStatus()
    .then((s) => {
      const poll = s.last_poll_time ? `, last poll ${s.last_poll_time}` : "";
      status.textContent =
        `${s.files_ingested} files ingested, ${s.event_rows} events, ` +
        `${s.mention_rows} mentions, ${s.gkg_rows} documents${poll}`;
    })
    .catch(() => {
      status.textContent = "ingest status unavailable";
    });

  const main = el("main", { class: "views" });
  for (const name of VIEW_NAMES) main.append(views[name].el);

  const applyVisibility = () => {
    const active = store.state.view;
    for (const name of VIEW_NAMES) {
      views[name].el.hidden = name !== active;
      if (name === active) tabs.get(name)!.setAttribute("aria-current", "page");
      else tabs.get(name)!.removeAttribute("aria-current");
    }
  };

  store.subscribe(applyVisibility);
  applyVisibility();

  clear(root);
  root.append(
    el(
      "header",
      {},
      el("h1", {}, "gdeltwatch"),
      nav,
      status,
    ),
    main,
  );

  views[store.state.view].refresh();
  return { store, views, statusReady };
}
