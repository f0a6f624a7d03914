/**
 * Test doubles: a scripted fetch that records every request, plus
 * frozen API payloads the contract tests assert against.
 */

import {
  ApiClient,
  ChoroplethPayload,
  CountriesMeta,
  CountriesPayload,
  FetchLike,
  FetchResponse,
  IngestStatus,
  RootcodesMeta,
  SpikesPayload,
  TimelinePayload,
  TonePayload,
} from "../src/api";
import { DEFAULT_STATE, FilterState, StateStore } from "../src/state";

/** Route value that makes the mock answer with an error body. */
export class ErrorBody {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly message: string,
  ) {}
}

export type RouteValue = unknown | ((url: URL) => unknown);

export interface MockBackend {
  fetchFn: FetchLike;
  calls: Array<{ url: URL; signal?: AbortSignal }>;
  urls(path: string): URL[];
  last(path: string): URL;
}

function respond(status: number, payload: unknown): FetchResponse {
  return {
    ok: status < 400,
    status,
    text: async () => JSON.stringify(payload),
  };
}

export function mockApi(routes: Record<string, RouteValue>): MockBackend {
  const calls: MockBackend["calls"] = [];
  const fetchFn: FetchLike = async (url, init) => {
    const parsed = new URL(url, "http://dashboard.test");
    calls.push({ url: parsed, signal: init?.signal });
    const route = routes[parsed.pathname];
    if (route === undefined) {
      return respond(404, {
        status: 404,
        code: "not_found",
        message: `no route for ${parsed.pathname}`,
      });
    }
    const body = typeof route === "function" ? route(parsed) : route;
    if (body instanceof ErrorBody) {
      return respond(body.status, {
        status: body.status,
        code: body.code,
        message: body.message,
      });
    }
    return respond(200, body);
  };
  return {
    fetchFn,
    calls,
    urls(path) {
      return calls.filter((c) => c.url.pathname === path).map((c) => c.url);
    },
    last(path) {
      const matched = this.urls(path);
      if (!matched.length) throw new Error(`no request hit ${path}`);
      return matched[matched.length - 1];
    },
  };
}

export const TIMELINE: TimelinePayload = {
  granularity: "day",
  unit: "distinct-articles",
  points: [
    { bucket: "2021-03-01", count: 4 },
    { bucket: "2021-03-02", count: 7 },
    { bucket: "2021-03-03", count: 0 },
    { bucket: "2021-03-04", count: 12 },
    { bucket: "2021-03-05", count: 5 },
  ],
};

export const TIMELINE_PERCENT: TimelinePayload = {
  ...TIMELINE,
  percent: [2.5, 3.5, 0, 6, 2.5],
  zero_denominator_buckets: ["2021-03-03"],
};

export const TIMELINE_ZERO: TimelinePayload = {
  granularity: "day",
  unit: "distinct-articles",
  points: [
    { bucket: "2021-03-01", count: 0 },
    { bucket: "2021-03-02", count: 0 },
  ],
};

export const TONE: TonePayload = {
  granularity: "day",
  points: [
    { bucket: "2021-03-01", min: -8.2, median: -3.1, max: 1.4, n: 9 },
    { bucket: "2021-03-02", min: -6.5, median: -2.2, max: 0.8, n: 14 },
  ],
};

export const COUNTRIES: CountriesPayload = {
  which: "actor1",
  entries: [
    { country: "ESP", count: 40 },
    { country: "USA", count: 25 },
    { country: "ITA", count: 10 },
  ],
};

export const CHOROPLETH: ChoroplethPayload = {
  roots: null,
  counts: { ESP: 40, USA: 25, ITA: 10, ROM: 8 },
  country_names: {
    ESP: "Spain",
    USA: "United States",
    ITA: "Italy",
    ROM: "Romania",
  },
  total: 83,
};

export const META_COUNTRIES: CountriesMeta = {
  countries: [
    { cameo: "ESP", name: "Spain", iso2: "ES", iso3: "ESP" },
    { cameo: "USA", name: "United States", iso2: "US", iso3: "USA" },
    { cameo: "ITA", name: "Italy", iso2: "IT", iso3: "ITA" },
    // CAMEO code differs from the ISO key here on purpose
    { cameo: "ROM", name: "Romania", iso2: "RO", iso3: "ROU" },
  ],
};

export const ROOTCODES: RootcodesMeta = {
  roots: {
    "01": "Make Public Statement",
    "02": "Appeal",
    "14": "Protest",
  },
};

export const SPIKES: SpikesPayload = {
  window: 8,
  k: 3,
  flagged: [
    {
      bucket: "2021-03-20",
      value: 42,
      baseline_mean: 6.25,
      baseline_std: 2.1650635094610964,
      z_score: 16.51268570536774,
    },
  ],
};

export const INGEST_STATUS: IngestStatus = {
  last_poll_time: "2021-03-31T23:45:00",
  files_ingested: 93,
  event_rows: 150,
  mention_rows: 420,
  gkg_rows: 300,
};

export function defaultRoutes(
  overrides: Record<string, RouteValue> = {},
): Record<string, RouteValue> {
  return {
    "/api/timeline": TIMELINE,
    "/api/tone": TONE,
    "/api/countries": COUNTRIES,
    "/api/choropleth": CHOROPLETH,
    "/api/spikes": SPIKES,
    "/api/meta/countries": META_COUNTRIES,
    "/api/meta/rootcodes": ROOTCODES,
    "/api/ingest/status": INGEST_STATUS,
    ...overrides,
  };
}

interface ViewLike {
  el: HTMLElement;
  pending: Promise<void> | null;
  refresh(): Promise<void>;
}

export function mountView<T extends ViewLike>(
  ctor: new (api: ApiClient, store: StateStore) => T,
  routes: Record<string, RouteValue>,
  state: Partial<FilterState> = {},
): { view: T; store: StateStore; backend: MockBackend } {
  const backend = mockApi(routes);
  const api = new ApiClient("", backend.fetchFn);
  const store = new StateStore({ ...DEFAULT_STATE, roots: [], ...state });
  const view = new ctor(api, store);
  document.body.innerHTML = "";
  document.body.append(view.el);
  return { view, store, backend };
}
