/**
 * Typed client for the gdeltwatch JSON API.
 *
 * Payload interfaces mirror the server's serialized shapes field for
 * field; the dashboard renders those fields directly and computes no
 * aggregates of its own. Requests carry a "channel" name so that a new
 * request aborts the previous in-flight one on the same channel.
 */

export interface TimelinePoint {
  bucket: string;
  count: number;
}

export interface TimelinePayload {
  granularity: string;
  unit: string;
  points: TimelinePoint[];
  percent?: number[];
  zero_denominator_buckets?: string[];
}

export interface TonePoint {
  bucket: string;
  min: number;
  median: number;
  max: number;
  n: number;
}

export interface TonePayload {
  granularity: string;
  points: TonePoint[];
}

export interface CountryEntry {
  country: string;
  count: number;
}

export interface CountriesPayload {
  which: string;
  entries: CountryEntry[];
}

export interface ChoroplethPayload {
  roots: string[] | null;
  counts: Record<string, number>;
  country_names: Record<string, string>;
  total: number;
}

export interface SpikeFlag {
  bucket: string;
  value: number;
  baseline_mean: number;
  baseline_std: number;
  z_score: number;
}

export interface SpikesPayload {
  window: number;
  k: number;
  flagged: SpikeFlag[];
}

export interface CountryInfo {
  cameo: string;
  name: string;
  iso2: string | null;
  iso3: string | null;
}

export interface CountriesMeta {
  countries: CountryInfo[];
}

export interface RootcodesMeta {
  roots: Record<string, string>;
}

export interface IngestStatus {
  last_poll_time: string | null;
  files_ingested: number;
  event_rows: number;
  mention_rows: number;
  gkg_rows: number;
}

/** Subset of the fetch response surface the client relies on. */
export interface FetchResponse {
  ok: boolean;
  status: number;
  text(): Promise<string>;
}

export type FetchLike = (
  url: string,
  init?: { signal?: AbortSignal },
) => Promise<FetchResponse>;

/** Error body the server sends for every non-2xx response. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

// DOMException does not share Error's prototype chain in every realm,
// so detect aborts by name alone.
export function isAbortError(err: unknown): boolean {
  return (
    typeof err === "object" &&
    err !== null &&
    (err as { name?: unknown }).name === "AbortError"
  );
}

export type Params = Record<string, string>;

export class ApiClient {
  private inflight = new Map<string, AbortController>();

  constructor(
    private baseUrl = "",
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  /**
   * GET a JSON payload. When a channel is given, issuing a request
   * aborts any unfinished request previously sent on that channel.
   */
  async get<T>(path: string, params?: Params, channel?: string): Promise<T> {
    const query = params ? new URLSearchParams(params).toString() : "";
    const url = this.baseUrl + path + (query ? "?" + query : "");
    let signal: AbortSignal | undefined;
    if (channel) {
      this.inflight.get(channel)?.abort();
      const controller = new AbortController();
      this.inflight.set(channel, controller);
      signal = controller.signal;
    }
    const response = await this.fetchFn(url, { signal });
    const text = await response.text();
    if (!response.ok) {
      let code = "http_error";
      let message = text;
      try {
        const body = JSON.parse(text);
        code = body.code ?? code;
        message = body.message ?? message;
      } catch {
        // non-JSON error body; keep the raw text
      }
      throw new ApiError(response.status, code, message);
    }
    return JSON.parse(text) as T;
  }

  timeline(params: Params): Promise<TimelinePayload> {
    return this.get("/api/timeline", params, "timeline");
  }

  tone(params: Params): Promise<TonePayload> {
    return this.get("/api/tone", params, "tone");
  }

  countries(params: Params): Promise<CountriesPayload> {
    return this.get("/api/countries", params, "countries");
  }

  choropleth(params: Params): Promise<ChoroplethPayload> {
    return this.get("/api/choropleth", params, "map");
  }

  spikes(params: Params): Promise<SpikesPayload> {
    return this.get("/api/spikes", params, "spikes");
  }

  ingestStatus(): Promise<IngestStatus> {
    return this.get("/api/ingest/status");
  }

  metaCountries(): Promise<CountriesMeta> {
    return this.get("/api/meta/countries");
  }

  metaRootcodes(): Promise<RootcodesMeta> {
    return this.get("/api/meta/rootcodes");
  }
}
