/**
 * Shared filter state and its URL encoding.
 *
 * Every control writes through a single StateStore; the current state
 * round-trips through the query string so an analysis is shareable as
 * a plain link. Unknown or invalid parameter values fall back to the
 * defaults rather than erroring.
 */

export type ViewName = "timeline" | "tone" | "countries" | "map" | "spikes";

export const VIEW_NAMES: readonly ViewName[] = [
  "timeline",
  "tone",
  "countries",
  "map",
  "spikes",
];

export interface FilterState {
  view: ViewName;
  criteria: "1" | "2";
  from: string;
  to: string;
  granularity: "day" | "month";
  unit: "auto" | "events" | "distinct-articles";
  percent: boolean;
  which: "actor1" | "actor2";
  n: number;
  roots: string[];
  window: number;
  k: number;
}

export const DEFAULT_STATE: FilterState = {
  view: "timeline",
  criteria: "1",
  from: "",
  to: "",
  granularity: "day",
  unit: "auto",
  percent: false,
  which: "actor1",
  n: 20,
  roots: [],
  window: 8,
  k: 3,
};

export function freshState(patch: Partial<FilterState> = {}): FilterState {
  return { ...DEFAULT_STATE, roots: [], ...patch };
}

const ISO_DATE = /^\d{4}-\d{2}-\d{2}$/;
const ROOT_CODE = /^\d{2}$/;

function pick<T extends string>(
  value: string | null,
  allowed: readonly T[],
  fallback: T,
): T {
  return allowed.includes(value as T) ? (value as T) : fallback;
}

export function encodeState(s: FilterState): string {
  const q = new URLSearchParams();
  const d = DEFAULT_STATE;
  if (s.view !== d.view) q.set("view", s.view);
  if (s.criteria !== d.criteria) q.set("criteria", s.criteria);
  if (s.from) q.set("from", s.from);
  if (s.to) q.set("to", s.to);
  if (s.granularity !== d.granularity) q.set("granularity", s.granularity);
  if (s.unit !== d.unit) q.set("unit", s.unit);
  if (s.percent) q.set("percent", "1");
  if (s.which !== d.which) q.set("which", s.which);
  if (s.n !== d.n) q.set("n", String(s.n));
  if (s.roots.length) q.set("roots", [...s.roots].sort().join(","));
  if (s.window !== d.window) q.set("window", String(s.window));
  if (s.k !== d.k) q.set("k", String(s.k));
  return q.toString();
}

export function decodeState(search: string): FilterState {
  const q = new URLSearchParams(search);
  const s = freshState();
  s.view = pick(q.get("view"), VIEW_NAMES, s.view);
  s.criteria = pick(q.get("criteria"), ["1", "2"] as const, s.criteria);
  for (const key of ["from", "to"] as const) {
    const value = q.get(key);
    if (value && ISO_DATE.test(value)) s[key] = value;
  }
  s.granularity = pick(q.get("granularity"), ["day", "month"] as const, s.granularity);
  s.unit = pick(
    q.get("unit"),
    ["auto", "events", "distinct-articles"] as const,
    s.unit,
  );
  s.percent = q.get("percent") === "1";
  s.which = pick(q.get("which"), ["actor1", "actor2"] as const, s.which);
  const n = Number.parseInt(q.get("n") ?? "", 10);
  if (Number.isInteger(n) && n >= 1) s.n = n;
  const rootsText = q.get("roots") ?? "";
  const codes = rootsText
    .split(",")
    .map((c) => c.trim())
    .filter((c) => ROOT_CODE.test(c));
  s.roots = [...new Set(codes)].sort();
  const window = Number.parseInt(q.get("window") ?? "", 10);
  if (Number.isInteger(window) && window >= 3) s.window = window;
  const k = Number(q.get("k") ?? "");
  if (Number.isFinite(k) && k > 0) s.k = k;
  return s;
}

export type Listener = (state: FilterState) => void;

export class StateStore {
  private listeners: Listener[] = [];

  constructor(public state: FilterState = freshState()) {}

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  update(patch: Partial<FilterState>): void {
    this.state = { ...this.state, ...patch };
    for (const fn of [...this.listeners]) fn(this.state);
  }
}

/** Mirror every state change into the address bar. */
export function bindToUrl(store: StateStore, win: Window = window): void {
  store.subscribe((s) => {
    const query = encodeState(s);
    const url = query ? "?" + query : win.location.pathname;
    win.history.replaceState(null, "", url);
  });
}

/** Criteria-related query parameters shared by every endpoint. */
export function criteriaParams(s: FilterState): Record<string, string> {
  const params: Record<string, string> = { criteria: s.criteria };
  if (s.from && s.to) {
    params.from = s.from;
    params.to = s.to;
  }
  return params;
}
