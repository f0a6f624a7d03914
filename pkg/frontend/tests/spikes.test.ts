import { describe, expect, it } from "vitest";

import { shiftBucket, SpikesView } from "../src/views/spikes";
import { defaultRoutes, mountView, SPIKES } from "./helpers";

describe("shiftBucket", () => {
  it("moves days across month boundaries", () => {
    expect(shiftBucket("2021-03-02", "day", -8)).toBe("2021-02-22");
    expect(shiftBucket("2021-03-30", "day", 2)).toBe("2021-04-01");
  });

  it("moves months across year boundaries", () => {
    expect(shiftBucket("2021-01-01", "month", -2)).toBe("2020-11-01");
    expect(shiftBucket("2015-09-01", "month", 2)).toBe("2015-11-01");
  });
});

describe("spikes view", () => {
  it("renders one row per flag with the payload fields verbatim", async () => {
    const { view } = mountView(SpikesView, defaultRoutes(), { view: "spikes" });
    await view.refresh();
    const rows = [...view.el.querySelectorAll<HTMLTableRowElement>("tbody tr")];
    expect(rows).toHaveLength(SPIKES.flagged.length);
    const flag = SPIKES.flagged[0];
    expect(rows[0].dataset.bucket).toBe(flag.bucket);
    expect(rows[0].dataset.z).toBe(String(flag.z_score));
    const cells = [...rows[0].querySelectorAll("td")].map((c) => c.textContent);
    expect(cells).toEqual([
      flag.bucket,
      String(flag.value),
      String(flag.baseline_mean),
      String(flag.baseline_std),
      String(flag.z_score),
    ]);
  });

  it("shows the window and threshold the server applied", async () => {
    const { view } = mountView(SpikesView, defaultRoutes(), { view: "spikes" });
    await view.refresh();
    expect(view.el.querySelector(".legend")?.textContent).toBe(
      "window 8, threshold k=3",
    );
  });

  it("links each flag to the timeline zoomed around the bucket", async () => {
    const { view, store } = mountView(SpikesView, defaultRoutes(), {
      view: "spikes",
    });
    await view.refresh();
    const link = view.el.querySelector<HTMLAnchorElement>(
      'tr[data-bucket="2021-03-20"] a',
    )!;
    expect(link.getAttribute("href")).toContain("from=2021-03-12");
    expect(link.getAttribute("href")).toContain("to=2021-03-22");
    link.click();
    expect(store.state.view).toBe("timeline");
    expect(store.state.from).toBe("2021-03-12");
    expect(store.state.to).toBe("2021-03-22");
  });

  it("passes window and k through to the API", async () => {
    const { view, backend } = mountView(SpikesView, defaultRoutes(), {
      view: "spikes",
      window: 12,
      k: 2.5,
    });
    await view.refresh();
    const url = backend.last("/api/spikes");
    expect(url.searchParams.get("window")).toBe("12");
    expect(url.searchParams.get("k")).toBe("2.5");
  });

  it("reports quiet data instead of an empty table", async () => {
    const { view } = mountView(
      SpikesView,
      defaultRoutes({ "/api/spikes": { window: 8, k: 3, flagged: [] } }),
      { view: "spikes" },
    );
    await view.refresh();
    expect(view.el.querySelector(".empty")?.textContent).toBe(
      "No spikes flagged for these settings.",
    );
    expect(view.el.querySelector("table")).toBeNull();
  });
});
