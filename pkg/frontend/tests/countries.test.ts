import { describe, expect, it } from "vitest";

import { CountriesView } from "../src/views/countries";
import { COUNTRIES, defaultRoutes, mountView } from "./helpers";

describe("countries view", () => {
  it("renders bars in payload order with counts verbatim", async () => {
    const { view } = mountView(CountriesView, defaultRoutes(), {
      view: "countries",
    });
    await view.refresh();
    const rows = [...view.el.querySelectorAll<HTMLElement>(".bar-row")];
    expect(rows.map((r) => r.dataset.country)).toEqual(["ESP", "USA", "ITA"]);
    rows.forEach((row, i) => {
      expect(row.dataset.count).toBe(String(COUNTRIES.entries[i].count));
      expect(row.querySelector(".bar-count")?.textContent).toBe(
        String(COUNTRIES.entries[i].count),
      );
    });
  });

  it("switching the actor refetches with which=actor2", async () => {
    const { view, backend } = mountView(CountriesView, defaultRoutes(), {
      view: "countries",
    });
    await view.refresh();
    const select = view.el.querySelector<HTMLSelectElement>(
      "select[name=which]",
    )!;
    select.value = "actor2";
    select.dispatchEvent(new Event("change"));
    await view.pending;
    expect(backend.last("/api/countries").searchParams.get("which")).toBe(
      "actor2",
    );
  });

  it("changing top-N refetches with the new n", async () => {
    const { view, backend } = mountView(CountriesView, defaultRoutes(), {
      view: "countries",
    });
    await view.refresh();
    const input = view.el.querySelector<HTMLInputElement>("input[name=n]")!;
    input.value = "5";
    input.dispatchEvent(new Event("change"));
    await view.pending;
    expect(backend.last("/api/countries").searchParams.get("n")).toBe("5");
  });

  it("shows an empty state when the store has no matches", async () => {
    const { view } = mountView(
      CountriesView,
      defaultRoutes({ "/api/countries": { which: "actor1", entries: [] } }),
      { view: "countries" },
    );
    await view.refresh();
    expect(view.el.querySelector(".empty")?.textContent).toBe(
      "No country data for these filters.",
    );
  });
});
