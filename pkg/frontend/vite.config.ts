import { defineConfig } from "vitest/config";

export default defineConfig({
  server: {
    // During development the API runs separately (gdeltwatch serve).
    proxy: { "/api": "http://127.0.0.1:8000" },
  },
  test: {
    environment: "jsdom",
  },
});
