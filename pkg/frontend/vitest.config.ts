import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    // the UI is served from the API server's own origin in production;
    // matching it here keeps the e2e smoke same-origin (port must agree
    // with test/e2e_smoke.test.ts)
    environmentOptions: { happyDOM: { url: "http://127.0.0.1:8177" } },
    include: ["test/**/*.test.ts"],
    testTimeout: 30_000,
    hookTimeout: 30_000,
  },
});
