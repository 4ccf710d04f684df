import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    environment: "node",
    // The service round trip (spawn, train fixture upload, full session)
    // dominates; unit files finish in milliseconds.
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
