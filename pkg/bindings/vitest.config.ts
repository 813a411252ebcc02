import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // every test drives a real solver subprocess
    testTimeout: 120_000,
    hookTimeout: 60_000,
  },
});
