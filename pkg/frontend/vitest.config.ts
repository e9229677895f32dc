import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    environment: "node",
    // the round-trip suite boots the real HTTP service
    testTimeout: 30000,
    hookTimeout: 30000,
  },
});
