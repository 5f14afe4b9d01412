import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // The end-to-end test boots the Python annotation server; give it room.
    testTimeout: 60_000,
    hookTimeout: 60_000,
  },
});
