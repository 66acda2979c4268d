/// <reference types="vitest" />
import { defineConfig } from "vite";

export default defineConfig({
  build: {
    outDir: "dist",
  },
  test: {
    environment: "jsdom",
    globalSetup: "./tests/setup/backend.ts",
    testTimeout: 30_000,
    hookTimeout: 60_000,
  },
});
