import { defineConfig } from "vite";

export default defineConfig({
  build: { target: "es2022" },
  test: {
    environment: "jsdom",
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
