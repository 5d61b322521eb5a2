import { defineConfig } from "vitest/config";

export default defineConfig({
  build: {
    outDir: "dist",
    target: "es2022",
  },
  server: {
    // during development the Python service runs separately
    proxy: {
      "/health": "http://127.0.0.1:8000",
      "/design": "http://127.0.0.1:8000",
      "/admissibility": "http://127.0.0.1:8000",
      "/roots": "http://127.0.0.1:8000",
      "/sensitivity": "http://127.0.0.1:8000",
      "/simulate": "http://127.0.0.1:8000",
    },
  },
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
