import { defineConfig } from 'vitest/config';

export default defineConfig({
  build: {
    outDir: 'dist',
  },
  server: {
    proxy: {
      // during development the API runs on the Python server
      '^/(datasets|ontologies|rulesets|mine|sessions|results|healthz)': {
        target: 'http://127.0.0.1:8040',
        changeOrigin: true,
      },
    },
  },
  test: {
    environment: 'jsdom',
  },
});
