import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    include: ['tests/**/*.test.ts'],
    // Model training in pure-JS TensorFlow is slow; the six-branch
    // integration test needs generous headroom.
    testTimeout: 600_000,
    hookTimeout: 120_000,
    // tfjs keeps WebGL-ish global state; run files one at a time so
    // memory stays bounded and logs stay readable.
    fileParallelism: false,
  },
});
