import { spawnSync } from 'node:child_process';
import * as fs from 'node:fs';
import * as os from 'node:os';
import * as path from 'node:path';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';
import { defaultSpec } from '../src/branches.js';
import { DatasetMissingError, SPLITS, generateDataset } from '../src/dataset.js';
import { TrainingDivergedError, trainAndExport } from '../src/export.js';

const tmpRoot = fs.mkdtempSync(path.join(os.tmpdir(), 'zoo-export-'));
const dataDir = path.join(tmpRoot, 'data');
const outDir = path.join(tmpRoot, 'out');
const PER_CLASS = { train: 2, val: 2, test: 2 };

beforeAll(() => {
  generateDataset(dataDir, { perClass: PER_CLASS, seed: 5, size: 32 });
});
afterAll(() => fs.rmSync(tmpRoot, { recursive: true, force: true }));

function toySpec(name: string) {
  return defaultSpec(name, { epochs: 1, batchSize: 8, inputSize: 32 });
}

describe('trainAndExport', () => {
  it('writes per-split CSVs, labels and a manifest for one branch', async () => {
    const result = await trainAndExport(toySpec('efficientnet_b0'), dataDir, outDir, { seed: 1 });
    expect(result.branch).toBe('efficientnet_b0');
    expect(result.valAccuracy).toBeGreaterThanOrEqual(0);
    expect(result.valAccuracy).toBeLessThanOrEqual(1);
    expect(result.flagged).toBe(result.valAccuracy <= 0.1);

    for (const split of SPLITS) {
      const csvPath = path.join(outDir, split, 'efficientnet_b0.csv');
      const lines = fs.readFileSync(csvPath, 'utf8').trimEnd().split('\n');
      expect(lines[0]).toBe(Array.from({ length: 10 }, (_, c) => `class_${c}`).join(','));
      expect(lines.length - 1).toBe(10 * PER_CLASS[split]);
      for (const line of lines.slice(1)) {
        const values = line.split(',').map(Number);
        expect(values.length).toBe(10);
        let sum = 0;
        for (const v of values) {
          expect(v).toBeGreaterThanOrEqual(0);
          expect(v).toBeLessThanOrEqual(1);
          sum += v;
        }
        expect(Math.abs(sum - 1)).toBeLessThan(1e-3);
      }

      const labels = fs.readFileSync(path.join(outDir, split, 'labels.csv'), 'utf8')
        .trimEnd().split('\n');
      expect(labels[0]).toBe('label');
      expect(labels.length - 1).toBe(10 * PER_CLASS[split]);

      const manifest = JSON.parse(fs.readFileSync(result.manifests[split], 'utf8'));
      expect(manifest.classifiers).toEqual([
        { id: 'efficientnet_b0', path: 'efficientnet_b0.csv' },
      ]);
    }
  });

  it('extends the manifest with further branches without duplicating ids', async () => {
    await trainAndExport(toySpec('inception_bilstm'), dataDir, outDir, { seed: 1 });
    await trainAndExport(toySpec('inception_bilstm'), dataDir, outDir, { seed: 2 });
    const manifest = JSON.parse(
      fs.readFileSync(path.join(outDir, 'test', 'manifest.json'), 'utf8'),
    );
    const ids = manifest.classifiers.map((c: { id: string }) => c.id);
    expect(ids).toEqual(['efficientnet_b0', 'inception_bilstm']);
  });

  it('exports artifacts the consuming toolkit loads without validation errors', () => {
    const probe = [
      'import sys',
      'from ensemble_forge import load_ensemble',
      'ensemble = load_ensemble(sys.argv[1])',
      'print(ensemble.stacked.shape)',
    ].join('\n');
    const manifestPath = path.join(outDir, 'test', 'manifest.json');
    const result = spawnSync('python3', ['-c', probe, manifestPath], { encoding: 'utf8' });
    expect(result.status, result.stderr).toBe(0);
    expect(result.stdout.trim()).toBe(`(2, ${10 * PER_CLASS.test}, 10)`);
  });

  it('rejects invalid specs before training', async () => {
    await expect(trainAndExport(
      { ...toySpec('efficientnet_b0'), epochs: 0 },
      dataDir, outDir,
    )).rejects.toThrow(/epochs/);
  });

  it('raises DatasetMissingError for an absent dataset', async () => {
    await expect(trainAndExport(
      toySpec('efficientnet_b0'),
      path.join(tmpRoot, 'no-such-data'),
      outDir,
    )).rejects.toThrow(DatasetMissingError);
  });

  it('raises TrainingDivergedError when the loss goes non-finite', async () => {
    const spec = defaultSpec('efficientnet_b0', {
      epochs: 2, batchSize: 8, inputSize: 32, learningRate: 1e12,
    });
    await expect(trainAndExport(spec, dataDir, path.join(tmpRoot, 'out-div'), { seed: 1 }))
      .rejects.toThrow(TrainingDivergedError);
  });
});
