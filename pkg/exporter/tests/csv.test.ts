import { spawnSync } from 'node:child_process';
import * as fs from 'node:fs';
import * as os from 'node:os';
import * as path from 'node:path';
import { afterAll, describe, expect, it } from 'vitest';
import { updateManifest, writeLabelCsv, writePredictionCsv } from '../src/csv.js';

const tmpRoot = fs.mkdtempSync(path.join(os.tmpdir(), 'zoo-csv-'));
afterAll(() => fs.rmSync(tmpRoot, { recursive: true, force: true }));

describe('writePredictionCsv', () => {
  it('writes a class_<c> header and one row per sample', () => {
    const file = path.join(tmpRoot, 'preds.csv');
    writePredictionCsv(file, [
      [0.5, 0.25, 0.25],
      [0.1, 0.2, 0.7],
    ]);
    const lines = fs.readFileSync(file, 'utf8').split('\n');
    expect(lines[0]).toBe('class_0,class_1,class_2');
    expect(lines[1]).toBe('0.5,0.25,0.25');
    expect(lines[2]).toBe('0.1,0.2,0.7');
    expect(lines[3]).toBe('');
  });

  it('rejects empty and ragged inputs', () => {
    expect(() => writePredictionCsv(path.join(tmpRoot, 'x.csv'), [])).toThrow(/empty/);
    expect(() => writePredictionCsv(path.join(tmpRoot, 'x.csv'), [[0.5, 0.5], [1.0]])).toThrow(/ragged/);
  });
});

describe('updateManifest', () => {
  it('creates then extends a manifest, replacing duplicate ids', () => {
    const dir = path.join(tmpRoot, 'manifest');
    fs.mkdirSync(dir, { recursive: true });
    updateManifest(dir, { id: 'a', path: 'a.csv' }, 'labels.csv');
    updateManifest(dir, { id: 'b', path: 'b.csv' }, 'labels.csv');
    const manifestPath = updateManifest(dir, { id: 'a', path: 'a2.csv' }, 'labels.csv');
    const manifest = JSON.parse(fs.readFileSync(manifestPath, 'utf8'));
    expect(manifest.classifiers).toEqual([
      { id: 'a', path: 'a2.csv' },
      { id: 'b', path: 'b.csv' },
    ]);
    expect(manifest.labels).toBe('labels.csv');
  });
});

describe('interface conformance', () => {
  it('artifacts load cleanly in the consuming toolkit', () => {
    const dir = path.join(tmpRoot, 'conform');
    fs.mkdirSync(dir, { recursive: true });
    writePredictionCsv(path.join(dir, 'model.csv'), [
      [0.7, 0.1, 0.1, 0.1],
      [0.05, 0.05, 0.7, 0.2],
      [0.25, 0.25, 0.25, 0.25],
    ]);
    writeLabelCsv(path.join(dir, 'labels.csv'), [0, 2, 3]);
    const manifestPath = updateManifest(dir, { id: 'model', path: 'model.csv' }, 'labels.csv');

    const probe = [
      'import sys',
      'from ensemble_forge import load_ensemble',
      'ensemble = load_ensemble(sys.argv[1])',
      'assert ensemble.stacked.shape == (1, 3, 4), ensemble.stacked.shape',
      'assert list(ensemble.labels.labels) == [0, 2, 3]',
      'print("ok")',
    ].join('\n');
    const result = spawnSync('python3', ['-c', probe, manifestPath], { encoding: 'utf8' });
    expect(result.status, result.stderr).toBe(0);
    expect(result.stdout.trim()).toBe('ok');
  });
});
