import { spawnSync } from 'node:child_process';
import * as fs from 'node:fs';
import * as os from 'node:os';
import * as path from 'node:path';
import { fileURLToPath } from 'node:url';
import { afterAll, describe, expect, it } from 'vitest';

const exporterRoot = path.resolve(path.dirname(fileURLToPath(import.meta.url)), '..');
const tmpRoot = fs.mkdtempSync(path.join(os.tmpdir(), 'zoo-cli-'));
afterAll(() => fs.rmSync(tmpRoot, { recursive: true, force: true }));

function runCli(args: string[]) {
  return spawnSync('npx', ['tsx', 'src/cli.ts', ...args], {
    cwd: exporterRoot,
    encoding: 'utf8',
    timeout: 300_000,
  });
}

describe('cli', () => {
  it('synth-data writes a loadable folder tree', () => {
    const dataDir = path.join(tmpRoot, 'data');
    const result = runCli([
      'synth-data', '--out', dataDir,
      '--train-per-class', '2', '--val-per-class', '1', '--test-per-class', '1',
      '--seed', '3',
    ]);
    expect(result.status, result.stderr).toBe(0);
    expect(result.stdout).toContain(dataDir);
    expect(fs.readdirSync(path.join(dataDir, 'train'))).toHaveLength(10);
    expect(fs.readdirSync(path.join(dataDir, 'val', 'class_9'))).toHaveLength(1);
  });

  it('export trains a branch and reports the manifest path', () => {
    const dataDir = path.join(tmpRoot, 'data');
    const outDir = path.join(tmpRoot, 'out');
    const result = runCli([
      'export', '--branch', 'inception_bilstm',
      '--data', dataDir, '--out', outDir,
      '--epochs', '1', '--batch-size', '8', '--seed', '1',
    ]);
    expect(result.status, result.stderr).toBe(0);
    expect(result.stdout).toContain('inception_bilstm: val accuracy');
    const manifest = JSON.parse(
      fs.readFileSync(path.join(outDir, 'test', 'manifest.json'), 'utf8'),
    );
    expect(manifest.classifiers).toEqual([
      { id: 'inception_bilstm', path: 'inception_bilstm.csv' },
    ]);
    // Without --input-size the network is built at the dataset's native
    // resolution rather than the 224-pixel reference default.
    expect(result.stdout).toContain('inputSize=32');
  });

  it('exits 2 when the dataset directory is missing', () => {
    const result = runCli([
      'export', '--branch', 'vanilla_cnn',
      '--data', path.join(tmpRoot, 'nowhere'), '--out', path.join(tmpRoot, 'out2'),
      '--epochs', '1',
    ]);
    expect(result.status).toBe(2);
    expect(result.stderr).toContain('error:');
  });

  it('exits 4 on an unknown branch, even when the data dir is also missing', () => {
    const result = runCli([
      'export', '--branch', 'resnet50',
      '--data', path.join(tmpRoot, 'nowhere'), '--out', path.join(tmpRoot, 'out3'),
    ]);
    expect(result.status).toBe(4);
    expect(result.stderr).toContain('unknown branch');
  });

  it('exits 4 on an unknown optimizer tag, before touching the dataset', () => {
    const result = runCli([
      'export', '--branch', 'vanilla_cnn', '--optimizer', 'adagrad',
      '--data', path.join(tmpRoot, 'nowhere'), '--out', path.join(tmpRoot, 'out4'),
    ]);
    expect(result.status).toBe(4);
    expect(result.stderr).toContain('unknown optimizer');
  });

  it('exits 4 on missing required options or a bad subcommand', () => {
    expect(runCli(['export', '--branch', 'vanilla_cnn']).status).toBe(4);
    expect(runCli(['train']).status).toBe(4);
    expect(runCli([]).status).toBe(4);
  });
});
