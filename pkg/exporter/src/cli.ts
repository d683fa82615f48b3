import * as fs from 'node:fs';
import * as path from 'node:path';
import { parseArgs } from 'node:util';
import { PNG } from 'pngjs';
import { BRANCH_NAMES, defaultSpec, isBranchName, makeOptimizer } from './branches.js';
import { DatasetMissingError, Split, generateDataset } from './dataset.js';
import { TrainingDivergedError, trainAndExport } from './export.js';

const USAGE = `usage:
  model-zoo-exporter synth-data --out <dir> [--train-per-class N] [--val-per-class N]
                                [--test-per-class N] [--size PX] [--seed N]
  model-zoo-exporter export --branch <name> --data <dir> --out <dir>
                            [--epochs N] [--batch-size N] [--optimizer TAG]
                            [--learning-rate X] [--input-size PX] [--seed N]`;

class UsageError extends Error {}

function requireOption(value: string | undefined, flag: string): string {
  if (value === undefined) {
    throw new UsageError(`missing required option ${flag}`);
  }
  return value;
}

function parsePositiveInt(value: string, flag: string): number {
  const parsed = Number(value);
  if (!Number.isInteger(parsed) || parsed < 1) {
    throw new UsageError(`${flag} must be a positive integer, got '${value}'`);
  }
  return parsed;
}

function parseSeed(value: string, flag: string): number {
  const parsed = Number(value);
  if (!Number.isInteger(parsed) || parsed < 0) {
    throw new UsageError(`${flag} must be a non-negative integer, got '${value}'`);
  }
  return parsed;
}

/** Read the pixel size of the first training image, to size the network. */
function nativeImageSize(dataDir: string): number {
  const classDir = path.join(dataDir, 'train', 'class_0');
  if (!fs.existsSync(classDir)) {
    throw new DatasetMissingError(`missing class directory: ${classDir}`);
  }
  const first = fs.readdirSync(classDir).filter((f) => f.endsWith('.png')).sort()[0];
  if (first === undefined) {
    throw new DatasetMissingError(`no images in ${classDir}`);
  }
  return PNG.sync.read(fs.readFileSync(path.join(classDir, first))).width;
}

async function runSynthData(args: string[]): Promise<void> {
  const { values } = parseArgs({
    args,
    options: {
      out: { type: 'string' },
      'train-per-class': { type: 'string', default: '20' },
      'val-per-class': { type: 'string', default: '8' },
      'test-per-class': { type: 'string', default: '8' },
      size: { type: 'string', default: '32' },
      seed: { type: 'string', default: '0' },
    },
  });
  const out = requireOption(values.out, '--out');
  const perClass: Record<Split, number> = {
    train: parsePositiveInt(values['train-per-class']!, '--train-per-class'),
    val: parsePositiveInt(values['val-per-class']!, '--val-per-class'),
    test: parsePositiveInt(values['test-per-class']!, '--test-per-class'),
  };
  generateDataset(out, {
    perClass,
    size: parsePositiveInt(values.size!, '--size'),
    seed: parseSeed(values.seed!, '--seed'),
  });
  console.log(`wrote toy dataset under ${out}`);
}

async function runExport(args: string[]): Promise<void> {
  const { values } = parseArgs({
    args,
    options: {
      branch: { type: 'string' },
      data: { type: 'string' },
      out: { type: 'string' },
      epochs: { type: 'string' },
      'batch-size': { type: 'string' },
      optimizer: { type: 'string' },
      'learning-rate': { type: 'string' },
      'input-size': { type: 'string' },
      seed: { type: 'string', default: '0' },
    },
  });
  const branch = requireOption(values.branch, '--branch');
  const data = requireOption(values.data, '--data');
  const out = requireOption(values.out, '--out');

  if (!isBranchName(branch)) {
    throw new UsageError(`unknown branch '${branch}' (expected one of: ${BRANCH_NAMES.join(', ')})`);
  }
  if (values.optimizer !== undefined) {
    try {
      makeOptimizer(values.optimizer, 1e-3);
    } catch (e) {
      throw new UsageError(e instanceof Error ? e.message : String(e));
    }
  }

  const overrides: Record<string, number | string> = {};
  if (values.epochs !== undefined) {
    overrides.epochs = parsePositiveInt(values.epochs, '--epochs');
  }
  if (values['batch-size'] !== undefined) {
    overrides.batchSize = parsePositiveInt(values['batch-size'], '--batch-size');
  }
  if (values.optimizer !== undefined) {
    overrides.optimizer = values.optimizer;
  }
  if (values['learning-rate'] !== undefined) {
    const lr = Number(values['learning-rate']);
    if (!(lr > 0)) {
      throw new UsageError(`--learning-rate must be positive, got '${values['learning-rate']}'`);
    }
    overrides.learningRate = lr;
  }
  // Unless overridden, train at the dataset's own resolution rather than
  // upscaling everything to the 224-pixel reference default.
  overrides.inputSize = values['input-size'] !== undefined
    ? parsePositiveInt(values['input-size'], '--input-size')
    : nativeImageSize(data);

  let spec;
  try {
    spec = defaultSpec(branch, overrides);
    makeOptimizer(spec.optimizer, spec.learningRate);
  } catch (e) {
    throw new UsageError(e instanceof Error ? e.message : String(e));
  }
  const seed = parseSeed(values.seed ?? '0', '--seed');
  console.log(`training ${spec.name}: epochs=${spec.epochs} batchSize=${spec.batchSize} ` +
    `optimizer=${spec.optimizer} lr=${spec.learningRate} inputSize=${spec.inputSize}`);
  const result = await trainAndExport(spec, data, out, { seed });
  console.log(`${result.branch}: val accuracy ${result.valAccuracy.toFixed(3)}` +
    (result.flagged ? ' (flagged: did not beat chance)' : ''));
  console.log(`manifest: ${result.manifests.test}`);
}

async function main(): Promise<void> {
  const [command, ...rest] = process.argv.slice(2);
  if (command === 'synth-data') {
    await runSynthData(rest);
  } else if (command === 'export') {
    await runExport(rest);
  } else {
    throw new UsageError(USAGE);
  }
}

main().catch((e: unknown) => {
  const message = e instanceof Error ? e.message : String(e);
  console.error(`error: ${message}`);
  if (e instanceof DatasetMissingError) {
    process.exitCode = 2;
  } else if (e instanceof TrainingDivergedError) {
    process.exitCode = 3;
  } else if (e instanceof UsageError || (e instanceof Error && e.name === 'TypeError')) {
    process.exitCode = 4;
  } else {
    process.exitCode = 1;
  }
});
