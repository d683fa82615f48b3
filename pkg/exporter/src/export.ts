import * as fs from 'node:fs';
import * as path from 'node:path';
import * as tf from '@tensorflow/tfjs';
import { BranchSpec, buildBranch, makeOptimizer, validateSpec } from './branches.js';
import { DatasetMissingError, LoadedSplit, NUM_CLASSES, SPLITS, Split, loadSplit } from './dataset.js';
import { updateManifest, writeLabelCsv, writePredictionCsv } from './csv.js';

/** Raised when training produces a non-finite loss or predictions. */
export class TrainingDivergedError extends Error {}

export interface ExportResult {
  branch: string;
  /** Accuracy of the trained model on the validation split. */
  valAccuracy: number;
  /** True when validation accuracy failed to beat chance (<= 0.1). */
  flagged: boolean;
  /** Manifest path per split, each now including this branch. */
  manifests: Record<Split, string>;
}

export interface TrainOptions {
  /** Seeds the training sample order. Weight initialisation stays framework-random. */
  seed?: number;
}

function shuffledIndices(n: number, seed: number): number[] {
  let state = seed >>> 0;
  const next = () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
  const order = Array.from({ length: n }, (_, i) => i);
  for (let i = n - 1; i > 0; i--) {
    const j = Math.floor(next() * (i + 1));
    [order[i], order[j]] = [order[j], order[i]];
  }
  return order;
}

function toInputSize(split: LoadedSplit, inputSize: number): tf.Tensor4D {
  if (split.size === inputSize) {
    return split.xs.clone();
  }
  return tf.image.resizeBilinear(split.xs, [inputSize, inputSize]);
}

function assertFinite(values: number[][], what: string): void {
  for (const row of values) {
    for (const v of row) {
      if (!Number.isFinite(v)) {
        throw new TrainingDivergedError(`non-finite ${what}`);
      }
    }
  }
}

/**
 * Train one branch on the folder tree under `datasetDir` and export its
 * softmax predictions for every split.
 *
 * Writes `<outDir>/<split>/<branch>.csv` plus a shared `labels.csv`, and
 * adds the branch to each split's `manifest.json`. Throws
 * DatasetMissingError if a split is absent and TrainingDivergedError if the
 * loss or predictions go non-finite. A model that fails to beat chance
 * accuracy on the validation split is still exported but comes back
 * flagged.
 */
export async function trainAndExport(
  spec: BranchSpec,
  datasetDir: string,
  outDir: string,
  options: TrainOptions = {},
): Promise<ExportResult> {
  validateSpec(spec);
  const seed = options.seed ?? 0;
  const splits = {} as Record<Split, LoadedSplit>;
  for (const split of SPLITS) {
    splits[split] = loadSplit(datasetDir, split);
  }

  const model = buildBranch(spec.name, spec.inputSize, NUM_CLASSES);
  model.compile({
    optimizer: makeOptimizer(spec.optimizer, spec.learningRate),
    loss: 'categoricalCrossentropy',
    metrics: ['accuracy'],
  });

  const disposable: tf.Tensor[] = [];
  try {
    const order = shuffledIndices(splits.train.labels.length, seed);
    const trainXs = toInputSize(splits.train, spec.inputSize);
    const orderTensor = tf.tensor1d(order, 'int32');
    const shuffledXs = tf.gather(trainXs, orderTensor);
    const shuffledLabels = Int32Array.from(order, (i) => splits.train.labels[i]);
    const trainYs = tf.oneHot(tf.tensor1d(shuffledLabels, 'int32'), NUM_CLASSES);
    const valXs = toInputSize(splits.val, spec.inputSize);
    const valYs = tf.oneHot(tf.tensor1d(splits.val.labels, 'int32'), NUM_CLASSES);
    disposable.push(trainXs, orderTensor, shuffledXs, trainYs, valXs, valYs);

    const history = await model.fit(shuffledXs, trainYs, {
      epochs: spec.epochs,
      batchSize: spec.batchSize,
      validationData: [valXs, valYs],
      shuffle: false,
      verbose: 0,
    });
    for (const loss of history.history.loss as number[]) {
      if (!Number.isFinite(loss)) {
        throw new TrainingDivergedError(`${spec.name}: training loss went non-finite (${loss})`);
      }
    }

    const manifests = {} as Record<Split, string>;
    let valAccuracy = 0;
    const classNames = Array.from({ length: NUM_CLASSES }, (_, c) => `class_${c}`);
    for (const split of SPLITS) {
      const xs = toInputSize(splits[split], spec.inputSize);
      const probs = model.predict(xs, { batchSize: 64 }) as tf.Tensor2D;
      const rows = (await probs.array()) as number[][];
      xs.dispose();
      probs.dispose();
      assertFinite(rows, `predictions on ${split} split`);

      if (split === 'val') {
        let correct = 0;
        rows.forEach((row, i) => {
          if (row.indexOf(Math.max(...row)) === splits.val.labels[i]) {
            correct += 1;
          }
        });
        valAccuracy = correct / rows.length;
      }

      const splitDir = path.join(outDir, split);
      fs.mkdirSync(splitDir, { recursive: true });
      const csvName = `${spec.name}.csv`;
      writePredictionCsv(path.join(splitDir, csvName), rows);
      writeLabelCsv(path.join(splitDir, 'labels.csv'), splits[split].labels);
      manifests[split] = updateManifest(splitDir, { id: spec.name, path: csvName }, 'labels.csv', classNames);
    }

    const flagged = valAccuracy <= 0.1;
    if (flagged) {
      console.warn(`${spec.name}: validation accuracy ${valAccuracy.toFixed(3)} did not beat chance; export flagged`);
    }
    return { branch: spec.name, valAccuracy, flagged, manifests };
  } finally {
    disposable.forEach((t) => t.dispose());
    for (const split of SPLITS) {
      splits[split].xs.dispose();
    }
    model.dispose();
  }
}
