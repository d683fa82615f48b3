import * as fs from 'node:fs';
import * as path from 'node:path';
import * as tf from '@tensorflow/tfjs';
import { PNG } from 'pngjs';

export const NUM_CLASSES = 10;
export const SPLITS = ['train', 'val', 'test'] as const;
export type Split = (typeof SPLITS)[number];

/** Raised when a dataset directory or split is absent or empty. */
export class DatasetMissingError extends Error {}

/** Deterministic 32-bit PRNG (mulberry32), returns floats in [0, 1). */
function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

// One base colour per class plus a class-dependent stripe direction; the
// classes stay easy to tell apart so toy models clear chance accuracy in a
// couple of epochs.
const PALETTE: Array<[number, number, number]> = [
  [220, 60, 60],
  [60, 200, 70],
  [70, 80, 230],
  [230, 210, 50],
  [200, 60, 200],
  [50, 210, 210],
  [240, 140, 40],
  [130, 90, 220],
  [120, 200, 120],
  [160, 160, 160],
];

function renderImage(cls: number, size: number, rand: () => number): Buffer {
  const png = new PNG({ width: size, height: size });
  const [r, g, b] = PALETTE[cls];
  const fx = (cls % 3) + 1;
  const fy = (Math.floor(cls / 3) % 3) + 1;
  const phase = Math.floor(rand() * 8);
  for (let y = 0; y < size; y++) {
    for (let x = 0; x < size; x++) {
      const stripe = ((Math.floor((x * fx + y * fy) / 4) + phase) % 2) * 60 - 30;
      const noise = () => (rand() - 0.5) * 48;
      const idx = (y * size + x) * 4;
      png.data[idx] = Math.min(255, Math.max(0, Math.round(r + stripe + noise())));
      png.data[idx + 1] = Math.min(255, Math.max(0, Math.round(g + stripe + noise())));
      png.data[idx + 2] = Math.min(255, Math.max(0, Math.round(b + stripe + noise())));
      png.data[idx + 3] = 255;
    }
  }
  return PNG.sync.write(png);
}

export interface GenerateOptions {
  /** Images per class for each split. */
  perClass: Record<Split, number>;
  seed: number;
  /** Square image size in pixels (default 32). */
  size?: number;
}

/**
 * Write a deterministic 10-class toy image set as
 * `<outDir>/<split>/class_<k>/img_<i>.png`. Same options produce
 * byte-identical files.
 */
export function generateDataset(outDir: string, options: GenerateOptions): void {
  const size = options.size ?? 32;
  const rand = mulberry32(options.seed);
  for (const split of SPLITS) {
    for (let cls = 0; cls < NUM_CLASSES; cls++) {
      const dir = path.join(outDir, split, `class_${cls}`);
      fs.mkdirSync(dir, { recursive: true });
      for (let i = 0; i < options.perClass[split]; i++) {
        const name = `img_${String(i).padStart(3, '0')}.png`;
        fs.writeFileSync(path.join(dir, name), renderImage(cls, size, rand));
      }
    }
  }
}

export interface LoadedSplit {
  /** Float32 tensor of shape [N, size, size, 3], scaled to [0, 1]. */
  xs: tf.Tensor4D;
  /** Integer class label per sample, aligned with xs rows. */
  labels: Int32Array;
  size: number;
}

/**
 * Load one split from a 10-class image folder tree into tensors. Samples
 * are ordered by class directory, then by file name, so the row order is
 * reproducible. Throws DatasetMissingError when the split directory or any
 * class directory is absent or holds no images.
 */
export function loadSplit(dataDir: string, split: Split): LoadedSplit {
  const splitDir = path.join(dataDir, split);
  if (!fs.existsSync(splitDir)) {
    throw new DatasetMissingError(`missing dataset split directory: ${splitDir}`);
  }
  const images: Float32Array[] = [];
  const labels: number[] = [];
  let size = 0;
  for (let cls = 0; cls < NUM_CLASSES; cls++) {
    const classDir = path.join(splitDir, `class_${cls}`);
    if (!fs.existsSync(classDir)) {
      throw new DatasetMissingError(`missing class directory: ${classDir}`);
    }
    const files = fs.readdirSync(classDir).filter((f) => f.endsWith('.png')).sort();
    if (files.length === 0) {
      throw new DatasetMissingError(`no images in ${classDir}`);
    }
    for (const file of files) {
      const png = PNG.sync.read(fs.readFileSync(path.join(classDir, file)));
      if (size === 0) {
        size = png.width;
      }
      if (png.width !== size || png.height !== size) {
        throw new DatasetMissingError(
          `inconsistent image size in ${classDir}/${file}: ` +
          `${png.width}x${png.height}, expected ${size}x${size}`,
        );
      }
      const pixels = new Float32Array(size * size * 3);
      for (let p = 0; p < size * size; p++) {
        pixels[p * 3] = png.data[p * 4] / 255;
        pixels[p * 3 + 1] = png.data[p * 4 + 1] / 255;
        pixels[p * 3 + 2] = png.data[p * 4 + 2] / 255;
      }
      images.push(pixels);
      labels.push(cls);
    }
  }
  const flat = new Float32Array(images.length * size * size * 3);
  images.forEach((img, i) => flat.set(img, i * size * size * 3));
  const xs = tf.tensor4d(flat, [images.length, size, size, 3]);
  return { xs, labels: Int32Array.from(labels), size };
}
