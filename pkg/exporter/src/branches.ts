import * as tf from '@tensorflow/tfjs';

/** The six ensemble branch architectures this exporter knows how to build. */
export const BRANCH_NAMES = [
  'alexnet',
  'vgg16',
  'efficientnet_b0',
  'vanilla_cnn',
  'densenet_mod',
  'inception_bilstm',
] as const;

export type BranchName = (typeof BRANCH_NAMES)[number];

/** Training configuration for one branch. */
export interface BranchSpec {
  name: BranchName;
  epochs: number;
  batchSize: number;
  /** One of 'rmsprop' | 'adam' | 'sgd'. */
  optimizer: string;
  learningRate: number;
  /** Square input resolution in pixels. Reference default is 224; toy runs use 32. */
  inputSize: number;
}

/**
 * Reference defaults per branch. AlexNet, VGG-16, EfficientNet-B0 and the
 * modified DenseNet carry published training settings; the vanilla CNN and
 * the Inception+BiLSTM branch have no published settings, so they get tool
 * defaults (documented in the README).
 */
const DEFAULTS: Record<BranchName, Omit<BranchSpec, 'name'>> = {
  alexnet: { epochs: 50, batchSize: 32, optimizer: 'rmsprop', learningRate: 1e-3, inputSize: 224 },
  vgg16: { epochs: 50, batchSize: 64, optimizer: 'rmsprop', learningRate: 1e-4, inputSize: 224 },
  efficientnet_b0: { epochs: 30, batchSize: 64, optimizer: 'rmsprop', learningRate: 1e-3, inputSize: 224 },
  vanilla_cnn: { epochs: 20, batchSize: 32, optimizer: 'rmsprop', learningRate: 1e-3, inputSize: 224 },
  densenet_mod: { epochs: 30, batchSize: 64, optimizer: 'rmsprop', learningRate: 1e-3, inputSize: 224 },
  inception_bilstm: { epochs: 20, batchSize: 32, optimizer: 'rmsprop', learningRate: 1e-3, inputSize: 224 },
};

export function isBranchName(name: string): name is BranchName {
  return (BRANCH_NAMES as readonly string[]).includes(name);
}

/** Build the default spec for a branch, with optional field overrides. */
export function defaultSpec(name: string, overrides: Partial<Omit<BranchSpec, 'name'>> = {}): BranchSpec {
  if (!isBranchName(name)) {
    throw new Error(`unknown branch '${name}' (expected one of: ${BRANCH_NAMES.join(', ')})`);
  }
  const spec: BranchSpec = { name, ...DEFAULTS[name], ...overrides };
  validateSpec(spec);
  return spec;
}

export function validateSpec(spec: BranchSpec): void {
  if (!isBranchName(spec.name)) {
    throw new Error(`unknown branch '${spec.name}'`);
  }
  if (!Number.isInteger(spec.epochs) || spec.epochs < 1) {
    throw new Error(`epochs must be an integer >= 1, got ${spec.epochs}`);
  }
  if (!Number.isInteger(spec.batchSize) || spec.batchSize < 1) {
    throw new Error(`batchSize must be an integer >= 1, got ${spec.batchSize}`);
  }
  if (!(spec.learningRate > 0)) {
    throw new Error(`learningRate must be positive, got ${spec.learningRate}`);
  }
  if (!Number.isInteger(spec.inputSize) || spec.inputSize < 32) {
    throw new Error(`inputSize must be an integer >= 32 (pooling depth), got ${spec.inputSize}`);
  }
}

function convRelu(filters: number, kernel: number, strides = 1) {
  return tf.layers.conv2d({ filters, kernelSize: kernel, strides, padding: 'same', activation: 'relu' });
}

/**
 * Five-conv stack with interleaved max pooling, batch normalization before
 * every ReLU, and two fully connected layers ahead of the softmax.
 */
function buildAlexnet(inputSize: number, numClasses: number): tf.LayersModel {
  const model = tf.sequential();
  model.add(tf.layers.conv2d({
    inputShape: [inputSize, inputSize, 3],
    filters: 24, kernelSize: 5, strides: 2, padding: 'same',
  }));
  model.add(tf.layers.batchNormalization());
  model.add(tf.layers.reLU());
  model.add(tf.layers.maxPooling2d({ poolSize: 2 }));
  model.add(tf.layers.conv2d({ filters: 48, kernelSize: 3, padding: 'same' }));
  model.add(tf.layers.batchNormalization());
  model.add(tf.layers.reLU());
  model.add(tf.layers.maxPooling2d({ poolSize: 2 }));
  for (const filters of [64, 64, 48]) {
    model.add(tf.layers.conv2d({ filters, kernelSize: 3, padding: 'same' }));
    model.add(tf.layers.batchNormalization());
    model.add(tf.layers.reLU());
  }
  model.add(tf.layers.maxPooling2d({ poolSize: 2 }));
  model.add(tf.layers.flatten());
  model.add(tf.layers.dense({ units: 128, activation: 'relu' }));
  model.add(tf.layers.dense({ units: 64, activation: 'relu' }));
  model.add(tf.layers.dense({ units: numClasses, activation: 'softmax' }));
  return model;
}

/**
 * Thirteen 3x3 convolutions in five pooled blocks, followed by two fully
 * connected layers and the softmax — the classic deep-and-narrow stack,
 * at toy widths.
 */
function buildVgg16(inputSize: number, numClasses: number): tf.LayersModel {
  const model = tf.sequential();
  const blocks: Array<[number, number]> = [
    [2, 8],
    [2, 16],
    [3, 24],
    [3, 32],
    [3, 32],
  ];
  let first = true;
  for (const [count, filters] of blocks) {
    for (let i = 0; i < count; i++) {
      if (first) {
        model.add(tf.layers.conv2d({
          inputShape: [inputSize, inputSize, 3],
          filters, kernelSize: 3, padding: 'same', activation: 'relu',
        }));
        first = false;
      } else {
        model.add(convRelu(filters, 3));
      }
    }
    model.add(tf.layers.maxPooling2d({ poolSize: 2 }));
  }
  model.add(tf.layers.flatten());
  model.add(tf.layers.dense({ units: 64, activation: 'relu' }));
  model.add(tf.layers.dense({ units: 64, activation: 'relu' }));
  model.add(tf.layers.dense({ units: numClasses, activation: 'softmax' }));
  return model;
}

/**
 * Depthwise-separable stack in the B0 spirit: a strided stem convolution,
 * three separable-convolution stages with growing width, then global
 * average pooling into the classifier.
 */
function buildEfficientnetB0(inputSize: number, numClasses: number): tf.LayersModel {
  const model = tf.sequential();
  model.add(tf.layers.conv2d({
    inputShape: [inputSize, inputSize, 3],
    filters: 16, kernelSize: 3, strides: 2, padding: 'same', activation: 'relu',
  }));
  model.add(tf.layers.separableConv2d({ filters: 24, kernelSize: 3, padding: 'same', activation: 'relu' }));
  model.add(tf.layers.separableConv2d({ filters: 40, kernelSize: 3, strides: 2, padding: 'same', activation: 'relu' }));
  model.add(tf.layers.separableConv2d({ filters: 80, kernelSize: 3, padding: 'same', activation: 'relu' }));
  model.add(tf.layers.globalAveragePooling2d({}));
  model.add(tf.layers.dense({ units: 64, activation: 'relu' }));
  model.add(tf.layers.dense({ units: numClasses, activation: 'softmax' }));
  return model;
}

/**
 * Three convolution/pool stages at 60, 90 and 200 filters, then dense
 * layers of 512, 128 and numClasses units. These widths are load-bearing:
 * downstream checks assert them exactly.
 */
function buildVanillaCnn(inputSize: number, numClasses: number): tf.LayersModel {
  const model = tf.sequential();
  model.add(tf.layers.conv2d({
    inputShape: [inputSize, inputSize, 3],
    filters: 60, kernelSize: 3, padding: 'same', activation: 'relu',
  }));
  model.add(tf.layers.maxPooling2d({ poolSize: 2 }));
  model.add(convRelu(90, 3));
  model.add(tf.layers.maxPooling2d({ poolSize: 2 }));
  model.add(convRelu(200, 3));
  model.add(tf.layers.maxPooling2d({ poolSize: 2 }));
  model.add(tf.layers.flatten());
  model.add(tf.layers.dense({ units: 512, activation: 'relu' }));
  model.add(tf.layers.dense({ units: 128, activation: 'relu' }));
  model.add(tf.layers.dense({ units: numClasses, activation: 'softmax' }));
  return model;
}

function denseBlock(x: tf.SymbolicTensor, layers: number, growth: number): tf.SymbolicTensor {
  let out = x;
  for (let i = 0; i < layers; i++) {
    let y = tf.layers.batchNormalization().apply(out) as tf.SymbolicTensor;
    y = tf.layers.reLU().apply(y) as tf.SymbolicTensor;
    y = tf.layers.conv2d({ filters: growth, kernelSize: 3, padding: 'same' }).apply(y) as tf.SymbolicTensor;
    out = tf.layers.concatenate().apply([out, y]) as tf.SymbolicTensor;
  }
  return out;
}

/**
 * Densely connected blocks (each layer concatenated onto the running
 * feature map) with a transition between them, closed by the 512/128/out
 * classifier head.
 */
function buildDensenetMod(inputSize: number, numClasses: number): tf.LayersModel {
  const input = tf.input({ shape: [inputSize, inputSize, 3] });
  let x = tf.layers.conv2d({
    filters: 24, kernelSize: 3, strides: 2, padding: 'same', activation: 'relu',
  }).apply(input) as tf.SymbolicTensor;
  x = denseBlock(x, 3, 12);
  x = tf.layers.conv2d({ filters: 32, kernelSize: 1, activation: 'relu' }).apply(x) as tf.SymbolicTensor;
  x = tf.layers.averagePooling2d({ poolSize: 2 }).apply(x) as tf.SymbolicTensor;
  x = denseBlock(x, 3, 12);
  x = tf.layers.globalAveragePooling2d({}).apply(x) as tf.SymbolicTensor;
  x = tf.layers.dense({ units: 512, activation: 'relu' }).apply(x) as tf.SymbolicTensor;
  x = tf.layers.dense({ units: 128, activation: 'relu' }).apply(x) as tf.SymbolicTensor;
  const output = tf.layers.dense({ units: numClasses, activation: 'softmax' }).apply(x) as tf.SymbolicTensor;
  return tf.model({ inputs: input, outputs: output });
}

/**
 * A multi-kernel (1x1 / 3x3 / 5x5 / pooled 1x1) inception module over a
 * strided stem, then the final feature map is read row by row as a
 * sequence into a bidirectional LSTM. Each spatial row becomes one
 * timestep whose features are that row's columns x channels.
 */
function buildInceptionBilstm(inputSize: number, numClasses: number): tf.LayersModel {
  const input = tf.input({ shape: [inputSize, inputSize, 3] });
  let x = tf.layers.conv2d({
    filters: 16, kernelSize: 3, strides: 2, padding: 'same', activation: 'relu',
  }).apply(input) as tf.SymbolicTensor;
  x = tf.layers.maxPooling2d({ poolSize: 2 }).apply(x) as tf.SymbolicTensor;

  const branch1 = tf.layers.conv2d({ filters: 8, kernelSize: 1, padding: 'same', activation: 'relu' })
    .apply(x) as tf.SymbolicTensor;
  let branch3 = tf.layers.conv2d({ filters: 8, kernelSize: 1, padding: 'same', activation: 'relu' })
    .apply(x) as tf.SymbolicTensor;
  branch3 = tf.layers.conv2d({ filters: 16, kernelSize: 3, padding: 'same', activation: 'relu' })
    .apply(branch3) as tf.SymbolicTensor;
  let branch5 = tf.layers.conv2d({ filters: 4, kernelSize: 1, padding: 'same', activation: 'relu' })
    .apply(x) as tf.SymbolicTensor;
  branch5 = tf.layers.conv2d({ filters: 8, kernelSize: 5, padding: 'same', activation: 'relu' })
    .apply(branch5) as tf.SymbolicTensor;
  let branchPool = tf.layers.maxPooling2d({ poolSize: 3, strides: 1, padding: 'same' })
    .apply(x) as tf.SymbolicTensor;
  branchPool = tf.layers.conv2d({ filters: 8, kernelSize: 1, padding: 'same', activation: 'relu' })
    .apply(branchPool) as tf.SymbolicTensor;
  x = tf.layers.concatenate().apply([branch1, branch3, branch5, branchPool]) as tf.SymbolicTensor;

  const [rows, cols, channels] = x.shape.slice(1) as [number, number, number];
  x = tf.layers.reshape({ targetShape: [rows, cols * channels] }).apply(x) as tf.SymbolicTensor;
  x = tf.layers.bidirectional({
    layer: tf.layers.lstm({ units: 32 }) as tf.RNN,
  }).apply(x) as tf.SymbolicTensor;
  const output = tf.layers.dense({ units: numClasses, activation: 'softmax' }).apply(x) as tf.SymbolicTensor;
  return tf.model({ inputs: input, outputs: output });
}

/**
 * Construct an uncompiled model for the named branch.
 *
 * @param name one of BRANCH_NAMES
 * @param inputSize square input resolution in pixels (>= 32)
 * @param numClasses output width of the softmax layer
 */
export function buildBranch(name: BranchName, inputSize: number, numClasses = 10): tf.LayersModel {
  switch (name) {
    case 'alexnet': return buildAlexnet(inputSize, numClasses);
    case 'vgg16': return buildVgg16(inputSize, numClasses);
    case 'efficientnet_b0': return buildEfficientnetB0(inputSize, numClasses);
    case 'vanilla_cnn': return buildVanillaCnn(inputSize, numClasses);
    case 'densenet_mod': return buildDensenetMod(inputSize, numClasses);
    case 'inception_bilstm': return buildInceptionBilstm(inputSize, numClasses);
  }
}

/** Map an optimizer tag from a BranchSpec onto a concrete tf optimizer. */
export function makeOptimizer(tag: string, learningRate: number): tf.Optimizer {
  switch (tag) {
    case 'rmsprop': return tf.train.rmsprop(learningRate);
    case 'adam': return tf.train.adam(learningRate);
    case 'sgd': return tf.train.sgd(learningRate);
    default:
      throw new Error(`unknown optimizer '${tag}' (expected rmsprop, adam or sgd)`);
  }
}
