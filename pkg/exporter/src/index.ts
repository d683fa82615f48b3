export {
  BRANCH_NAMES,
  BranchName,
  BranchSpec,
  buildBranch,
  defaultSpec,
  isBranchName,
  makeOptimizer,
  validateSpec,
} from './branches.js';
export {
  DatasetMissingError,
  GenerateOptions,
  LoadedSplit,
  NUM_CLASSES,
  SPLITS,
  Split,
  generateDataset,
  loadSplit,
} from './dataset.js';
export { updateManifest, writeLabelCsv, writePredictionCsv } from './csv.js';
export { ExportResult, TrainOptions, TrainingDivergedError, trainAndExport } from './export.js';
