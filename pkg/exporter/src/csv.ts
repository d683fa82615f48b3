import * as fs from 'node:fs';
import * as path from 'node:path';

// Writers for the ensemble-forge on-disk interchange formats: one
// probability CSV per classifier, a label CSV, and a manifest that ties
// them together with paths relative to its own directory.

/** Write a prediction matrix as CSV with a class_0..class_{C-1} header. */
export function writePredictionCsv(filePath: string, rows: number[][]): void {
  if (rows.length === 0) {
    throw new Error('refusing to write an empty prediction CSV');
  }
  const numClasses = rows[0].length;
  const header = Array.from({ length: numClasses }, (_, c) => `class_${c}`).join(',');
  const lines = [header];
  for (const row of rows) {
    if (row.length !== numClasses) {
      throw new Error(`ragged prediction row: ${row.length} values, expected ${numClasses}`);
    }
    lines.push(row.map((v) => String(v)).join(','));
  }
  fs.writeFileSync(filePath, lines.join('\n') + '\n');
}

/** Write integer labels as a single-column CSV with a `label` header. */
export function writeLabelCsv(filePath: string, labels: ArrayLike<number>): void {
  const lines = ['label'];
  for (let i = 0; i < labels.length; i++) {
    lines.push(String(labels[i]));
  }
  fs.writeFileSync(filePath, lines.join('\n') + '\n');
}

interface ManifestEntry {
  id: string;
  path: string;
}

interface Manifest {
  classifiers: ManifestEntry[];
  labels: string;
  class_names?: string[];
}

/**
 * Add (or replace) one classifier entry in `<dir>/manifest.json`, creating
 * the manifest on first use. Returns the manifest path.
 */
export function updateManifest(
  dir: string,
  entry: ManifestEntry,
  labelsFile: string,
  classNames?: string[],
): string {
  const manifestPath = path.join(dir, 'manifest.json');
  let manifest: Manifest;
  if (fs.existsSync(manifestPath)) {
    manifest = JSON.parse(fs.readFileSync(manifestPath, 'utf8')) as Manifest;
  } else {
    manifest = { classifiers: [], labels: labelsFile };
    if (classNames) {
      manifest.class_names = classNames;
    }
  }
  const existing = manifest.classifiers.findIndex((c) => c.id === entry.id);
  if (existing >= 0) {
    manifest.classifiers[existing] = entry;
  } else {
    manifest.classifiers.push(entry);
  }
  fs.writeFileSync(manifestPath, JSON.stringify(manifest, null, 2) + '\n');
  return manifestPath;
}
