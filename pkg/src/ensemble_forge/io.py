"""File interchange: prediction CSVs, label CSVs, and the ensemble manifest.

Formats
-------
Prediction CSV   header ``class_0,...,class_{C-1}`` (or the manifest's class
                 names); one row of C probabilities per sample.
Label CSV        header ``label``; one integer per line.
Manifest JSON    ``{"classifiers": [{"id": ..., "path": ...}, ...],
                 "labels": <path>, "class_names": [...]}`` with
                 ``class_names`` optional. Relative paths resolve against
                 the manifest's own directory.

All writers emit ``\\n`` line endings and ``repr``-precision floats, so a
write/load round trip reproduces values to the last bit (modulo the loader's
row renormalization) and identical inputs always produce identical bytes.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .core import (
    EnsembleInput,
    LabelVector,
    PredictionMatrix,
    validate_labels,
    validate_prediction_matrix,
)
from .errors import InputError, ManifestParseError, NonRectangularError, ValidationError


def read_prediction_csv(path: str | Path, classifier_id: str) -> PredictionMatrix:
    """Load and validate one classifier's prediction CSV."""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"prediction file not found: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{path}: empty prediction file") from None
        width = len(header)
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != width:
                raise NonRectangularError(
                    f"{path}:{lineno}: expected {width} columns, got {len(row)}"
                )
            try:
                rows.append([float(v) for v in row])
            except ValueError as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from None
    return validate_prediction_matrix(rows, classifier_id)


def read_label_csv(path: str | Path) -> list[int]:
    """Load raw label integers; range checking happens against the ensemble."""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"label file not found: {path}")
    labels = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{path}: empty label file") from None
        if [h.strip() for h in header] != ["label"]:
            raise ValidationError(f"{path}: expected header 'label', got {header!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                labels.append(int(row[0]))
            except ValueError:
                raise ValidationError(
                    f"{path}:{lineno}: label {row[0]!r} is not an integer"
                ) from None
    return labels


def load_ensemble(manifest_path: str | Path) -> EnsembleInput:
    """Load a fully validated ensemble from a manifest JSON.

    Member order equals manifest order. Deterministic: the same files always
    produce identical in-memory values.
    """
    manifest_path = Path(manifest_path)
    if not manifest_path.is_file():
        raise InputError(f"manifest not found: {manifest_path}")
    try:
        spec = json.loads(manifest_path.read_text())
    except json.JSONDecodeError as exc:
        raise ManifestParseError(f"{manifest_path}: invalid JSON ({exc})") from None

    if not isinstance(spec, dict):
        raise ManifestParseError(f"{manifest_path}: top level must be an object")
    classifiers = spec.get("classifiers")
    if not isinstance(classifiers, list) or not classifiers:
        raise ManifestParseError(f"{manifest_path}: 'classifiers' must be a non-empty list")
    if "labels" not in spec:
        raise ManifestParseError(f"{manifest_path}: missing 'labels' entry")

    base = manifest_path.parent
    members = []
    for i, entry in enumerate(classifiers):
        if not isinstance(entry, dict) or "id" not in entry or "path" not in entry:
            raise ManifestParseError(
                f"{manifest_path}: classifier #{i} needs 'id' and 'path'"
            )
        members.append(read_prediction_csv(base / entry["path"], str(entry["id"])))

    raw_labels = read_label_csv(base / spec["labels"])
    class_names = spec.get("class_names")
    if class_names is not None and (
        not isinstance(class_names, list)
        or not all(isinstance(n, str) for n in class_names)
    ):
        raise ManifestParseError(f"{manifest_path}: 'class_names' must be a list of strings")

    num_classes = members[0].num_classes
    labels = validate_labels(raw_labels, num_classes, class_names)
    return EnsembleInput(members=tuple(members), labels=labels)


def _format_row(values) -> str:
    return ",".join(repr(float(v)) for v in values)


def write_prediction_csv(
    path: str | Path,
    probs: np.ndarray,
    class_names: Optional[Sequence[str]] = None,
) -> None:
    probs = np.asarray(probs)
    n_classes = probs.shape[1]
    if class_names is None:
        header = ",".join(f"class_{c}" for c in range(n_classes))
    else:
        header = ",".join(class_names)
    lines = [header]
    lines.extend(_format_row(row) for row in probs)
    Path(path).write_text("\n".join(lines) + "\n")


def write_label_csv(path: str | Path, labels) -> None:
    lines = ["label"]
    lines.extend(str(int(v)) for v in labels)
    Path(path).write_text("\n".join(lines) + "\n")


def write_ensemble(ensemble: EnsembleInput, out_dir: str | Path) -> Path:
    """Write an ensemble to ``out_dir`` in the interchange formats.

    Returns the manifest path. File names derive from classifier ids.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    names = ensemble.labels.class_names
    entries = []
    for member in ensemble.members:
        fname = f"{member.classifier_id}.csv"
        write_prediction_csv(out_dir / fname, member.probs, names)
        entries.append({"id": member.classifier_id, "path": fname})
    write_label_csv(out_dir / "labels.csv", ensemble.labels.labels)
    manifest = {"classifiers": entries, "labels": "labels.csv"}
    if names is not None:
        manifest["class_names"] = list(names)
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest_path
