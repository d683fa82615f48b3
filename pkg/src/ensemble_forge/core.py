"""Domain types for ensemble inputs: prediction matrices, labels, and their validation.

All types are immutable after construction (backing arrays are marked
read-only) and safe to share across concurrent readers.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .errors import (
    EmptyMatrixError,
    LabelOutOfRangeError,
    LengthMismatchError,
    NegativeProbabilityError,
    NonFiniteValueError,
    NonRectangularError,
    RowSumOutOfToleranceError,
    ShapeMismatchError,
    ValidationError,
)

# Row sums farther than this from 1 are rejected outright; anything closer is
# silently renormalized. Softmax outputs serialized at low precision commonly
# drift at the 4th decimal; larger drift usually means a data bug.
ROW_SUM_REJECT_TOL = 1e-3


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class PredictionMatrix:
    """One classifier's softmax outputs: S samples x C classes.

    Every entry lies in [0, 1] and every row sums to 1 (within float
    round-off after renormalization). Construct via
    :func:`validate_prediction_matrix` rather than directly.
    """

    classifier_id: str
    probs: np.ndarray  # (S, C) float64, read-only

    @property
    def num_samples(self) -> int:
        return self.probs.shape[0]

    @property
    def num_classes(self) -> int:
        return self.probs.shape[1]


@dataclass(frozen=True)
class LabelVector:
    """Ground-truth class index per sample, with optional class names."""

    labels: np.ndarray  # (S,) int64, read-only
    class_names: Optional[tuple[str, ...]] = None

    def __len__(self) -> int:
        return self.labels.shape[0]

    def one_hot(self, num_classes: int) -> np.ndarray:
        """Length-C one-hot target row per sample (the MSE target encoding)."""
        out = np.zeros((len(self), num_classes), dtype=np.float64)
        out[np.arange(len(self)), self.labels] = 1.0
        return out


def validate_labels(
    raw: Sequence[int] | np.ndarray,
    num_classes: int,
    class_names: Optional[Sequence[str]] = None,
) -> LabelVector:
    """Validate class indices against a class count and wrap them."""
    labels = np.asarray(raw)
    if labels.ndim != 1:
        raise ValidationError(f"labels must be one-dimensional, got shape {labels.shape}")
    if labels.size and not np.issubdtype(labels.dtype, np.integer):
        as_int = labels.astype(np.int64)
        if not np.array_equal(as_int, labels):
            raise ValidationError("labels must be integers")
        labels = as_int
    labels = labels.astype(np.int64)
    if labels.size:
        bad = (labels < 0) | (labels >= num_classes)
        if bad.any():
            idx = int(np.argmax(bad))
            raise LabelOutOfRangeError(
                f"label {labels[idx]} at row {idx} outside [0, {num_classes})"
            )
    names: Optional[tuple[str, ...]] = None
    if class_names is not None:
        names = tuple(str(n) for n in class_names)
        if len(names) != num_classes:
            raise ValidationError(
                f"expected {num_classes} class names, got {len(names)}"
            )
    return LabelVector(labels=_freeze(labels), class_names=names)


def validate_prediction_matrix(raw, classifier_id: str) -> PredictionMatrix:
    """Validate an S x C matrix of probabilities and wrap it.

    Negative entries are errors, never clamped. Rows whose sum deviates from
    1 by at most ``ROW_SUM_REJECT_TOL`` are renormalized by dividing by the
    row sum, so accepted matrices are row-stochastic to float precision;
    larger deviations are rejected.
    """
    try:
        arr = np.asarray(raw)
    except ValueError:
        raise NonRectangularError(f"{classifier_id}: rows have unequal lengths") from None
    if arr.dtype == object:
        raise NonRectangularError(f"{classifier_id}: rows have unequal lengths")
    if arr.ndim != 2:
        raise NonRectangularError(
            f"{classifier_id}: expected a 2-D matrix, got shape {arr.shape}"
        )
    arr = arr.astype(np.float64)
    n_samples, n_classes = arr.shape
    if n_samples == 0 or n_classes < 2:
        raise EmptyMatrixError(
            f"{classifier_id}: need at least 1 sample and 2 classes, got {arr.shape}"
        )
    if not np.isfinite(arr).all():
        raise NonFiniteValueError(f"{classifier_id}: matrix contains NaN or infinity")
    if (arr < 0).any():
        s, c = np.argwhere(arr < 0)[0]
        raise NegativeProbabilityError(
            f"{classifier_id}: negative probability {arr[s, c]} at row {s}, column {c}"
        )
    sums = arr.sum(axis=1)
    deviation = np.abs(sums - 1.0)
    if (deviation > ROW_SUM_REJECT_TOL).any():
        s = int(np.argmax(deviation > ROW_SUM_REJECT_TOL))
        raise RowSumOutOfToleranceError(
            f"{classifier_id}: row {s} sums to {sums[s]}, "
            f"deviation exceeds {ROW_SUM_REJECT_TOL}"
        )
    probs = arr / sums[:, None]
    return PredictionMatrix(classifier_id=classifier_id, probs=_freeze(probs))


@dataclass(frozen=True)
class EnsembleInput:
    """An ordered set of member prediction matrices plus shared ground truth."""

    members: tuple[PredictionMatrix, ...]
    labels: LabelVector

    def __post_init__(self):
        if not self.members:
            raise ValidationError("ensemble needs at least one member")
        ids = [m.classifier_id for m in self.members]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValidationError(f"duplicate classifier ids: {dupes}")
        first = self.members[0]
        for m in self.members[1:]:
            if m.probs.shape != first.probs.shape:
                raise ShapeMismatchError(
                    f"member '{m.classifier_id}' has shape {m.probs.shape}, "
                    f"member '{first.classifier_id}' has {first.probs.shape}"
                )
        if len(self.labels) != first.num_samples:
            raise LengthMismatchError(
                f"{len(self.labels)} labels for {first.num_samples} samples"
            )
        if (self.labels.labels >= first.num_classes).any():
            bad = int(self.labels.labels.max())
            raise LabelOutOfRangeError(
                f"label {bad} outside [0, {first.num_classes})"
            )
        if (
            self.labels.class_names is not None
            and len(self.labels.class_names) != first.num_classes
        ):
            raise ValidationError(
                f"{len(self.labels.class_names)} class names for "
                f"{first.num_classes} classes"
            )

    @property
    def n_members(self) -> int:
        return len(self.members)

    @property
    def n_samples(self) -> int:
        return self.members[0].num_samples

    @property
    def n_classes(self) -> int:
        return self.members[0].num_classes

    @property
    def classifier_ids(self) -> tuple[str, ...]:
        return tuple(m.classifier_id for m in self.members)

    @cached_property
    def stacked(self) -> np.ndarray:
        """Member matrices as one read-only (N, S, C) array."""
        return _freeze(np.stack([m.probs for m in self.members]))

    @cached_property
    def targets(self) -> np.ndarray:
        """One-hot targets as a read-only (S, C) array."""
        return _freeze(self.labels.one_hot(self.n_classes))
