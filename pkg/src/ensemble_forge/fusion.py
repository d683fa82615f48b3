"""Weighted soft voting over an ensemble of probabilistic classifiers.

The fused matrix is the weight-normalized convex combination

    fused = sum_i(w_i * P_i) / sum_i(w_i)

followed by argmax decisions (ties break toward the lowest class index).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .core import EnsembleInput, LabelVector, _freeze
from .errors import (
    DegenerateWeightsError,
    LengthMismatchError,
    ShapeMismatchError,
    ValidationError,
)


@dataclass(frozen=True)
class WeightVector:
    """One weight per ensemble member; genes live in [0, 1] and must not all be zero."""

    genes: np.ndarray

    @property
    def n_members(self) -> int:
        return self.genes.shape[0]

    @cached_property
    def normalized(self) -> np.ndarray:
        """Genes scaled to sum to 1. Fusion output is invariant under this scaling."""
        return _freeze(self.genes / self.genes.sum())


def validate_weights(raw) -> WeightVector:
    genes = np.asarray(raw, dtype=np.float64)
    if genes.ndim != 1 or genes.shape[0] == 0:
        raise ValidationError(f"weights must be a non-empty 1-D vector, got shape {genes.shape}")
    if not np.all(np.isfinite(genes)):
        raise ValidationError("weights contain non-finite values")
    if np.any(genes < 0.0) or np.any(genes > 1.0):
        raise ValidationError("weights must lie in [0, 1]")
    if genes.sum() <= 0.0:
        raise DegenerateWeightsError("weights sum to zero; at least one must be positive")
    return WeightVector(genes=_freeze(genes.copy()))


@dataclass(frozen=True)
class FusedPrediction:
    probs: np.ndarray      # (S, C), rows sum to 1 up to float error
    decisions: np.ndarray  # (S,) int argmax per row


@dataclass(frozen=True)
class EvaluationReport:
    accuracy: float
    mse: float
    per_class_recall: np.ndarray  # (C,)
    confusion: np.ndarray         # (C, C); rows = true class, cols = predicted
    support: np.ndarray           # (C,) true-label counts
    zero_support_classes: tuple[int, ...]  # classes whose recall=0.0 is vacuous

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "mse": self.mse,
            "per_class_recall": [float(r) for r in self.per_class_recall],
            "confusion": [[int(v) for v in row] for row in self.confusion],
            "support": [int(v) for v in self.support],
            "zero_support_classes": list(self.zero_support_classes),
        }


def fuse(ensemble: EnsembleInput, weights: WeightVector) -> FusedPrediction:
    """Apply weighted soft voting and take per-sample argmax decisions."""
    if weights.n_members != ensemble.n_members:
        raise ShapeMismatchError(
            f"got {weights.n_members} weights for {ensemble.n_members} members"
        )
    w = weights.genes
    total = w.sum()
    # (N,S,C) * (N,1,1) summed over members, then one division by the scalar
    # weight total. Keeping the arithmetic in this exact shape matters: a
    # unit-vector weight reproduces that member's matrix bit-for-bit, because
    # the zero terms are exact and the final division is by 1.0.
    combined = (ensemble.stacked * w[:, None, None]).sum(axis=0) / total
    decisions = np.argmax(combined, axis=1)
    return FusedPrediction(probs=_freeze(combined), decisions=_freeze(decisions))


def mse(probs: np.ndarray, targets: np.ndarray) -> float:
    """Mean squared error between a probability matrix and one-hot targets.

    The mean runs over all S*C cells, not per row.
    """
    if probs.shape != targets.shape:
        raise ShapeMismatchError(
            f"probs shape {probs.shape} != targets shape {targets.shape}"
        )
    diff = probs - targets
    return float(np.mean(diff * diff))


def evaluate(fused: FusedPrediction, labels: LabelVector) -> EvaluationReport:
    """Score fused predictions against truth labels."""
    n_samples, n_classes = fused.probs.shape
    truth = labels.labels
    if truth.shape[0] != n_samples:
        raise LengthMismatchError(
            f"{truth.shape[0]} labels for {n_samples} fused samples"
        )
    decisions = fused.decisions

    accuracy = float(np.mean(decisions == truth))
    err = mse(fused.probs, labels.one_hot(n_classes))

    confusion = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(confusion, (truth, decisions), 1)
    support = confusion.sum(axis=1)

    recall = np.zeros(n_classes, dtype=np.float64)
    present = support > 0
    recall[present] = np.diag(confusion)[present] / support[present]
    zero_support = tuple(int(c) for c in np.flatnonzero(~present))

    return EvaluationReport(
        accuracy=accuracy,
        mse=err,
        per_class_recall=_freeze(recall),
        confusion=_freeze(confusion),
        support=_freeze(support),
        zero_support_classes=zero_support,
    )


def evaluate_weights(ensemble: EnsembleInput, weights: WeightVector) -> EvaluationReport:
    """Convenience wrapper: fuse then evaluate in one call."""
    return evaluate(fuse(ensemble, weights), ensemble.labels)
