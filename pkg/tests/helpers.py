"""Shared builders for the test suite."""
import numpy as np

from ensemble_forge.core import EnsembleInput, validate_labels, validate_prediction_matrix


def make_ensemble(n_members, n_samples, n_classes, seed=0, class_names=None):
    """Random row-stochastic ensemble with labels, fully validated."""
    rng = np.random.default_rng(seed)
    members = []
    for i in range(n_members):
        raw = rng.random((n_samples, n_classes))
        raw /= raw.sum(axis=1, keepdims=True)
        members.append(validate_prediction_matrix(raw, f"m{i}"))
    labels = validate_labels(rng.integers(0, n_classes, n_samples), n_classes, class_names)
    return EnsembleInput(members=tuple(members), labels=labels)
