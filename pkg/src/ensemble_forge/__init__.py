"""Classifier fusion via weight-optimized soft voting.

Combines the per-class probability outputs of several classifiers into a
single prediction by a weighted average, with member weights tuned by a
seeded real-coded genetic algorithm minimizing mean squared error against
one-hot truth labels.
"""

from .core import (
    EnsembleInput,
    LabelVector,
    PredictionMatrix,
    validate_labels,
    validate_prediction_matrix,
)
from .errors import (
    ConfigError,
    EnsembleForgeError,
    InputError,
    ValidationError,
)
from .fusion import (
    EvaluationReport,
    FusedPrediction,
    WeightVector,
    evaluate,
    evaluate_weights,
    fuse,
    mse,
    validate_weights,
)
from .ga import (
    GAConfig,
    GAResult,
    GridResult,
    ga_optimize,
    grid_oracle,
    grid_points,
    seed_population,
)
from .io import load_ensemble, write_ensemble
from .synth import SynthSpec, generate, specialists_skill, specialists_spec

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "EnsembleForgeError",
    "EnsembleInput",
    "EvaluationReport",
    "FusedPrediction",
    "GAConfig",
    "GAResult",
    "GridResult",
    "InputError",
    "LabelVector",
    "PredictionMatrix",
    "SynthSpec",
    "ValidationError",
    "WeightVector",
    "evaluate",
    "evaluate_weights",
    "fuse",
    "ga_optimize",
    "generate",
    "grid_oracle",
    "grid_points",
    "load_ensemble",
    "mse",
    "seed_population",
    "specialists_skill",
    "specialists_spec",
    "validate_labels",
    "validate_prediction_matrix",
    "validate_weights",
    "write_ensemble",
    "__version__",
]
