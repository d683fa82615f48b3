"""Synthetic ensembles with controllable per-class member skill.

Sampling family (documented contract)
-------------------------------------
Labels are uniform over the classes. For member ``i`` on sample ``s`` with
true class ``c``, the member's row is a spiked random point on the simplex:

* with probability ``skill[i, c]`` the spike lands on the true class,
  otherwise on a uniformly chosen wrong class;
* the row is ``Gamma(1)`` jitter per class plus a ``Gamma(concentration)``
  spike on the peak class, normalized to sum 1 — i.e. a
  ``Dirichlet(1 + concentration * e_peak)`` draw.

Draw order is fixed and size-stable: labels, correctness coins (S×N), wrong
class picks (S×N), jitter (N×S×C), spikes (N×S). Because every random block
is drawn before any threshold is applied, raising one member's skill with the
seed held fixed only ever flips that member's peaks from a wrong class to the
true class — per-sample correctness is monotone in skill.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EnsembleInput, LabelVector, _freeze, validate_prediction_matrix
from .errors import ValidationError


@dataclass(frozen=True)
class SynthSpec:
    n_members: int
    n_samples: int
    n_classes: int
    skill: np.ndarray  # (n_members, n_classes), entries in [0, 1]
    concentration: float = 8.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.n_members < 1:
            raise ValidationError(f"n_members must be >= 1, got {self.n_members}")
        if self.n_samples < 1:
            raise ValidationError(f"n_samples must be >= 1, got {self.n_samples}")
        if self.n_classes < 2:
            raise ValidationError(f"n_classes must be >= 2, got {self.n_classes}")
        skill = np.asarray(self.skill, dtype=np.float64)
        if skill.shape != (self.n_members, self.n_classes):
            raise ValidationError(
                f"skill must have shape ({self.n_members}, {self.n_classes}), "
                f"got {skill.shape}"
            )
        if not np.all(np.isfinite(skill)):
            raise ValidationError("skill contains non-finite values")
        if np.any(skill < 0.0) or np.any(skill > 1.0):
            raise ValidationError("skill entries must lie in [0, 1]")
        if self.concentration <= 0.0:
            raise ValidationError(f"concentration must be > 0, got {self.concentration}")
        object.__setattr__(self, "skill", _freeze(skill.copy()))


def generate(spec: SynthSpec) -> EnsembleInput:
    """Generate a validated ensemble; deterministic for a given spec."""
    rng = np.random.default_rng(spec.rng_seed)
    n, s, c = spec.n_members, spec.n_samples, spec.n_classes

    labels = rng.integers(0, c, size=s)
    coins = rng.random((s, n))
    # Uniform pick over the c-1 wrong classes, shifted around the true one.
    wrong_raw = rng.integers(0, c - 1, size=(s, n))
    wrong = wrong_raw + (wrong_raw >= labels[:, None])
    jitter = rng.standard_gamma(1.0, size=(n, s, c))
    spikes = rng.standard_gamma(spec.concentration, size=(n, s))

    correct = coins < spec.skill[np.arange(n)[None, :], labels[:, None]]  # (s, n)
    peaks = np.where(correct, labels[:, None], wrong)  # (s, n)

    members = []
    for i in range(n):
        raw = jitter[i].copy()
        raw[np.arange(s), peaks[:, i]] += spikes[i]
        raw /= raw.sum(axis=1, keepdims=True)
        members.append(validate_prediction_matrix(raw, f"synth_{i}"))

    return EnsembleInput(
        members=tuple(members),
        labels=LabelVector(labels=_freeze(labels.astype(np.int64))),
    )


def specialists_skill(
    n_members: int,
    n_classes: int,
    on_block: float = 0.95,
    off_block: float = 0.30,
) -> np.ndarray:
    """Skill matrix where classes are dealt round-robin to members.

    Each class has exactly one strong member when ``n_classes`` is a multiple
    of ``n_members``; nobody is good everywhere.
    """
    skill = np.full((n_members, n_classes), off_block, dtype=np.float64)
    for cls in range(n_classes):
        skill[cls % n_members, cls] = on_block
    return skill


def specialists_spec(
    n_members: int = 3,
    n_classes: int = 6,
    n_samples: int = 600,
    on_block: float = 0.95,
    off_block: float = 0.30,
    concentration: float = 8.0,
    rng_seed: int = 7,
) -> SynthSpec:
    """Complementary-specialists instance: the regime where weighted fusion
    visibly beats every individual member."""
    skill = specialists_skill(n_members, n_classes, on_block, off_block)
    return SynthSpec(
        n_members=n_members,
        n_samples=n_samples,
        n_classes=n_classes,
        skill=skill,
        concentration=concentration,
        rng_seed=rng_seed,
    )
