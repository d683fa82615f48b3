"""Real-coded genetic algorithm over the member-weight simplex.

Chromosomes are raw weight vectors (genes in [0, 1]); fitness is the negated
mean squared error of the fused probabilities against one-hot truth, computed
through the exact same ``fuse`` + ``mse`` code path callers use. That shared
path is load-bearing: the seeded unit-vector and half-weight chromosomes make
the optimizer's final score exactly ≤ every individual member's and the
uniform average's, not just approximately.

``grid_oracle`` is an independent brute-force reference. It enumerates the
simplex lattice and scores points with its own arithmetic on purpose — it
must not share code with the optimizer it checks.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .core import EnsembleInput, _freeze
from .errors import BadStepError, ConfigError, TooManyMembersError
from .fusion import WeightVector, fuse, mse


@dataclass(frozen=True)
class GAConfig:
    population_size: int = 48
    generations: int = 30
    tournament_size: int = 3
    crossover_rate: float = 0.9
    mutation_rate_per_gene: float = 0.1
    mutation_sigma: float = 0.15
    elite_count: int = 2
    rng_seed: int = 42

    def __post_init__(self):
        if self.population_size < 2:
            raise ConfigError(f"population_size must be >= 2, got {self.population_size}")
        if self.generations < 1:
            raise ConfigError(f"generations must be >= 1, got {self.generations}")
        if not 1 <= self.tournament_size <= self.population_size:
            raise ConfigError(
                f"tournament_size must be in [1, population_size], got {self.tournament_size}"
            )
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ConfigError(f"crossover_rate must be in [0, 1], got {self.crossover_rate}")
        if not 0.0 <= self.mutation_rate_per_gene <= 1.0:
            raise ConfigError(
                f"mutation_rate_per_gene must be in [0, 1], got {self.mutation_rate_per_gene}"
            )
        if self.mutation_sigma <= 0.0:
            raise ConfigError(f"mutation_sigma must be > 0, got {self.mutation_sigma}")
        # At least one elite is required, not optional: elitism is what makes
        # the per-generation best-MSE history non-increasing.
        if not 1 <= self.elite_count < self.population_size:
            raise ConfigError(
                f"elite_count must be in [1, population_size), got {self.elite_count}"
            )


@dataclass(frozen=True)
class GAResult:
    best_weights: WeightVector
    best_mse: float
    history: tuple[tuple[float, float], ...]  # (best_mse, mean_mse) per round
    evaluations: int

    def __post_init__(self):
        bests = [h[0] for h in self.history]
        if any(b > a for a, b in zip(bests, bests[1:])):
            raise AssertionError("GA best-MSE history must be non-increasing")
        if self.history and self.best_mse != self.history[-1][0]:
            raise AssertionError("best_mse must equal the final history entry")

    def to_dict(self) -> dict:
        return {
            "best_weights": {
                "genes": [float(g) for g in self.best_weights.genes],
                "normalized": [float(w) for w in self.best_weights.normalized],
            },
            "best_mse": self.best_mse,
            "history": [{"best_mse": b, "mean_mse": m} for b, m in self.history],
            "evaluations": self.evaluations,
        }


def write_history_csv(path: str | Path, history) -> None:
    """Plot-friendly dump of the per-round history."""
    lines = ["generation,best_mse,mean_mse"]
    lines.extend(f"{g},{repr(b)},{repr(m)}" for g, (b, m) in enumerate(history))
    Path(path).write_text("\n".join(lines) + "\n")


def seed_population(
    config: GAConfig, n_members: int, rng: Optional[np.random.Generator] = None
) -> np.ndarray:
    """Initial chromosomes: unit vectors, then the all-0.5 point, then noise.

    Unit vector i scores exactly like member i alone; the 0.5 chromosome
    scores exactly like the uniform average (fusion is invariant under
    scaling the whole weight vector, and halving is exact in binary floating
    point). Rows beyond those are uniform random in [0,1]^N.
    """
    if rng is None:
        rng = np.random.default_rng(config.rng_seed)
    pop = np.empty((config.population_size, n_members), dtype=np.float64)
    n_units = min(n_members, config.population_size)
    pop[:n_units] = np.eye(n_members, dtype=np.float64)[:n_units]
    cursor = n_units
    if cursor < config.population_size:
        pop[cursor] = 0.5
        cursor += 1
    if cursor < config.population_size:
        pop[cursor:] = rng.random((config.population_size - cursor, n_members))
        for i in range(cursor, config.population_size):
            _repair_all_zero(pop[i], rng)
    return pop


def _repair_all_zero(chrom: np.ndarray, rng: np.random.Generator) -> None:
    """Give an all-zero chromosome one strictly positive gene, in place."""
    if chrom.sum() == 0.0:
        idx = int(rng.integers(0, chrom.shape[0]))
        chrom[idx] = 1.0 - rng.random()  # (0, 1]: cannot re-create the zero


def _tournament(fitness: np.ndarray, size: int, rng: np.random.Generator) -> int:
    contenders = rng.integers(0, fitness.shape[0], size=size)
    return int(contenders[np.argmax(fitness[contenders])])


def ga_optimize(ensemble: EnsembleInput, config: Optional[GAConfig] = None) -> GAResult:
    """Search for fusion weights minimizing MSE against the ensemble's labels.

    Deterministic for a fixed (ensemble, config). The whole population is
    (re)scored every round, so the evaluation count is always
    ``population_size * (generations + 1)``.
    """
    if config is None:
        config = GAConfig()
    rng = np.random.default_rng(config.rng_seed)
    n = ensemble.n_members
    targets = ensemble.targets

    def score_all(population: np.ndarray) -> np.ndarray:
        # One chromosome at a time through the public fuse+mse path; a fused
        # batched shortcut here would break the exact-dominance guarantee.
        return np.array(
            [mse(fuse(ensemble, WeightVector(genes=c)).probs, targets) for c in population]
        )

    population = seed_population(config, n, rng)
    errors = score_all(population)
    history = [(float(errors.min()), float(errors.mean()))]

    n_children = config.population_size - config.elite_count
    for _gen in range(config.generations):
        order = np.argsort(errors, kind="stable")
        next_pop = np.empty_like(population)
        next_pop[: config.elite_count] = population[order[: config.elite_count]]

        fitness = -errors
        for slot in range(n_children):
            p1 = population[_tournament(fitness, config.tournament_size, rng)]
            p2 = population[_tournament(fitness, config.tournament_size, rng)]
            if rng.random() < config.crossover_rate:
                take_p1 = rng.random(n) < 0.5
                child = np.where(take_p1, p1, p2)
            else:
                child = p1.copy()
            noise = rng.normal(0.0, config.mutation_sigma, size=n)
            mutate = rng.random(n) < config.mutation_rate_per_gene
            child = np.clip(child + noise * mutate, 0.0, 1.0)
            _repair_all_zero(child, rng)
            next_pop[config.elite_count + slot] = child

        population = next_pop
        errors = score_all(population)
        history.append((float(errors.min()), float(errors.mean())))

    best_idx = int(np.argsort(errors, kind="stable")[0])
    best = WeightVector(genes=_freeze(population[best_idx].copy()))
    return GAResult(
        best_weights=best,
        best_mse=history[-1][0],
        history=tuple(history),
        evaluations=config.population_size * (config.generations + 1),
    )


# --------------------------------------------------------------------------
# Brute-force reference
# --------------------------------------------------------------------------

MAX_GRID_MEMBERS = 4


@dataclass(frozen=True)
class GridResult:
    weights: WeightVector  # lattice point, sums to 1
    mse: float
    n_points: int


def grid_points(n_members: int, step: float) -> np.ndarray:
    """All weight vectors on the simplex whose entries are multiples of ``step``.

    Rows sum to 1 and are ordered lexicographically by (w_0, w_1, ...).
    """
    if n_members > MAX_GRID_MEMBERS:
        raise TooManyMembersError(
            f"grid search supports at most {MAX_GRID_MEMBERS} members, got {n_members}"
        )
    if not 0.0 < step <= 1.0:
        raise BadStepError(f"step must be in (0, 1], got {step}")
    k = 1.0 / step
    if abs(k - round(k)) > 1e-9:
        raise BadStepError(f"1/step must be an integer, got step={step}")
    k = int(round(k))

    # Stars and bars: compositions of k into n_members non-negative parts.
    counts = []
    for cuts in itertools.combinations(range(k + n_members - 1), n_members - 1):
        prev = -1
        parts = []
        for cut in cuts:
            parts.append(cut - prev - 1)
            prev = cut
        parts.append(k + n_members - 2 - prev)
        counts.append(parts)
    pts = np.asarray(counts, dtype=np.float64) / k
    return pts[np.lexsort(pts.T[::-1])]


def grid_oracle(ensemble: EnsembleInput, step: float = 0.02) -> GridResult:
    """Exhaustively score the lattice with independent arithmetic.

    Deliberately does not call ``fuse``/``mse``: lattice weights already sum
    to 1, so fused probabilities are a plain matrix product and the error is
    a directly computed mean of squares. Ties break toward the
    lexicographically smallest point.
    """
    pts = grid_points(ensemble.n_members, step)
    flat_members = ensemble.stacked.reshape(ensemble.n_members, -1)  # (N, S*C)
    flat_targets = ensemble.targets.reshape(-1)

    best_err = np.inf
    best_row = -1
    chunk = 2048
    for start in range(0, pts.shape[0], chunk):
        block = pts[start : start + chunk]
        fused = block @ flat_members  # (M, S*C)
        diff = fused - flat_targets
        errs = (diff * diff).mean(axis=1)
        local = int(np.argmin(errs))
        if errs[local] < best_err:
            best_err = float(errs[local])
            best_row = start + local
    return GridResult(
        weights=WeightVector(genes=_freeze(pts[best_row].copy())),
        mse=best_err,
        n_points=pts.shape[0],
    )
