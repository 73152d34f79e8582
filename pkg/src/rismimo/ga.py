"""Genetic algorithm over reflection phase vectors.

The fitness of a candidate phase vector is its closed-form rate objective
(sum rate or minimum user rate) - never a Monte Carlo estimate - matching
the long-term-statistics premise: phases are tuned from angles, path
losses and Rician factors alone.

One generation: rank-based fitness scaling, elite carry-over, stochastic
universal sampling of parents, two-point crossover, uniform mutation.
The population is rebuilt as elites + crossover children + mutation
children, so its size never changes.  Evolution stops at the generation
cap or when the mean raw fitness has been flat (range below the stall
tolerance) over a sliding window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .channel import Scenario, TWO_PI
from .moments import PhaseVector, all_element_offsets, user_gram


@dataclass(frozen=True)
class GAConfig:
    """Hyperparameters; population = elites + crossover_pairs + mutation_parents."""

    population: int = 200
    elites: int = 10
    crossover_pairs: int = 152
    mutation_parents: int = 38
    mutation_prob: float = 0.1
    max_generations: int = 500
    stall_tolerance: float = 1e-4
    stall_window: int = 20
    objective: str = "sum"  # "sum" | "min"
    bits: int | None = None

    def __post_init__(self):
        if self.population != self.elites + self.crossover_pairs + self.mutation_parents:
            raise ValueError(
                "population must equal elites + crossover_pairs + mutation_parents"
            )
        if not 0.0 < self.mutation_prob <= 1.0:
            raise ValueError("mutation_prob must be in (0, 1]")
        if self.max_generations < 1:
            raise ValueError("max_generations must be >= 1")
        if self.stall_tolerance < 0:
            raise ValueError("stall_tolerance must be >= 0")
        if self.objective not in ("sum", "min"):
            raise ValueError(f"unknown objective {self.objective!r}")
        if self.bits is not None and int(self.bits) < 1:
            raise ValueError("bits must be >= 1")


@dataclass(frozen=True)
class Individual:
    phases: PhaseVector
    raw_fitness: float
    scaled_fitness: float


@dataclass
class GAResult:
    best: Individual
    history: dict[str, np.ndarray]
    generations: int
    stopped_by: str


def fitness_scale(raw: np.ndarray, crossover_pairs: int) -> np.ndarray:
    """Rank-based scaling: the i-th best individual gets 1/sqrt(rank_i),
    normalized so the scaled values sum to 2 * crossover_pairs.

    Ranks come from a stable descending sort, so ties keep insertion order.
    """
    raw = np.asarray(raw, dtype=float)
    if not np.all(np.isfinite(raw)):
        raise ValueError("raw fitness values must be finite")
    order = np.argsort(-raw, kind="stable")
    ranks = np.empty(raw.shape[0], dtype=np.int64)
    ranks[order] = np.arange(1, raw.shape[0] + 1)
    f = 1.0 / np.sqrt(ranks)
    return 2.0 * crossover_pairs * f / f.sum()


def sus_select(scaled: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    """Stochastic universal sampling: one spin, ``count`` equally spaced
    pointers with step 1/count over a wheel whose slot i has width
    proportional to scaled[i].  Each individual is selected floor or ceil
    of its expected number of times."""
    scaled = np.asarray(scaled, dtype=float)
    total = scaled.sum()
    if not total > 0:
        raise ValueError("scaled fitness must have positive sum")
    slots = np.cumsum(scaled / total)
    slots[-1] = 1.0  # guard against rounding
    step = 1.0 / count
    pointers = rng.uniform(0.0, step) + step * np.arange(count)
    return np.searchsorted(slots, pointers, side="right").astype(np.int64)


def _two_point_splice(p1: np.ndarray, p2: np.ndarray, i1: int, i2: int) -> np.ndarray:
    """Child = p1[0:i1] + p2[i1:i2] + p1[i2:N] (1-based cut points i1 < i2)."""
    child = p1.copy()
    child[i1:i2] = p2[i1:i2]
    return child


def crossover(parents: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    """Two-point crossover over consecutive parent pairs.

    ``parents`` is (2*pairs, N); offspring i combines parents 2i and 2i+1.
    Cut points are distinct integers from [1, N-1]; when they come out
    descending, both the cut points and the parent roles are swapped.
    Arrays with N <= 2 fall back to single-point crossover.
    """
    if n < 1:
        raise ValueError("need at least one chromosome")
    parents = np.asarray(parents)
    pairs = parents.shape[0] // 2
    children = np.empty((pairs, n), dtype=parents.dtype)
    for j in range(pairs):
        p1, p2 = parents[2 * j], parents[2 * j + 1]
        if n > 2:
            i1, i2 = rng.choice(np.arange(1, n), size=2, replace=False)
            if i1 > i2:
                i1, i2 = i2, i1
                p1, p2 = p2, p1
            children[j] = _two_point_splice(p1, p2, int(i1), int(i2))
        elif n == 2:
            i1 = int(rng.integers(1, n))
            children[j] = np.concatenate([p1[:i1], p2[i1:]])
        else:
            children[j] = p1
    return children


def mutate(
    parents: np.ndarray, prob: float, bits: int | None, rng: np.random.Generator
) -> np.ndarray:
    """Uniform mutation: each gene is independently replaced with
    probability ``prob`` by a fresh uniform draw from the phase domain."""
    parents = np.asarray(parents)
    children = parents.copy()
    mask = rng.random(parents.shape) < prob
    if bits is None:
        children[mask] = rng.uniform(0.0, TWO_PI, size=int(mask.sum()))
    else:
        step = TWO_PI / (2 ** int(bits))
        children[mask] = rng.integers(0, 2 ** int(bits), size=int(mask.sum())) * step
    return children


def _population_fitness(
    thetas: np.ndarray, scenario: Scenario, zeta: np.ndarray, gram: np.ndarray, objective: str
) -> np.ndarray:
    f = _kernels.gain_batch(np.ascontiguousarray(thetas), zeta)
    if scenario.pure_los:
        f2 = np.abs(f) ** 2
        ba = scenario.beta * scenario.alpha
        sig = scenario.p * ba * scenario.M * f2
        inter = sig.sum(axis=1, keepdims=True) - sig
        rates = np.log2(1.0 + sig / (inter + scenario.sigma2))
    else:
        rates = _kernels.rates_batch(
            f,
            gram,
            scenario.M,
            scenario.N,
            scenario.delta,
            scenario.epsilon,
            scenario.beta * scenario.alpha,
            scenario.p,
            scenario.sigma2,
        )
    return rates.sum(axis=1) if objective == "sum" else rates.min(axis=1)


def _initial_population(
    n: int, size: int, bits: int | None, rng: np.random.Generator
) -> np.ndarray:
    if bits is None:
        return rng.uniform(0.0, TWO_PI, size=(size, n))
    step = TWO_PI / (2 ** int(bits))
    return rng.integers(0, 2 ** int(bits), size=(size, n)) * step


def ga_optimize(scenario: Scenario, config: GAConfig, seed: int) -> GAResult:
    """Evolve phase vectors against the closed-form rate objective.

    Returns the best individual ever seen plus per-generation history of
    best/mean raw fitness and population size.  A single seeded stream
    drives initialization, selection, crossover and mutation, so runs are
    fully reproducible.
    """
    rng = np.random.default_rng(seed)
    n = scenario.N
    zeta = np.ascontiguousarray(all_element_offsets(scenario))
    gram = np.ascontiguousarray(user_gram(scenario))
    pop = _initial_population(n, config.population, config.bits, rng)

    best_hist: list[float] = []
    mean_hist: list[float] = []
    size_hist: list[int] = []
    best_theta = pop[0]
    best_raw = -math.inf
    best_scaled = 0.0
    stopped_by = "max_generations"
    gen = 0

    for gen in range(1, config.max_generations + 1):
        raw = _population_fitness(pop, scenario, zeta, gram, config.objective)
        scaled = fitness_scale(raw, config.crossover_pairs)
        gi = int(np.argmax(raw))
        if raw[gi] > best_raw:
            best_raw = float(raw[gi])
            best_scaled = float(scaled[gi])
            best_theta = pop[gi].copy()
        best_hist.append(float(raw[gi]))
        mean_hist.append(float(raw.mean()))
        size_hist.append(pop.shape[0])

        if (
            len(mean_hist) >= config.stall_window
            and max(mean_hist[-config.stall_window :]) - min(mean_hist[-config.stall_window :])
            < config.stall_tolerance
        ):
            stopped_by = "stall"
            break
        if gen == config.max_generations:
            break

        elite_idx = np.argsort(-scaled, kind="stable")[: config.elites]
        cross_parents = sus_select(scaled, 2 * config.crossover_pairs, rng)
        cross_parents = rng.permutation(cross_parents)  # avoid self-pairing runs
        mut_parents = sus_select(scaled, config.mutation_parents, rng)

        elites = pop[elite_idx]
        cross_children = crossover(pop[cross_parents], n, rng)
        mut_children = mutate(pop[mut_parents], config.mutation_prob, config.bits, rng)
        pop = np.vstack([elites, cross_children, mut_children])

    best = Individual(
        phases=PhaseVector(theta=best_theta, bits=config.bits),
        raw_fitness=best_raw,
        scaled_fitness=best_scaled,
    )
    history = {
        "best": np.array(best_hist),
        "mean": np.array(mean_hist),
        "population_size": np.array(size_hist),
    }
    return GAResult(best=best, history=history, generations=gen, stopped_by=stopped_by)


def ga_config_to_dict(config: GAConfig) -> dict:
    return {
        "population": config.population,
        "elites": config.elites,
        "crossover_pairs": config.crossover_pairs,
        "mutation_parents": config.mutation_parents,
        "mutation_prob": config.mutation_prob,
        "max_generations": config.max_generations,
        "stall_tolerance": config.stall_tolerance,
        "stall_window": config.stall_window,
        "objective": config.objective,
        "bits": config.bits,
    }


def ga_config_from_dict(data: dict) -> GAConfig:
    return GAConfig(**{k: data[k] for k in data})
