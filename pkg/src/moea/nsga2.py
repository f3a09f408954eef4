"""NSGA-II - Elitist non-dominated sorting GA

Self-Explanatory: Fast non-dominated sorting, crowding distance and the generational
(mu + lambda) loop with binary tournament, SBX and polynomial mutation.
Why: Drives the model-based search over the transformed 2m-objective surrogate problem,
and doubles as a plain (surrogate-free) baseline under an FE budget.
How: Objective functions are batch callables X (p, n) -> F (p, M). All randomness comes
from the caller's numpy Generator, so one seed gives one trajectory.
"""

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.moea.operators import (
    CROSSOVER_PROB,
    ETA_C,
    ETA_M,
    binary_tournament,
    polynomial_mutation,
    sbx_crossover,
)
from src.utils.errors import InvalidArgumentError

logger = structlog.get_logger()

BatchObjective = Callable[[np.ndarray], np.ndarray]


class Nsga2Config(BaseModel):
    """Operator settings; mutation_prob None means 1/n"""
    model_config = ConfigDict(extra="forbid")

    pop_size: int = Field(default=50, ge=2)
    generations: int = Field(default=50, ge=0)
    eta_c: float = Field(default=ETA_C, gt=0)
    eta_m: float = Field(default=ETA_M, gt=0)
    crossover_prob: float = Field(default=CROSSOVER_PROB, ge=0, le=1)
    mutation_prob: Optional[float] = Field(default=None, ge=0, le=1)

    @model_validator(mode="after")
    def _even_population(self):
        if self.pop_size % 2:
            raise ValueError("pop_size must be even")
        return self


# ============================================================================
# DOMINANCE AND SORTING
# ============================================================================


def dominates(u, v) -> bool:
    """u is no worse than v everywhere and strictly better somewhere"""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise InvalidArgumentError(f"cannot compare objective vectors of shapes {u.shape} and {v.shape}")
    return bool(np.all(u <= v) and np.any(u < v))


def _domination_matrix(F: np.ndarray) -> np.ndarray:
    """D[i, j] is True when row i dominates row j"""
    leq = np.all(F[:, None, :] <= F[None, :, :], axis=2)
    lt = np.any(F[:, None, :] < F[None, :, :], axis=2)
    return leq & lt


def fast_nondominated_sort(points) -> List[List[int]]:
    """Partition indices into fronts; front 0 is the non-dominated subset"""
    F = np.atleast_2d(np.asarray(points, dtype=float))
    if F.shape[0] == 0:
        raise InvalidArgumentError("cannot sort an empty point set")
    D = _domination_matrix(F)
    dominated_by = D.sum(axis=0)
    fronts: List[List[int]] = []
    current = [int(i) for i in np.flatnonzero(dominated_by == 0)]
    while current:
        fronts.append(current)
        nxt = []
        for i in current:
            for j in np.flatnonzero(D[i]):
                dominated_by[j] -= 1
                if dominated_by[j] == 0:
                    nxt.append(int(j))
        current = sorted(nxt)
    return fronts


def crowding_distance(front) -> np.ndarray:
    """Sum of normalized neighbour gaps; boundary points get +inf"""
    F = np.atleast_2d(np.asarray(front, dtype=float))
    size, m = F.shape
    if size == 0:
        raise InvalidArgumentError("crowding distance needs a non-empty front")
    distance = np.zeros(size)
    if size <= 2:
        return np.full(size, np.inf)
    spans = F.max(axis=0) - F.min(axis=0)
    if np.all(spans == 0.0):
        return np.full(size, np.inf)
    for j in range(m):
        order = np.argsort(F[:, j], kind="stable")
        distance[order[0]] = np.inf
        distance[order[-1]] = np.inf
        if spans[j] == 0.0:
            continue
        gaps = (F[order[2:], j] - F[order[:-2], j]) / spans[j]
        distance[order[1:-1]] += gaps
    return distance


def rank_and_crowding(F: np.ndarray):
    """Per-row front index and crowding distance within that front"""
    rank = np.empty(F.shape[0], dtype=int)
    crowd = np.empty(F.shape[0])
    for r, front in enumerate(fast_nondominated_sort(F)):
        rank[front] = r
        crowd[front] = crowding_distance(F[front])
    return rank, crowd


# ============================================================================
# POPULATION TYPES
# ============================================================================


@dataclass(frozen=True)
class Individual:
    genes: np.ndarray
    objectives: np.ndarray
    rank: int
    crowding: float


@dataclass
class Population:
    """Array-backed population; `members` materializes Individuals on demand"""
    genes: np.ndarray
    objectives: np.ndarray
    rank: np.ndarray
    crowding: np.ndarray
    evaluations: int = 0

    @property
    def size(self) -> int:
        return int(self.genes.shape[0])

    @property
    def members(self) -> List[Individual]:
        return [
            Individual(self.genes[i], self.objectives[i], int(self.rank[i]), float(self.crowding[i]))
            for i in range(self.size)
        ]

    def front(self, index: int = 0) -> "Population":
        mask = self.rank == index
        return Population(self.genes[mask], self.objectives[mask], self.rank[mask], self.crowding[mask], self.evaluations)


# ============================================================================
# MAIN LOOP
# ============================================================================


def _survive(X: np.ndarray, F: np.ndarray, size: int):
    """Elitist truncation: whole fronts first, then the last front by descending crowding"""
    chosen: List[int] = []
    for front in fast_nondominated_sort(F):
        if len(chosen) + len(front) <= size:
            chosen.extend(front)
            continue
        crowd = crowding_distance(F[front])
        order = np.argsort(-crowd, kind="stable")
        chosen.extend(np.asarray(front)[order[: size - len(chosen)]].tolist())
        break
    idx = np.asarray(chosen)
    rank, crowd = rank_and_crowding(F[idx])
    return X[idx], F[idx], rank, crowd


def _offspring(X, rank, crowd, config: Nsga2Config, rng, lower, upper) -> np.ndarray:
    size, n = X.shape
    p_m = config.mutation_prob if config.mutation_prob is not None else 1.0 / n
    parents = binary_tournament(rank, crowd, rng, size)
    children = np.empty_like(X)
    for k in range(0, size, 2):
        a, b = X[parents[k]], X[parents[k + 1]]
        if rng.random() < config.crossover_prob:
            a, b = sbx_crossover(a, b, config.eta_c, rng, lower, upper)
        children[k] = polynomial_mutation(a, p_m, config.eta_m, rng, lower, upper)
        children[k + 1] = polynomial_mutation(b, p_m, config.eta_m, rng, lower, upper)
    return children


def nsga2_optimize(
    objective_fn: BatchObjective,
    lower: Sequence[float],
    upper: Sequence[float],
    pop_size: int,
    generations: int,
    rng: np.random.Generator,
    config: Optional[Nsga2Config] = None,
    initial: Optional[np.ndarray] = None,
    max_evaluations: Optional[int] = None,
) -> Population:
    """Run NSGA-II and return the final population, ranked and crowded

    initial: decision vectors injected into the first population (the rest is uniform random).
    max_evaluations: hard cap on objective_fn rows; the last offspring batch is truncated to fit.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    config = (config or Nsga2Config()).model_copy(update={"pop_size": pop_size, "generations": generations})
    if pop_size % 2 or pop_size < 2:
        raise InvalidArgumentError(f"pop_size must be a positive even number, got {pop_size}")
    if generations < 0:
        raise InvalidArgumentError(f"generations must be >= 0, got {generations}")
    budget = math.inf if max_evaluations is None else int(max_evaluations)

    n = lower.size
    X = lower + rng.random((pop_size, n)) * (upper - lower)
    if initial is not None and len(initial):
        seeds = np.clip(np.atleast_2d(np.asarray(initial, dtype=float)), lower, upper)[:pop_size]
        X[: seeds.shape[0]] = seeds
    if budget < pop_size:
        X = X[: int(budget)]
    F = np.asarray(objective_fn(X), dtype=float)
    evaluations = X.shape[0]
    rank, crowd = rank_and_crowding(F)

    for gen in range(generations):
        remaining = budget - evaluations
        if remaining <= 0:
            break
        children = _offspring(X, rank, crowd, config, rng, lower, upper)
        if remaining < children.shape[0]:
            children = children[: int(remaining)]
        F_children = np.asarray(objective_fn(children), dtype=float)
        evaluations += children.shape[0]
        X, F, rank, crowd = _survive(np.vstack([X, children]), np.vstack([F, F_children]), pop_size)

    logger.debug("NSGA-II finished", generations=generations, evaluations=evaluations, front_size=int(np.sum(rank == 0)))
    return Population(genes=X, objectives=F, rank=rank, crowding=crowd, evaluations=evaluations)
