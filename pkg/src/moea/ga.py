"""Real-coded GA - single-objective minimizer built from the NSGA-II operators

Used as the inner EA that optimizes an acquisition function (binary tournament on
fitness, SBX, polynomial mutation, (mu + lambda) truncation).
"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from src.moea.operators import CROSSOVER_PROB, ETA_C, ETA_M, polynomial_mutation, sbx_crossover

ScalarBatchObjective = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class GaResult:
    best_x: np.ndarray
    best_value: float


def ga_minimize(
    fn: ScalarBatchObjective,
    lower: Sequence[float],
    upper: Sequence[float],
    rng: np.random.Generator,
    pop_size: int = 50,
    generations: int = 50,
    initial: Optional[np.ndarray] = None,
) -> GaResult:
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    n = lower.size
    p_m = 1.0 / n

    X = lower + rng.random((pop_size, n)) * (upper - lower)
    if initial is not None and len(initial):
        seeds = np.clip(np.atleast_2d(np.asarray(initial, dtype=float)), lower, upper)[:pop_size]
        X[: seeds.shape[0]] = seeds
    f = np.asarray(fn(X), dtype=float).ravel()

    for _ in range(generations):
        a = rng.integers(0, pop_size, pop_size)
        b = rng.integers(0, pop_size, pop_size)
        parents = np.where(f[a] <= f[b], a, b)
        children = np.empty_like(X)
        for k in range(0, pop_size - 1, 2):
            c1, c2 = X[parents[k]], X[parents[k + 1]]
            if rng.random() < CROSSOVER_PROB:
                c1, c2 = sbx_crossover(c1, c2, ETA_C, rng, lower, upper)
            children[k] = polynomial_mutation(c1, p_m, ETA_M, rng, lower, upper)
            children[k + 1] = polynomial_mutation(c2, p_m, ETA_M, rng, lower, upper)
        if pop_size % 2:
            children[-1] = polynomial_mutation(X[parents[-1]], p_m, ETA_M, rng, lower, upper)
        f_children = np.asarray(fn(children), dtype=float).ravel()

        merged_X = np.vstack([X, children])
        merged_f = np.concatenate([f, f_children])
        keep = np.argsort(merged_f, kind="stable")[:pop_size]
        X, f = merged_X[keep], merged_f[keep]

    best = int(np.argmin(f))
    return GaResult(best_x=X[best].copy(), best_value=float(f[best]))
