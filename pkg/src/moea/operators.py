"""Variation Operators - SBX crossover and polynomial mutation for real-coded EAs

Self-Explanatory: The two standard real-valued operators shared by NSGA-II and the
single-objective GA.
How: SBX spreads children symmetrically around the parents' midpoint, so their mean
equals the parents' mean before clamping. Polynomial mutation uses the bounded
(delta_1/delta_2) form. Every output is clamped to [lower, upper].
"""

from typing import Tuple

import numpy as np

# NSGA-II community defaults
ETA_C = 20.0
ETA_M = 20.0
CROSSOVER_PROB = 0.9
VARIABLE_SWAP_PROB = 0.5
EPS = 1e-14


def sbx_crossover(
    p1: np.ndarray,
    p2: np.ndarray,
    eta_c: float,
    rng: np.random.Generator,
    lower: np.ndarray,
    upper: np.ndarray,
    variable_prob: float = VARIABLE_SWAP_PROB,
) -> Tuple[np.ndarray, np.ndarray]:
    """Simulated binary crossover; each variable recombines with probability `variable_prob`"""
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    n = p1.size

    u = rng.random(n)
    beta = np.where(u <= 0.5, (2.0 * u) ** (1.0 / (eta_c + 1.0)), (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (eta_c + 1.0)))
    active = (rng.random(n) < variable_prob) & (np.abs(p1 - p2) > EPS)

    mid = 0.5 * (p1 + p2)
    half = 0.5 * (p2 - p1)
    c1 = np.where(active, mid - beta * half, p1)
    c2 = np.where(active, mid + beta * half, p2)

    # Swap genes between children at random so neither child is biased toward one parent
    swap = rng.random(n) < 0.5
    c1, c2 = np.where(swap, c2, c1), np.where(swap, c1, c2)
    return np.clip(c1, lower, upper), np.clip(c2, lower, upper)


def polynomial_mutation(
    x: np.ndarray,
    p_m: float,
    eta_m: float,
    rng: np.random.Generator,
    lower: np.ndarray,
    upper: np.ndarray,
) -> np.ndarray:
    """Bounded polynomial mutation; p_m = 0 returns an unchanged copy"""
    x = np.asarray(x, dtype=float).copy()
    if p_m <= 0.0:
        return x
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    span = upper - lower

    mutate = rng.random(x.size) < p_m
    u = rng.random(x.size)
    delta1 = (x - lower) / span
    delta2 = (upper - x) / span
    power = 1.0 / (eta_m + 1.0)

    left = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - delta1) ** (eta_m + 1.0)
    right = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - delta2) ** (eta_m + 1.0)
    deltaq = np.where(u < 0.5, left ** power - 1.0, 1.0 - right ** power)

    x = np.where(mutate, x + deltaq * span, x)
    return np.clip(x, lower, upper)


def binary_tournament(rank: np.ndarray, crowding: np.ndarray, rng: np.random.Generator, count: int) -> np.ndarray:
    """Pick `count` parent indices by (lower rank, larger crowding); exact ties go to a coin flip"""
    size = rank.size
    a = rng.integers(0, size, count)
    b = rng.integers(0, size, count)
    coin = rng.random(count) < 0.5
    a_better = (rank[a] < rank[b]) | ((rank[a] == rank[b]) & (crowding[a] > crowding[b]))
    b_better = (rank[b] < rank[a]) | ((rank[a] == rank[b]) & (crowding[b] > crowding[a]))
    return np.where(a_better, a, np.where(b_better, b, np.where(coin, a, b)))
