"""Unit Tests for Variation Operators - SBX, polynomial mutation, binary tournament

Run: pytest tests/moea/
"""

import numpy as np

from src.moea.operators import ETA_C, ETA_M, binary_tournament, polynomial_mutation, sbx_crossover

WIDE = 1000


def test_sbx_identical_parents(rng):
    p = rng.random(10)
    c1, c2 = sbx_crossover(p, p.copy(), ETA_C, rng, np.zeros(10), np.ones(10), variable_prob=1.0)
    np.testing.assert_array_equal(c1, p)
    np.testing.assert_array_equal(c2, p)


def test_sbx_preserves_parent_mean(rng):
    """10^5 variable draws; parents sit far enough from the bounds that clamping never fires"""
    lower, upper = np.zeros(WIDE), np.ones(WIDE)
    p1, p2 = np.full(WIDE, 0.4), np.full(WIDE, 0.6)
    for _ in range(100):
        c1, c2 = sbx_crossover(p1, p2, ETA_C, rng, lower, upper, variable_prob=1.0)
        np.testing.assert_allclose(0.5 * (c1 + c2), 0.5, atol=1e-12)


def test_sbx_children_in_bounds(rng):
    lower, upper = np.full(WIDE, -2.0), np.full(WIDE, 3.0)
    for _ in range(100):
        p1 = lower + rng.random(WIDE) * (upper - lower)
        p2 = lower + rng.random(WIDE) * (upper - lower)
        c1, c2 = sbx_crossover(p1, p2, 2.0, rng, lower, upper)
        assert np.all((c1 >= lower) & (c1 <= upper))
        assert np.all((c2 >= lower) & (c2 <= upper))


def test_mutation_zero_probability_is_identity(rng):
    x = rng.random(10)
    out = polynomial_mutation(x, 0.0, ETA_M, rng, np.zeros(10), np.ones(10))
    np.testing.assert_array_equal(out, x)
    assert out is not x


def test_mutation_changes_every_trial(rng):
    lower, upper = np.zeros(10), np.ones(10)
    changed = 0
    for _ in range(100):
        x = rng.random(10)
        changed += not np.array_equal(polynomial_mutation(x, 1.0, ETA_M, rng, lower, upper), x)
    assert changed >= 99


def test_mutation_stays_in_bounds(rng):
    lower, upper = np.full(WIDE, -5.0), np.full(WIDE, 5.0)
    for _ in range(100):
        # pile inputs onto the bounds, where the perturbation is most likely to overshoot
        x = np.where(rng.random(WIDE) < 0.5, lower, upper) + rng.normal(scale=1e-3, size=WIDE)
        x = np.clip(x, lower, upper)
        out = polynomial_mutation(x, 1.0, 1.0, rng, lower, upper)
        assert np.all((out >= lower) & (out <= upper))


def test_binary_tournament_prefers_rank_then_crowding(rng):
    rank = np.array([0, 1])
    crowding = np.array([0.1, np.inf])
    picks = binary_tournament(rank, crowding, rng, 2000)
    # index 1 only wins when drawn against itself
    assert np.mean(picks == 0) > 0.7

    rank = np.array([0, 0])
    crowding = np.array([np.inf, 0.5])
    picks = binary_tournament(rank, crowding, rng, 2000)
    assert np.mean(picks == 0) > 0.7


def test_binary_tournament_ties_are_coin_flips(rng):
    picks = binary_tournament(np.zeros(2, dtype=int), np.ones(2), rng, 20000)
    assert 0.45 < np.mean(picks == 0) < 0.55
