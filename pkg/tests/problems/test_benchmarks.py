"""Unit Tests for Benchmark Problems - ZDT/DTLZ values, bounds and true-front samplers

Self-Explanatory: Hand-evaluated objective values plus property checks on every problem.
Why: Every IGD number in a results table rests on these definitions.
How: Direct evaluation against closed forms; brute-force dominance checks on front samples.
Run: pytest tests/problems/
"""

import math

import numpy as np
import pytest

from src.problems.benchmarks import (
    PROBLEM_IDS,
    bounds,
    evaluate,
    get_problem,
    problem_seed,
    reference_front,
    sample_true_pf,
)
from src.utils.errors import InvalidArgumentError, UnsupportedProblemError


def _mutually_nondominated(F: np.ndarray) -> bool:
    leq = np.all(F[:, None, :] <= F[None, :, :], axis=2)
    lt = np.any(F[:, None, :] < F[None, :, :], axis=2)
    return not np.any(leq & lt)


def test_zdt1_hand_values():
    zdt1 = get_problem("zdt1", 3)
    np.testing.assert_allclose(evaluate(zdt1, [0.0, 0.0, 0.0]), [0.0, 1.0])
    np.testing.assert_allclose(evaluate(zdt1, [1.0, 0.0, 0.0]), [1.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(evaluate(get_problem("zdt1", 2), [1.0, 1.0]), [1.0, 10.0 - math.sqrt(10.0)])


def test_dtlz2_corner_lies_on_unit_sphere():
    dtlz2 = get_problem("dtlz2", 12, 3)
    f = evaluate(dtlz2, [0.0, 0.0] + [0.5] * 10)
    np.testing.assert_allclose(f, [1.0, 0.0, 0.0], atol=1e-15)
    assert np.linalg.norm(f) == pytest.approx(1.0)


def test_bounds():
    lower, upper = bounds(get_problem("zdt1", 2))
    np.testing.assert_array_equal(lower, [0.0, 0.0])
    np.testing.assert_array_equal(upper, [1.0, 1.0])

    lower, upper = bounds(get_problem("zdt4", 3))
    np.testing.assert_array_equal(lower, [0.0, -5.0, -5.0])
    np.testing.assert_array_equal(upper, [1.0, 5.0, 5.0])

    lower, upper = bounds(get_problem("dtlz7", 10))
    assert np.all(lower == 0.0) and np.all(upper == 1.0)


def test_bounds_returns_copies():
    problem = get_problem("zdt1", 4)
    lower, _ = bounds(problem)
    lower[0] = 42.0
    assert problem.lower[0] == 0.0


def test_objective_counts():
    assert get_problem("zdt3", 10).m == 2
    assert get_problem("dtlz1", 10).m == 3
    assert get_problem("dtlz1", 10, m=2).m == 2


def test_dimension_mismatch_and_out_of_bounds():
    zdt1 = get_problem("zdt1", 3)
    with pytest.raises(InvalidArgumentError):
        evaluate(zdt1, [0.5, 0.5])
    with pytest.raises(InvalidArgumentError):
        evaluate(zdt1, [1.5, 0.0, 0.0])
    with pytest.raises(InvalidArgumentError):
        zdt1.evaluate_batch(np.zeros((2, 4)))


def test_unknown_and_invalid_problems():
    with pytest.raises(UnsupportedProblemError):
        get_problem("zdt5", 10)
    with pytest.raises(InvalidArgumentError):
        get_problem("zdt1", 1)
    with pytest.raises(InvalidArgumentError):
        get_problem("dtlz2", 2, m=3)


@pytest.mark.parametrize("problem_id", PROBLEM_IDS)
def test_finite_and_repeatable(problem_id, rng):
    problem = get_problem(problem_id, 10)
    X = problem.lower + rng.random((50, 10)) * (problem.upper - problem.lower)
    F1 = problem.evaluate_batch(X)
    F2 = problem.evaluate_batch(X)
    assert F1.shape == (50, problem.m)
    assert np.all(np.isfinite(F1))
    np.testing.assert_array_equal(F1, F2)


def test_batch_matches_single(rng):
    problem = get_problem("dtlz7", 8)
    X = rng.random((5, 8))
    F = problem.evaluate_batch(X)
    for x, f in zip(X, F):
        np.testing.assert_array_equal(evaluate(problem, x), f)


@pytest.mark.parametrize("problem_id", ["zdt1", "zdt2", "zdt3", "zdt6"])
def test_zdt_optimal_tail_lands_on_front(problem_id, rng):
    problem = get_problem(problem_id, 6)
    for x1 in rng.random(20):
        f1, f2 = evaluate(problem, np.concatenate([[x1], np.zeros(5)]))
        if problem_id == "zdt1":
            expected = 1.0 - math.sqrt(f1)
        elif problem_id == "zdt3":
            expected = 1.0 - math.sqrt(f1) - f1 * math.sin(10.0 * math.pi * f1)
        else:
            expected = 1.0 - f1 ** 2
        assert f2 == pytest.approx(expected, abs=1e-12)


def test_zdt_front_samples():
    zdt1 = get_problem("zdt1", 5)
    np.testing.assert_allclose(sample_true_pf(zdt1, 2, np.random.default_rng(0)).points, [[0.0, 1.0], [1.0, 0.0]])
    zdt2 = get_problem("zdt2", 5)
    np.testing.assert_allclose(
        sample_true_pf(zdt2, 3, np.random.default_rng(0)).points, [[0.0, 1.0], [0.5, 0.75], [1.0, 0.0]]
    )


def test_dtlz2_front_is_unit_sphere():
    sample = sample_true_pf(get_problem("dtlz2", 10), 500, np.random.default_rng(1))
    assert sample.count == 500
    np.testing.assert_allclose(np.sum(sample.points ** 2, axis=1), 1.0, atol=1e-12)


def test_dtlz1_front_is_half_simplex():
    sample = sample_true_pf(get_problem("dtlz1", 10), 300, np.random.default_rng(2))
    np.testing.assert_allclose(sample.points.sum(axis=1), 0.5, atol=1e-12)


@pytest.mark.parametrize("problem_id", PROBLEM_IDS)
def test_front_samples_are_nondominated(problem_id):
    problem = get_problem(problem_id, 10)
    sample = sample_true_pf(problem, 200, np.random.default_rng(3))
    assert sample.count >= 2
    assert sample.points.shape[1] == problem.m
    assert _mutually_nondominated(sample.points)


def test_front_sample_needs_two_points():
    with pytest.raises(InvalidArgumentError):
        sample_true_pf(get_problem("zdt1", 3), 1, np.random.default_rng(0))


def test_front_sampling_is_seed_deterministic():
    problem = get_problem("dtlz3", 10)
    a = sample_true_pf(problem, 100, np.random.default_rng(9)).points
    b = sample_true_pf(problem, 100, np.random.default_rng(9)).points
    np.testing.assert_array_equal(a, b)


def test_reference_front_is_stable_across_calls():
    assert problem_seed("zdt1") == problem_seed("ZDT1")
    first = reference_front("dtlz2", 10, 3, 100)
    reference_front.cache_clear()
    second = reference_front("dtlz2", 10, 3, 100)
    np.testing.assert_array_equal(first.points, second.points)
