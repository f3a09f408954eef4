"""Unit Tests for IGD"""

import math

import numpy as np
import pytest

from src.indicators.igd import igd, igd_result
from src.problems.benchmarks import get_problem, sample_true_pf
from src.utils.errors import InvalidArgumentError


def test_identical_sets():
    R = np.array([[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]])
    assert igd(R, R) == 0.0


def test_hand_value():
    assert igd([[0.0, 0.0]], [[0.0, 0.0], [1.0, 1.0]]) == pytest.approx(math.sqrt(2.0) / 2.0)


def test_adding_points_never_increases(rng):
    R = rng.random((50, 3))
    A = rng.random((5, 3))
    assert igd(np.vstack([A, rng.random((3, 3))]), R) <= igd(A, R)


def test_permutation_invariance(rng):
    R, A = rng.random((40, 2)), rng.random((7, 2))
    assert igd(A[::-1], R[rng.permutation(40)]) == pytest.approx(igd(A, R), abs=1e-12)


def test_accepts_front_samples():
    sample = sample_true_pf(get_problem("zdt1", 5), 100, np.random.default_rng(0))
    result = igd_result(sample.points, sample)
    assert result.name == "igd"
    assert result.value == 0.0


def test_errors():
    with pytest.raises(InvalidArgumentError):
        igd(np.empty((0, 2)), [[0.0, 0.0]])
    with pytest.raises(InvalidArgumentError):
        igd([[0.0, 0.0]], [[0.0, 0.0, 0.0]])
