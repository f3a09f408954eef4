"""Unit Tests for the Rank-Sum Test

Run: pytest tests/indicators/test_statistics.py
"""

import numpy as np
import pytest

from src.indicators.statistics import Direction, wilcoxon_rank_sum
from src.utils.errors import InvalidArgumentError


def test_identical_samples_are_not_significant():
    sample = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6]
    result = wilcoxon_rank_sum(sample, sample)
    assert not result.significant
    assert result.direction is Direction.NONE


def test_all_equal_values():
    result = wilcoxon_rank_sum([1.0] * 6, [1.0] * 6)
    assert not result.significant
    assert result.p_value == 1.0


def test_separated_samples(rng):
    a = rng.random(20)
    b = 10.0 + rng.random(20)
    result = wilcoxon_rank_sum(a, b)
    assert result.significant
    assert result.direction is Direction.A_LOWER
    assert result.statistic == pytest.approx(sum(range(1, 21)))


def test_swapping_flips_direction(rng):
    a, b = rng.random(11), rng.random(11) + 0.8
    forward, backward = wilcoxon_rank_sum(a, b), wilcoxon_rank_sum(b, a)
    assert forward.significant == backward.significant
    assert forward.p_value == pytest.approx(backward.p_value)
    assert {forward.direction, backward.direction} == {Direction.A_LOWER, Direction.A_HIGHER}


def test_overlapping_samples_are_not_significant():
    a = np.arange(10, dtype=float)
    b = a + 0.5
    assert not wilcoxon_rank_sum(a, b).significant


def test_undersized_samples_and_bad_alpha():
    with pytest.raises(InvalidArgumentError):
        wilcoxon_rank_sum([1.0, 2.0, 3.0, 4.0], [1.0, 2.0, 3.0, 4.0, 5.0])
    with pytest.raises(InvalidArgumentError):
        wilcoxon_rank_sum([1.0] * 5, [2.0] * 5, alpha=1.5)
