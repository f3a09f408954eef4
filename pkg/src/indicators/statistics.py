"""Rank-Sum Test - Two-sided Wilcoxon/Mann-Whitney comparison of indicator samples

Why: Result tables mark pairs whose IGD distributions differ at the 5% level.
How: scipy's asymptotic Mann-Whitney U (normal approximation with tie correction,
no continuity correction). The reported statistic is the rank sum of sample a.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
import structlog
from scipy.stats import mannwhitneyu, rankdata

from src.utils.errors import InvalidArgumentError

logger = structlog.get_logger()

MIN_SAMPLE_SIZE = 5
DEFAULT_ALPHA = 0.05


class Direction(str, Enum):
    """Which sample tends to hold the smaller values"""
    A_LOWER = "a_lower"
    A_HIGHER = "a_higher"
    NONE = "none"


@dataclass(frozen=True)
class RankSumResult:
    significant: bool
    direction: Direction
    statistic: float
    p_value: float


def wilcoxon_rank_sum(sample_a, sample_b, alpha: float = DEFAULT_ALPHA) -> RankSumResult:
    a = np.asarray(sample_a, dtype=float).ravel()
    b = np.asarray(sample_b, dtype=float).ravel()
    if a.size < MIN_SAMPLE_SIZE or b.size < MIN_SAMPLE_SIZE:
        logger.error("Rank-sum sample too small", size_a=a.size, size_b=b.size)
        raise InvalidArgumentError(f"rank-sum test needs at least {MIN_SAMPLE_SIZE} values per sample")
    if not 0.0 < alpha < 1.0:
        raise InvalidArgumentError(f"alpha must lie in (0, 1), got {alpha}")

    ranks = rankdata(np.concatenate([a, b]))
    rank_sum_a = float(ranks[: a.size].sum())
    expected = a.size * (a.size + b.size + 1) / 2.0

    pooled = np.concatenate([a, b])
    if np.all(pooled == pooled[0]):
        return RankSumResult(significant=False, direction=Direction.NONE, statistic=rank_sum_a, p_value=1.0)

    p_value = float(mannwhitneyu(a, b, alternative="two-sided", method="asymptotic", use_continuity=False).pvalue)
    if rank_sum_a < expected:
        direction = Direction.A_LOWER
    elif rank_sum_a > expected:
        direction = Direction.A_HIGHER
    else:
        direction = Direction.NONE
    significant = p_value < alpha and direction is not Direction.NONE
    return RankSumResult(significant=significant, direction=direction, statistic=rank_sum_a, p_value=p_value)
