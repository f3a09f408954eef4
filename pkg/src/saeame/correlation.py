"""Correlation Analysis - Which decision variables move which objective

Self-Explanatory: One sentinel at the lower bounds plus one probe per variable (that variable
pushed to its upper bound) gives, per objective, the set of variables whose change moves it.
Why: Each objective's GP is then fitted only on its own variables, so an objective that
depends on a handful of the n variables gets a low-dimensional model.
How: n + 1 true evaluations, all charged to the budget and added to the training set.
Variable i joins group j when |f_j(probe_i) - f_j(sentinel)| >= delta; `literal=True`
uses the inverted test (< delta) instead. An empty group falls back to all variables.

Group check (no evaluations): a probe only compares the two ends of a variable's range, so
an objective symmetric about the midpoint (DTLZ distance terms, ZDT4's g) looks independent
of it. `refine_groups` fits a GP with learned noise on each group over points that were
already evaluated; dependence outside the group shows up as noise, and a group whose noise
share exceeds the threshold is widened to all variables.
"""

from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

import numpy as np
import structlog

from src.problems.benchmarks import Problem
from src.saeame.archive import ExpensiveEvaluator, Phase
from src.surrogate.gp import GpSearchConfig, fit_surrogate
from src.utils.errors import BudgetExceededError, NumericalFailureError

logger = structlog.get_logger()

DEFAULT_DELTA = 1e-6
DEFAULT_NOISE_THRESHOLD = 1e-2
MIN_REFINE_POINTS = 10


@dataclass(frozen=True)
class CorrelationGroups:
    """Per-objective variable index sets (0-based)"""
    groups: Tuple[Tuple[int, ...], ...]
    delta: float
    probe_cost: int
    repaired: Tuple[int, ...] = ()
    widened: Tuple[int, ...] = ()

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(len(g) for g in self.groups)


def correlation_analysis(
    problem: Problem,
    delta: float,
    evaluator: ExpensiveEvaluator,
    literal: bool = False,
    iteration: int = 0,
) -> CorrelationGroups:
    n = problem.n
    if evaluator.remaining < n + 1:
        logger.error("Not enough budget for correlation analysis", needed=n + 1, remaining=evaluator.remaining)
        raise BudgetExceededError(f"correlation analysis needs {n + 1} evaluations, {evaluator.remaining} left")

    sentinel = problem.lower.copy()
    probes = np.tile(sentinel, (n, 1))
    probes[np.arange(n), np.arange(n)] = problem.upper

    f_sentinel = evaluator.evaluate(sentinel, iteration, Phase.PROBE)[0]
    f_probes = evaluator.evaluate(probes, iteration, Phase.PROBE)
    change = np.abs(f_probes - f_sentinel)
    correlated = change < delta if literal else change >= delta

    groups = []
    repaired = []
    for j in range(problem.m):
        members = tuple(int(i) for i in np.flatnonzero(correlated[:, j]))
        if not members:
            logger.warning("Empty correlation group, using all variables", objective=j + 1, delta=delta)
            members = tuple(range(n))
            repaired.append(j)
        groups.append(members)

    result = CorrelationGroups(groups=tuple(groups), delta=delta, probe_cost=n + 1, repaired=tuple(repaired))
    logger.info("Correlation groups found", problem=problem.id, dims=list(result.dims), repaired=repaired)
    return result


def refine_groups(
    groups: CorrelationGroups,
    X,
    F,
    lower: Sequence[float],
    upper: Sequence[float],
    noise_threshold: float = DEFAULT_NOISE_THRESHOLD,
    search_config: Optional[GpSearchConfig] = None,
) -> CorrelationGroups:
    """Widen every group whose variables leave part of its objective unexplained on (X, F)"""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    F = np.atleast_2d(np.asarray(F, dtype=float))
    n = X.shape[1]
    if X.shape[0] < MIN_REFINE_POINTS:
        logger.info("Too few points for the group check", points=X.shape[0], needed=MIN_REFINE_POINTS)
        return groups

    refined, widened = [], []
    for j, group in enumerate(groups.groups):
        if len(group) == n or np.ptp(F[:, j]) == 0:
            refined.append(group)
            continue
        try:
            surrogate = fit_surrogate(
                X, F[:, j], lower, upper, group, search_config, label=f"f{j + 1}", learn_noise=True
            )
        except NumericalFailureError as exc:
            logger.warning("Group check failed, keeping the probe group", objective=j + 1, error=str(exc))
            refined.append(group)
            continue
        noise_share = surrogate.model.params.noise_fraction
        if noise_share > noise_threshold:
            logger.warning(
                "Objective not explained by its group, using all variables",
                objective=j + 1,
                group=list(group),
                noise_share=noise_share,
            )
            refined.append(tuple(range(n)))
            widened.append(j)
        else:
            refined.append(group)

    result = replace(groups, groups=tuple(refined), widened=tuple(widened))
    logger.info("Correlation groups checked", dims=list(result.dims), widened=widened)
    return result
