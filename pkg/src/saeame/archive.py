"""Training Set & Expensive Evaluator - Budgeted access to the true objectives

Self-Explanatory: The only path from an optimizer to `Problem.evaluate_batch`. Every call
is charged to the FE budget, logged with its iteration and phase, and appended to the
duplicate-free training set D that the surrogates are fitted on.

Phases:
- init: initial Latin hypercube design
- probe: correlation-analysis evaluations (sentinel plus one perturbation per variable)
- search: solutions chosen by subset selection
- fill: uniform sample used when no novel candidate survives selection
"""

from dataclasses import dataclass
from enum import Enum
from typing import List

import numpy as np
import structlog
from scipy.spatial.distance import cdist

from src.indicators.hypervolume import nondominated_mask
from src.problems.benchmarks import Problem
from src.utils.errors import BudgetExceededError, InvalidArgumentError
from src.utils.metrics import record_evaluations, training_set_size

logger = structlog.get_logger()

DEDUP_TOLERANCE = 1e-9


class Phase(str, Enum):
    INIT = "init"
    PROBE = "probe"
    SEARCH = "search"
    FILL = "fill"


@dataclass(frozen=True)
class Evaluation:
    """One charged FE"""
    iteration: int
    fe_index: int
    phase: Phase
    x: np.ndarray
    f: np.ndarray


@dataclass(frozen=True)
class Archive:
    """Decision vectors and objective vectors of a mutually non-dominated set"""
    decisions: np.ndarray
    objectives: np.ndarray

    @property
    def size(self) -> int:
        return int(self.objectives.shape[0])


class TrainingSet:
    """Evaluated (x, F(x)) pairs with no duplicate decision vectors"""

    def __init__(self, n: int, m: int, tolerance: float = DEDUP_TOLERANCE):
        self.n = n
        self.m = m
        self.tolerance = tolerance
        self.fe_count = 0
        self._X = np.empty((0, n))
        self._F = np.empty((0, m))

    def __len__(self) -> int:
        return int(self._X.shape[0])

    @property
    def X(self) -> np.ndarray:
        return self._X

    @property
    def F(self) -> np.ndarray:
        return self._F

    def novel_mask(self, X) -> np.ndarray:
        """True for rows of X farther than `tolerance` from every stored vector and every earlier row"""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        novel = np.ones(X.shape[0], dtype=bool)
        if len(self):
            novel &= cdist(X, self._X).min(axis=1) > self.tolerance
        if X.shape[0] > 1:
            pairwise = cdist(X, X)
            for i in range(1, X.shape[0]):
                if novel[i] and np.any(pairwise[i, :i][novel[:i]] <= self.tolerance):
                    novel[i] = False
        return novel

    def add(self, x, f) -> bool:
        """Insert one pair; returns False (and stores nothing) for a duplicate decision vector"""
        x = np.asarray(x, dtype=float).ravel()
        f = np.asarray(f, dtype=float).ravel()
        if x.size != self.n or f.size != self.m:
            raise InvalidArgumentError(f"expected ({self.n}, {self.m}) sized pair, got ({x.size}, {f.size})")
        if not self.novel_mask(x[None, :])[0]:
            logger.debug("Duplicate decision vector dropped", size=len(self))
            return False
        self._X = np.vstack([self._X, x])
        self._F = np.vstack([self._F, f])
        return True

    def nondominated(self) -> Archive:
        mask = nondominated_mask(self._F)
        return Archive(decisions=self._X[mask].copy(), objectives=self._F[mask].copy())


class ExpensiveEvaluator:
    """Charges every true evaluation against a fixed FE budget"""

    def __init__(self, problem: Problem, budget: int, training: TrainingSet, algorithm: str = "saeame"):
        if budget < 1:
            raise InvalidArgumentError(f"budget must be >= 1, got {budget}")
        self.problem = problem
        self.budget = int(budget)
        self.training = training
        self.algorithm = algorithm
        self.log: List[Evaluation] = []

    @property
    def remaining(self) -> int:
        return self.budget - self.training.fe_count

    def evaluate(self, X, iteration: int, phase: Phase) -> np.ndarray:
        phase = Phase(phase)
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[0] > self.remaining:
            logger.error("FE budget exhausted", requested=X.shape[0], remaining=self.remaining, phase=phase.value)
            raise BudgetExceededError(f"{X.shape[0]} evaluations requested, {self.remaining} left of {self.budget}")
        F = self.problem.evaluate_batch(X)
        for x, f in zip(X, F):
            self.training.fe_count += 1
            self.log.append(Evaluation(iteration, self.training.fe_count, phase, x.copy(), f.copy()))
            self.training.add(x, f)
        record_evaluations(self.algorithm, self.problem.id, X.shape[0])
        training_set_size.set(len(self.training))
        return F
