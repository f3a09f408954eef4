"""Acquisition Functions - PI, EI and confidence bounds plus the generic GP-SAEA loop

Self-Explanatory: Scores a GP prediction against the incumbent, and runs the classic
one-evaluation-per-iteration surrogate loop (initial design, refit, optimize the
acquisition with a GA, evaluate the winner).
Why: Single-objective baseline and reference for how SAEA/ME's model management differs.
How:
- spread_mode picks the predictive spread s: standard deviation (default) or the raw
  variance, as the formulas are sometimes printed
- `literal=True` switches PI to Phi((mean - f*)/s) and the confidence bound to mean + kappa s;
  the defaults are the minimization-consistent Phi((f* - mean)/s) and mean - kappa s
- The loop minimizes a score: -PI, -EI or the confidence bound itself
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field
from scipy.spatial.distance import cdist
from scipy.stats import norm

from src.moea.ga import ga_minimize
from src.saeame.sampling import latin_hypercube
from src.surrogate.gp import GpSearchConfig, Prediction, ValidatedParams, fit_surrogate
from src.utils.errors import InvalidArgumentError

logger = structlog.get_logger()

DUPLICATE_TOLERANCE = 1e-12


class SpreadMode(str, Enum):
    STDDEV = "stddev"
    VARIANCE = "variance"


class AcquisitionKind(str, Enum):
    PI = "pi"
    EI = "ei"
    UCB = "ucb"


def spread(variance, mode: SpreadMode = SpreadMode.STDDEV):
    """Predictive spread used by the acquisition formulas (array or scalar)"""
    variance = np.maximum(np.asarray(variance, dtype=float), 0.0)
    return variance if SpreadMode(mode) is SpreadMode.VARIANCE else np.sqrt(variance)


# ============================================================================
# DOMAIN TYPES
# ============================================================================


@dataclass(frozen=True)
class Incumbent:
    best_input: np.ndarray
    best_value: float

    @classmethod
    def from_log(cls, X, y) -> "Incumbent":
        """Best entry of an evaluation log; the earliest wins ties"""
        y = np.asarray(y, dtype=float).ravel()
        if y.size == 0:
            raise InvalidArgumentError("cannot take the incumbent of an empty log")
        best = int(np.argmin(y))
        return cls(best_input=np.atleast_2d(np.asarray(X, dtype=float))[best].copy(), best_value=float(y[best]))


class UcbParams(ValidatedParams):
    kappa: float = Field(default=2.0, ge=0, allow_inf_nan=False)


# ============================================================================
# VECTORIZED FORMULAS
# ============================================================================


def _pi(mean, s, best, literal: bool):
    mean, s = np.asarray(mean, dtype=float), np.asarray(s, dtype=float)
    gap = mean - best if literal else best - mean
    safe_s = np.where(s > 0, s, 1.0)
    return np.where(s > 0, norm.cdf(gap / safe_s), (gap > 0).astype(float))


def _ei(mean, s, best):
    mean, s = np.asarray(mean, dtype=float), np.asarray(s, dtype=float)
    gap = best - mean
    safe_s = np.where(s > 0, s, 1.0)
    z = gap / safe_s
    value = gap * norm.cdf(z) + safe_s * norm.pdf(z)
    return np.where(s > 0, np.maximum(value, 0.0), np.maximum(gap, 0.0))


def _cb(mean, s, kappa: float, literal: bool):
    sign = 1.0 if literal else -1.0
    return np.asarray(mean, dtype=float) + sign * kappa * np.asarray(s, dtype=float)


# ============================================================================
# PUBLIC ACQUISITIONS
# ============================================================================


def probability_of_improvement(
    pred: Prediction,
    incumbent: Incumbent,
    spread_mode: SpreadMode = SpreadMode.STDDEV,
    literal: bool = False,
) -> float:
    return float(_pi(pred.mean, spread(pred.variance, spread_mode), incumbent.best_value, literal))


def expected_improvement(
    pred: Prediction,
    incumbent: Incumbent,
    spread_mode: SpreadMode = SpreadMode.STDDEV,
) -> float:
    return float(_ei(pred.mean, spread(pred.variance, spread_mode), incumbent.best_value))


def confidence_bound(
    pred: Prediction,
    params: UcbParams,
    spread_mode: SpreadMode = SpreadMode.STDDEV,
    literal: bool = False,
) -> float:
    return float(_cb(pred.mean, spread(pred.variance, spread_mode), params.kappa, literal))


# ============================================================================
# GENERIC GP-SAEA LOOP
# ============================================================================


class GenericSaeaConfig(BaseModel):
    """Settings of the one-point-per-iteration loop; n_init None means min(11n - 1, budget)"""
    model_config = ConfigDict(extra="forbid")

    n_init: Optional[int] = Field(default=None, ge=1)
    acquisition: AcquisitionKind = AcquisitionKind.EI
    kappa: float = Field(default=2.0, ge=0)
    spread_mode: SpreadMode = SpreadMode.STDDEV
    literal: bool = False
    ga_pop_size: int = Field(default=50, ge=2)
    ga_generations: int = Field(default=50, ge=0)
    gp: GpSearchConfig = Field(default_factory=GpSearchConfig)


def acquisition_score(config: GenericSaeaConfig, mean, variance, best_value: float) -> np.ndarray:
    """Lower is better: negated PI/EI, or the confidence bound as is"""
    s = spread(variance, config.spread_mode)
    if config.acquisition is AcquisitionKind.PI:
        return -_pi(mean, s, best_value, config.literal)
    if config.acquisition is AcquisitionKind.EI:
        return -_ei(mean, s, best_value)
    return _cb(mean, s, config.kappa, config.literal)


ScalarObjective = Callable[[np.ndarray], float]


def generic_saea_log(
    objective: ScalarObjective,
    lower: Sequence[float],
    upper: Sequence[float],
    budget: int,
    rng: np.random.Generator,
    config: Optional[GenericSaeaConfig] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Run the loop and return the full evaluation log (inputs, values) in evaluation order"""
    config = config or GenericSaeaConfig()
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    n = lower.size
    if budget < 1:
        raise InvalidArgumentError(f"budget must be >= 1, got {budget}")
    n_init = min(config.n_init or max(11 * n - 1, 2), budget)

    X = latin_hypercube(n, n_init, lower, upper, rng)
    y = np.array([float(objective(x)) for x in X])
    logger.info("Initial design evaluated", n_init=n_init, budget=budget, best=float(y.min()))

    while y.size < budget:
        surrogate = fit_surrogate(X, y, lower, upper, search_config=config.gp, label="f")
        best_value = float(y.min())

        def score(Z: np.ndarray) -> np.ndarray:
            mean, variance = surrogate.predict(Z)
            return acquisition_score(config, mean, variance, best_value)

        result = ga_minimize(
            score,
            lower,
            upper,
            rng,
            pop_size=config.ga_pop_size,
            generations=config.ga_generations,
            initial=X[np.argmin(y)][None, :],
        )
        x_new = result.best_x
        if cdist(x_new[None, :], X).min() <= DUPLICATE_TOLERANCE:
            logger.warning("Acquisition optimum already evaluated, sampling uniformly", iteration=y.size - n_init)
            x_new = lower + rng.random(n) * (upper - lower)
        y_new = float(objective(x_new))
        X = np.vstack([X, x_new])
        y = np.append(y, y_new)
        logger.debug("Acquisition step", evaluations=y.size, value=y_new, best=float(y.min()))

    return X, y


def run_generic_saea(
    objective: ScalarObjective,
    lower: Sequence[float],
    upper: Sequence[float],
    budget: int,
    rng: np.random.Generator,
    config: Optional[GenericSaeaConfig] = None,
) -> Incumbent:
    """Best evaluated point after spending `budget` evaluations"""
    X, y = generic_saea_log(objective, lower, upper, budget, rng, config)
    return Incumbent.from_log(X, y)


# ============================================================================
# 1-D DEMO FUNCTIONS
# ============================================================================


@dataclass(frozen=True)
class ScalarProblem:
    name: str
    fn: ScalarObjective
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]


def _quadratic(x) -> float:
    return float((np.asarray(x, dtype=float)[0] - 0.3) ** 2)


def _forrester(x) -> float:
    t = float(np.asarray(x, dtype=float)[0])
    return (6.0 * t - 2.0) ** 2 * math.sin(12.0 * t - 4.0)


ONE_D_FUNCTIONS = {
    "quadratic": ScalarProblem("quadratic", _quadratic, (0.0,), (1.0,)),
    "forrester": ScalarProblem("forrester", _forrester, (0.0,), (1.0,)),
}
