"""Per-objective surrogates and the transformed 2m-objective problem

Objective i contributes two surrogate objectives: its predicted mean and the bound
mean - c * spread, in that order.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog

from src.saeame.archive import TrainingSet
from src.saeame.correlation import CorrelationGroups
from src.surrogate.acquisition import SpreadMode, spread
from src.surrogate.gp import GpSearchConfig, Surrogate, fit_surrogate
from src.utils.errors import InvalidArgumentError, NumericalFailureError

logger = structlog.get_logger()


@dataclass(frozen=True)
class TransformedObjectives:
    values: np.ndarray
    lcb_coeff: float

    @property
    def dimension(self) -> int:
        return int(self.values.size)


def build_surrogates(
    training: TrainingSet,
    groups: CorrelationGroups,
    lower: Sequence[float],
    upper: Sequence[float],
    search_config: Optional[GpSearchConfig] = None,
) -> List[Surrogate]:
    """One GP per objective, fitted on that objective's variable group"""
    if len(training) == 0:
        raise InvalidArgumentError("cannot build surrogates from an empty training set")
    models = []
    for j, group in enumerate(groups.groups):
        try:
            models.append(
                fit_surrogate(training.X, training.F[:, j], lower, upper, group, search_config, label=f"f{j + 1}")
            )
        except NumericalFailureError as exc:
            logger.error("Surrogate fit failed", objective=j + 1, **exc.diagnostics)
            raise NumericalFailureError(str(exc.args[0]), diagnostics={**exc.diagnostics, "objective": j + 1}) from exc
    logger.debug("Surrogates built", training_size=len(training), dims=[len(g) for g in groups.groups])
    return models


def predict_objectives(models: Sequence[Surrogate], X) -> Tuple[np.ndarray, np.ndarray]:
    """Predicted means and variances, each of shape (p, m)"""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    predictions = [model.predict(X) for model in models]
    means = np.column_stack([p[0] for p in predictions])
    variances = np.column_stack([p[1] for p in predictions])
    return means, variances


def transformed_objectives_batch(
    models: Sequence[Surrogate],
    X,
    lcb_coeff: float,
    spread_mode: SpreadMode = SpreadMode.VARIANCE,
) -> np.ndarray:
    """H(X) with columns (mean_1, bound_1, mean_2, bound_2, ...)"""
    means, variances = predict_objectives(models, X)
    H = np.empty((means.shape[0], 2 * means.shape[1]))
    H[:, 0::2] = means
    H[:, 1::2] = means - lcb_coeff * spread(variances, spread_mode)
    return H


def transformed_objectives(
    models: Sequence[Surrogate],
    x,
    lcb_coeff: float,
    spread_mode: SpreadMode = SpreadMode.VARIANCE,
) -> TransformedObjectives:
    x = np.asarray(x, dtype=float).ravel()
    values = transformed_objectives_batch(models, x[None, :], lcb_coeff, spread_mode)[0]
    return TransformedObjectives(values=values, lcb_coeff=lcb_coeff)
