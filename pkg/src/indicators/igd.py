"""IGD - Inverted generational distance against a sampled true front

Mean over reference points of the Euclidean distance to the nearest approximation point.
Lower is better; 0 means every reference point is covered exactly.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
import structlog
from scipy.spatial.distance import cdist

from src.problems.benchmarks import ParetoFrontSample
from src.utils.errors import InvalidArgumentError

logger = structlog.get_logger()


@dataclass(frozen=True)
class IndicatorResult:
    name: str
    value: float
    meta: Optional[Dict[str, Any]] = field(default=None, compare=False)


def igd(approximation, reference_front) -> float:
    """(1/|R|) * sum over r in R of min over a in A of ||r - a||"""
    R = reference_front.points if isinstance(reference_front, ParetoFrontSample) else reference_front
    R = np.atleast_2d(np.asarray(R, dtype=float))
    A = np.asarray(approximation, dtype=float)
    if A.size == 0:
        logger.error("IGD called with an empty approximation set")
        raise InvalidArgumentError("IGD needs a non-empty approximation set")
    A = np.atleast_2d(A)
    if R.shape[0] == 0:
        raise InvalidArgumentError("IGD needs a non-empty reference front")
    if A.shape[1] != R.shape[1]:
        raise InvalidArgumentError(f"objective count mismatch: approximation {A.shape[1]}, reference {R.shape[1]}")
    return float(cdist(R, A).min(axis=1).mean())


def igd_result(approximation, reference_front) -> IndicatorResult:
    return IndicatorResult(name="igd", value=igd(approximation, reference_front))
