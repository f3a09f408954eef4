"""Latin hypercube design over a box-bounded decision space"""

from typing import Sequence

import numpy as np

from src.utils.errors import InvalidArgumentError


def latin_hypercube(
    n: int,
    count: int,
    lower: Sequence[float],
    upper: Sequence[float],
    rng: np.random.Generator,
) -> np.ndarray:
    """`count` points; every axis holds exactly one point per equal-width stratum

    Strata are assigned by an independent permutation per axis and each point is
    jittered uniformly inside its stratum.
    """
    if count < 1:
        raise InvalidArgumentError(f"design size must be >= 1, got {count}")
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    if lower.shape != (n,) or upper.shape != (n,):
        raise InvalidArgumentError(f"bounds must have length {n}")

    strata = np.column_stack([rng.permutation(count) for _ in range(n)])
    unit = (strata + rng.random((count, n))) / count
    return lower + unit * (upper - lower)
