"""Hypervolume - Exact HV and per-point HV contributions (minimization)

Self-Explanatory: Lebesgue measure of the region dominated by a point set and bounded by a
reference point, plus each point's exclusive share of it.
Why: Subset selection ranks candidates by HV contribution; benchmarks report HV.
How: WFG-style exclusive-volume decomposition. Points are swept in descending order of the
last objective, so every limit set shares that coordinate and the recursion drops one
dimension per level. Two objectives use the sort-and-sum fast path.

Only points strictly better than the reference in every coordinate contribute; the rest are
filtered before the sweep.
"""

from typing import Optional, Sequence, Tuple

import numpy as np
import structlog

from src.utils.errors import InvalidArgumentError

logger = structlog.get_logger()

MAX_EXACT_DIMENSION = 6
REFERENCE_MARGIN = 0.1
REFERENCE_FLOOR = 1e-6


def _as_points(points, ref) -> Tuple[np.ndarray, np.ndarray]:
    ref = np.asarray(ref, dtype=float).ravel()
    P = np.asarray(points, dtype=float)
    if P.size == 0:
        return np.empty((0, ref.size)), ref
    if P.ndim == 1:
        P = P[None, :]
    if P.shape[1] != ref.size:
        logger.error("HV dimension mismatch", points=P.shape, ref=ref.size)
        raise InvalidArgumentError(f"points have {P.shape[1]} objectives but the reference point has {ref.size}")
    if ref.size > MAX_EXACT_DIMENSION:
        raise InvalidArgumentError(f"exact hypervolume supports at most {MAX_EXACT_DIMENSION} objectives")
    return P, ref


def nondominated_mask(F: np.ndarray) -> np.ndarray:
    """True for rows of F that no other row dominates (duplicates are all kept)"""
    F = np.asarray(F, dtype=float)
    if F.shape[0] <= 1:
        return np.ones(F.shape[0], dtype=bool)
    leq = np.all(F[:, None, :] <= F[None, :, :], axis=2)
    lt = np.any(F[:, None, :] < F[None, :, :], axis=2)
    return ~np.any(leq & lt, axis=0)


def _unique_nondominated(P: np.ndarray) -> np.ndarray:
    P = np.unique(P, axis=0)
    return P[nondominated_mask(P)]


def _hv2d(P: np.ndarray, ref: np.ndarray) -> float:
    order = np.lexsort((P[:, 1], P[:, 0]))
    P = P[order]
    best_f2 = np.minimum.accumulate(P[:, 1])
    upper = np.concatenate([[ref[1]], best_f2[:-1]])
    heights = np.clip(upper - P[:, 1], 0.0, None)
    return float(np.sum((ref[0] - P[:, 0]) * heights))


def _wfg(P: np.ndarray, ref: np.ndarray) -> float:
    """HV of points that are all strictly inside the reference box"""
    if P.shape[0] == 0:
        return 0.0
    d = P.shape[1]
    if d == 1:
        return float(ref[0] - P[:, 0].min())
    if P.shape[0] == 1:
        return float(np.prod(ref - P[0]))
    if d == 2:
        return _hv2d(P, ref)
    P = _unique_nondominated(P)
    P = P[np.argsort(-P[:, -1], kind="stable")]
    total = 0.0
    for i in range(P.shape[0]):
        head = P[i, :-1]
        height = ref[-1] - P[i, -1]
        rest = P[i + 1:, :-1]
        inclusive = float(np.prod(ref[:-1] - head))
        if rest.shape[0]:
            limited = np.maximum(rest, head)
            limited = limited[np.all(limited < ref[:-1], axis=1)]
            inclusive -= _wfg(_unique_nondominated(limited), ref[:-1]) if limited.shape[0] else 0.0
        total += height * inclusive
    return total


def hypervolume(points, ref) -> float:
    """Exact hypervolume of `points` w.r.t. `ref`; 0 for an empty set"""
    P, ref = _as_points(points, ref)
    if P.shape[0] == 0:
        return 0.0
    P = P[np.all(P < ref, axis=1)]
    return _wfg(P, ref)


def _exclusive(point: np.ndarray, others: np.ndarray, ref: np.ndarray) -> float:
    if np.any(point >= ref):
        return 0.0
    inclusive = float(np.prod(ref - point))
    if others.shape[0] == 0:
        return inclusive
    limited = np.maximum(others, point)
    limited = limited[np.all(limited < ref, axis=1)]
    if limited.shape[0] == 0:
        return inclusive
    return max(inclusive - _wfg(_unique_nondominated(limited), ref), 0.0)


def hypervolume_contribution(points, ref, index: int) -> float:
    """HV(S) - HV(S without point `index`)"""
    P, ref = _as_points(points, ref)
    if not 0 <= index < P.shape[0]:
        raise InvalidArgumentError(f"index {index} out of range for {P.shape[0]} points")
    return _exclusive(P[index], np.delete(P, index, axis=0), ref)


def hypervolume_contributions(points, ref) -> np.ndarray:
    """Exclusive HV contribution of every point (dominated or duplicated points get 0)"""
    P, ref = _as_points(points, ref)
    return np.array([_exclusive(P[i], np.delete(P, i, axis=0), ref) for i in range(P.shape[0])])


def default_reference_point(points, margin: float = REFERENCE_MARGIN, floor: float = REFERENCE_FLOOR) -> np.ndarray:
    """Nadir of `points` pushed out by `margin` of the per-objective range (at least `floor`)"""
    P = np.asarray(points, dtype=float)
    nadir = P.max(axis=0)
    spread = nadir - P.min(axis=0)
    return nadir + np.maximum(margin * spread, floor)


def minmax_normalize(points, ideal: Optional[Sequence[float]] = None, nadir: Optional[Sequence[float]] = None) -> np.ndarray:
    """Scale each objective to [0, 1]; zero-range objectives are only shifted"""
    P = np.asarray(points, dtype=float)
    lo = P.min(axis=0) if ideal is None else np.asarray(ideal, dtype=float)
    hi = P.max(axis=0) if nadir is None else np.asarray(nadir, dtype=float)
    span = np.where(hi - lo > 0.0, hi - lo, 1.0)
    return (P - lo) / span
