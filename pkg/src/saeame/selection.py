"""Subset Selection - Pick the solutions that get true evaluations

Self-Explanatory: Candidates from the surrogate-side NSGA-II run are ranked twice by
hypervolume contribution: once on their predicted means S^o, once on the optimistic box
corners S^l = mean - box_coeff * spread. The top-k index sets are intersected (or united).
How:
- Candidates that duplicate the training set, or each other, are removed first
- HV is computed in objective space min-max normalized over S^o and S^l together, with
  the reference point at the normalized nadir plus 10% of the range
- Empty intersection: alternate the best remaining S^o / S^l picks until k are chosen
- Output is ordered by S^o rank, so a budget truncation keeps the best prefix
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import structlog

from src.indicators.hypervolume import default_reference_point, hypervolume_contributions, minmax_normalize
from src.saeame.archive import TrainingSet
from src.utils.errors import InvalidArgumentError

logger = structlog.get_logger()

DEFAULT_K = 10
DEFAULT_BOX_COEFF = 2.0


@dataclass(frozen=True)
class CandidateSet:
    solutions: np.ndarray
    predicted_means: np.ndarray
    lower_vertices: np.ndarray
    k: int = DEFAULT_K

    def __post_init__(self):
        sizes = {self.solutions.shape[0], self.predicted_means.shape[0], self.lower_vertices.shape[0]}
        if len(sizes) != 1:
            raise InvalidArgumentError("solutions, predicted means and lower vertices must be index-aligned")
        if self.k < 1:
            raise InvalidArgumentError(f"k must be >= 1, got {self.k}")

    @classmethod
    def from_predictions(cls, solutions, means, spreads, box_coeff: float = DEFAULT_BOX_COEFF, k: int = DEFAULT_K):
        solutions = np.atleast_2d(np.asarray(solutions, dtype=float))
        means = np.atleast_2d(np.asarray(means, dtype=float))
        return cls(solutions, means, means - box_coeff * np.asarray(spreads, dtype=float), k)

    @property
    def size(self) -> int:
        return int(self.solutions.shape[0])


@dataclass(frozen=True)
class SelectionResult:
    solutions: np.ndarray
    indices: List[int]
    fallback: bool = False


def top_k(values: Sequence[float], k: int) -> List[int]:
    """Indices of the k largest values; ties keep index order"""
    order = np.argsort(-np.asarray(values, dtype=float), kind="stable")
    return [int(i) for i in order[:k]]


def combine_top_k(top_o: Sequence[int], top_l: Sequence[int], k: int, union: bool = False):
    """Merge two ranked index lists; returns (indices in S^o order, fallback used)"""
    if union:
        merged = list(top_o) + [i for i in top_l if i not in top_o]
        return merged, False
    in_l = set(top_l)
    common = [i for i in top_o if i in in_l]
    if common:
        return common, False

    chosen: List[int] = []
    for pair in zip(top_o, top_l):
        for i in pair:
            if i not in chosen and len(chosen) < k:
                chosen.append(i)
    return chosen, True


def subset_selection(
    candidates: CandidateSet,
    k: Optional[int] = None,
    training: Optional[TrainingSet] = None,
    union: bool = False,
) -> SelectionResult:
    if candidates.size == 0:
        raise InvalidArgumentError("subset selection needs at least one candidate")
    k = candidates.k if k is None else int(k)
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")

    if training is not None:
        novel = np.flatnonzero(training.novel_mask(candidates.solutions))
    else:
        novel = np.arange(candidates.size)
    if novel.size == 0:
        logger.warning("Every candidate duplicates the training set", candidates=candidates.size)
        return SelectionResult(solutions=np.empty((0, candidates.solutions.shape[1])), indices=[])

    S_o = candidates.predicted_means[novel]
    S_l = candidates.lower_vertices[novel]
    stacked = np.vstack([S_o, S_l])
    ideal, nadir = stacked.min(axis=0), stacked.max(axis=0)
    S_o_norm = minmax_normalize(S_o, ideal, nadir)
    S_l_norm = minmax_normalize(S_l, ideal, nadir)
    ref = default_reference_point(np.vstack([S_o_norm, S_l_norm]))

    hvc_o = hypervolume_contributions(S_o_norm, ref)
    hvc_l = hypervolume_contributions(S_l_norm, ref)
    local, fallback = combine_top_k(top_k(hvc_o, k), top_k(hvc_l, k), k, union)
    if fallback:
        logger.warning("Empty top-k intersection, alternating S^o and S^l picks", k=k, chosen=len(local))

    indices = [int(novel[i]) for i in local]
    return SelectionResult(solutions=candidates.solutions[indices].copy(), indices=indices, fallback=fallback)
