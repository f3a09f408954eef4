"""Benchmark Problems - ZDT and DTLZ test suites for expensive MOO

Self-Explanatory: Box-bounded multi-objective test functions with known Pareto fronts.
Why: The optimizer is validated on ZDT1-4, ZDT6 (2 objectives) and DTLZ1-7 (3 objectives).
How: Each problem is a small class with a vectorized `_objectives(X)`; the public
`evaluate`/`evaluate_batch` methods validate shape and bounds first.

Conventions:
- All objectives are minimized.
- DTLZ uses k = n - m + 1 distance variables (the last k genes).
- ZDT5 is binary-coded and not provided.
- True-front samplers: ZDT fronts on a uniform f1 grid, DTLZ fronts by random
  sphere/simplex sampling driven by the caller's numpy Generator.
"""

import hashlib
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Tuple

import numpy as np
import structlog

from src.utils.errors import InvalidArgumentError, UnsupportedProblemError

logger = structlog.get_logger()

# Configuration
DEFAULT_PF_POINTS = 1000
BOUND_TOLERANCE = 1e-12
FRONT_GRID_SIZE = 200_001  # resolution for the disconnected ZDT3 / DTLZ7 fronts
ZDT6_F1_MIN = 0.2807753191


@dataclass(frozen=True)
class ParetoFrontSample:
    """Points on the analytically known Pareto front"""
    points: np.ndarray

    @property
    def count(self) -> int:
        return int(self.points.shape[0])


@dataclass(frozen=True, eq=False)
class Problem:
    """Box-bounded MOP: minimize F(x) = (f_1..f_m) for x in prod [lower_i, upper_i]"""
    id: str
    n: int
    m: int
    lower: np.ndarray = field(repr=False)
    upper: np.ndarray = field(repr=False)

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        if lower.shape != (self.n,) or upper.shape != (self.n,):
            raise InvalidArgumentError(f"{self.id}: bounds must have length n={self.n}")
        if not np.all(lower < upper):
            raise InvalidArgumentError(f"{self.id}: every lower bound must be below its upper bound")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    # ------------------------------------------------------------------
    # Evaluation
    # ------------------------------------------------------------------

    def evaluate(self, x) -> np.ndarray:
        """F(x) for one in-bounds decision vector"""
        x = np.asarray(x, dtype=float)
        if x.ndim != 1:
            raise InvalidArgumentError(f"{self.id}: expected a 1-D decision vector, got shape {x.shape}")
        return self.evaluate_batch(x[None, :])[0]

    def evaluate_batch(self, X) -> np.ndarray:
        """F for each row of X (shape (p, n)) -> (p, m)"""
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n:
            logger.error("Dimension mismatch", problem=self.id, expected=self.n, shape=X.shape)
            raise InvalidArgumentError(f"{self.id}: expected vectors of length {self.n}, got shape {X.shape}")
        if np.any(X < self.lower - BOUND_TOLERANCE) or np.any(X > self.upper + BOUND_TOLERANCE):
            logger.error("Out-of-bounds input", problem=self.id)
            raise InvalidArgumentError(f"{self.id}: input outside the decision box; clamp first")
        return self._objectives(np.clip(X, self.lower, self.upper))

    def _objectives(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    # ------------------------------------------------------------------
    # True Pareto front
    # ------------------------------------------------------------------

    def sample_true_pf(self, count: int, rng: np.random.Generator) -> ParetoFrontSample:
        if count < 2:
            raise InvalidArgumentError("Pareto-front sample needs at least 2 points")
        return ParetoFrontSample(points=self._front(int(count), rng))

    def _front(self, count: int, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError


# ============================================================================
# ZDT SUITE (2 objectives)
# ============================================================================


class _Zdt(Problem):
    def _g(self, X: np.ndarray) -> np.ndarray:
        return 1.0 + 9.0 * X[:, 1:].sum(axis=1) / (self.n - 1)


class Zdt1(_Zdt):
    def _objectives(self, X):
        f1 = X[:, 0]
        g = self._g(X)
        return np.column_stack([f1, g * (1.0 - np.sqrt(f1 / g))])

    def _front(self, count, rng):
        f1 = np.linspace(0.0, 1.0, count)
        return np.column_stack([f1, 1.0 - np.sqrt(f1)])


class Zdt2(_Zdt):
    def _objectives(self, X):
        f1 = X[:, 0]
        g = self._g(X)
        return np.column_stack([f1, g * (1.0 - (f1 / g) ** 2)])

    def _front(self, count, rng):
        f1 = np.linspace(0.0, 1.0, count)
        return np.column_stack([f1, 1.0 - f1 ** 2])


class Zdt3(_Zdt):
    def _objectives(self, X):
        f1 = X[:, 0]
        g = self._g(X)
        h = 1.0 - np.sqrt(f1 / g) - (f1 / g) * np.sin(10.0 * np.pi * f1)
        return np.column_stack([f1, g * h])

    def _front(self, count, rng):
        # f1 is optimal exactly where f2 sets a strict running minimum along the f1 axis
        grid = np.linspace(0.0, 1.0, FRONT_GRID_SIZE)
        f2 = 1.0 - np.sqrt(grid) - grid * np.sin(10.0 * np.pi * grid)
        keep = _strict_running_extreme(f2, lower_is_better=True)
        return _thin(np.column_stack([grid[keep], f2[keep]]), count)


class Zdt4(_Zdt):
    def _g(self, X):
        rest = X[:, 1:]
        return 1.0 + 10.0 * (self.n - 1) + (rest ** 2 - 10.0 * np.cos(4.0 * np.pi * rest)).sum(axis=1)

    def _objectives(self, X):
        f1 = X[:, 0]
        g = self._g(X)
        return np.column_stack([f1, g * (1.0 - np.sqrt(f1 / g))])

    def _front(self, count, rng):
        f1 = np.linspace(0.0, 1.0, count)
        return np.column_stack([f1, 1.0 - np.sqrt(f1)])


class Zdt6(_Zdt):
    def _g(self, X):
        return 1.0 + 9.0 * (X[:, 1:].sum(axis=1) / (self.n - 1)) ** 0.25

    def _objectives(self, X):
        x1 = X[:, 0]
        f1 = 1.0 - np.exp(-4.0 * x1) * np.sin(6.0 * np.pi * x1) ** 6
        g = self._g(X)
        return np.column_stack([f1, g * (1.0 - (f1 / g) ** 2)])

    def _front(self, count, rng):
        f1 = np.linspace(ZDT6_F1_MIN, 1.0, count)
        return np.column_stack([f1, 1.0 - f1 ** 2])


# ============================================================================
# DTLZ SUITE (m objectives, k = n - m + 1 distance variables)
# ============================================================================


class _Dtlz(Problem):
    @property
    def k(self) -> int:
        return self.n - self.m + 1

    def _rastrigin_g(self, XM):
        return 100.0 * (self.k + ((XM - 0.5) ** 2 - np.cos(20.0 * np.pi * (XM - 0.5))).sum(axis=1))

    @staticmethod
    def _sphere_g(XM):
        return ((XM - 0.5) ** 2).sum(axis=1)

    def _spherical(self, theta: np.ndarray, g: np.ndarray) -> np.ndarray:
        """Map angles (p, m-1) in [0, pi/2] to the (1+g)-radius sphere"""
        p = theta.shape[0]
        F = np.empty((p, self.m))
        cos_t, sin_t = np.cos(theta), np.sin(theta)
        for i in range(self.m):
            f = 1.0 + g
            f = f * np.prod(cos_t[:, : self.m - 1 - i], axis=1)
            if i > 0:
                f = f * sin_t[:, self.m - 1 - i]
            F[:, i] = f
        return F

    def _sphere_front(self, count, rng):
        pts = np.abs(rng.standard_normal((count, self.m)))
        pts[np.all(pts == 0.0, axis=1)] = 1.0
        return pts / np.linalg.norm(pts, axis=1, keepdims=True)


class Dtlz1(_Dtlz):
    def _objectives(self, X):
        XP, XM = X[:, : self.m - 1], X[:, self.m - 1:]
        g = self._rastrigin_g(XM)
        p = X.shape[0]
        F = np.empty((p, self.m))
        for i in range(self.m):
            f = 0.5 * (1.0 + g) * np.prod(XP[:, : self.m - 1 - i], axis=1)
            if i > 0:
                f = f * (1.0 - XP[:, self.m - 1 - i])
            F[:, i] = f
        return F

    def _front(self, count, rng):
        return 0.5 * rng.dirichlet(np.ones(self.m), size=count)


class Dtlz2(_Dtlz):
    def _objectives(self, X):
        g = self._sphere_g(X[:, self.m - 1:])
        return self._spherical(X[:, : self.m - 1] * np.pi / 2.0, g)

    def _front(self, count, rng):
        return self._sphere_front(count, rng)


class Dtlz3(_Dtlz):
    def _objectives(self, X):
        g = self._rastrigin_g(X[:, self.m - 1:])
        return self._spherical(X[:, : self.m - 1] * np.pi / 2.0, g)

    def _front(self, count, rng):
        return self._sphere_front(count, rng)


class Dtlz4(_Dtlz):
    alpha = 100.0

    def _objectives(self, X):
        g = self._sphere_g(X[:, self.m - 1:])
        return self._spherical(X[:, : self.m - 1] ** self.alpha * np.pi / 2.0, g)

    def _front(self, count, rng):
        return self._sphere_front(count, rng)


class Dtlz5(_Dtlz):
    def _g(self, XM):
        return self._sphere_g(XM)

    def _objectives(self, X):
        g = self._g(X[:, self.m - 1:])
        XP = X[:, : self.m - 1]
        theta = np.empty_like(XP)
        theta[:, 0] = XP[:, 0] * np.pi / 2.0
        if self.m > 2:
            theta[:, 1:] = (np.pi / (4.0 * (1.0 + g)))[:, None] * (1.0 + 2.0 * g[:, None] * XP[:, 1:])
        return self._spherical(theta, g)

    def _front(self, count, rng):
        # Degenerate curve: g = 0 pins every angle but the first to pi/4
        theta = np.full((count, self.m - 1), np.pi / 4.0)
        theta[:, 0] = np.sort(rng.uniform(0.0, np.pi / 2.0, size=count))
        return self._spherical(theta, np.zeros(count))


class Dtlz6(Dtlz5):
    def _g(self, XM):
        return (XM ** 0.1).sum(axis=1)


class Dtlz7(_Dtlz):
    def _objectives(self, X):
        XP, XM = X[:, : self.m - 1], X[:, self.m - 1:]
        g = 1.0 + 9.0 / self.k * XM.sum(axis=1)
        h = self.m - (XP / (1.0 + g[:, None]) * (1.0 + np.sin(3.0 * np.pi * XP))).sum(axis=1)
        return np.column_stack([XP, (1.0 + g) * h])

    @staticmethod
    def _phi(t):
        return t / 2.0 * (1.0 + np.sin(3.0 * np.pi * t))

    def _front(self, count, rng):
        # The last objective is separable in f_1..f_{m-1}, so a point is Pareto-optimal
        # iff every coordinate sets a strict running maximum of phi
        grid = np.linspace(0.0, 1.0, FRONT_GRID_SIZE)
        efficient = grid[_strict_running_extreme(self._phi(grid), lower_is_better=False)]
        XP = rng.choice(efficient, size=(count, self.m - 1))
        last = 2.0 * (self.m - self._phi(XP).sum(axis=1))
        return np.column_stack([XP, last])


# ============================================================================
# HELPERS
# ============================================================================


def _strict_running_extreme(values: np.ndarray, lower_is_better: bool) -> np.ndarray:
    """Mask of entries strictly better than every earlier entry"""
    v = values if lower_is_better else -values
    previous_best = np.concatenate([[np.inf], np.minimum.accumulate(v)[:-1]])
    return v < previous_best


def _thin(points: np.ndarray, count: int) -> np.ndarray:
    idx = np.unique(np.round(np.linspace(0, points.shape[0] - 1, count)).astype(int))
    return points[idx]


# ============================================================================
# REGISTRY
# ============================================================================

_ZDT: Dict[str, Callable[..., Problem]] = {
    "zdt1": Zdt1, "zdt2": Zdt2, "zdt3": Zdt3, "zdt4": Zdt4, "zdt6": Zdt6,
}
_DTLZ: Dict[str, Callable[..., Problem]] = {
    "dtlz1": Dtlz1, "dtlz2": Dtlz2, "dtlz3": Dtlz3, "dtlz4": Dtlz4,
    "dtlz5": Dtlz5, "dtlz6": Dtlz6, "dtlz7": Dtlz7,
}
PROBLEM_IDS = tuple(_ZDT) + tuple(_DTLZ)


def get_problem(problem_id: str, n: int, m: int = 3) -> Problem:
    """Build a benchmark instance; `m` only applies to DTLZ (ZDT is always bi-objective)"""
    key = problem_id.lower()
    if key in _ZDT:
        if n < 2:
            raise InvalidArgumentError(f"{key} needs n >= 2, got {n}")
        lower = np.zeros(n)
        upper = np.ones(n)
        if key == "zdt4":
            lower[1:], upper[1:] = -5.0, 5.0
        return _ZDT[key](id=key, n=n, m=2, lower=lower, upper=upper)
    if key in _DTLZ:
        if m < 2 or n < m:
            raise InvalidArgumentError(f"{key} needs 2 <= m <= n, got n={n}, m={m}")
        return _DTLZ[key](id=key, n=n, m=m, lower=np.zeros(n), upper=np.ones(n))
    logger.error("Unknown problem id", problem_id=problem_id)
    raise UnsupportedProblemError(f"Unknown problem id: {problem_id!r}; choose from {', '.join(PROBLEM_IDS)}")


def evaluate(problem: Problem, x) -> np.ndarray:
    return problem.evaluate(x)


def bounds(problem: Problem) -> Tuple[np.ndarray, np.ndarray]:
    return problem.lower.copy(), problem.upper.copy()


def sample_true_pf(problem: Problem, count: int, rng: np.random.Generator) -> ParetoFrontSample:
    return problem.sample_true_pf(count, rng)


def problem_seed(problem_id: str) -> int:
    """Stable per-problem seed so IGD reference sets match across runs and processes"""
    return int(hashlib.sha256(problem_id.lower().encode()).hexdigest()[:8], 16)


@lru_cache(maxsize=64)
def reference_front(problem_id: str, n: int, m: int, count: int = DEFAULT_PF_POINTS) -> ParetoFrontSample:
    """Fixed-seed IGD reference set for a problem instance (cached per process)"""
    problem = get_problem(problem_id, n, m)
    sample = problem.sample_true_pf(count, np.random.default_rng(problem_seed(problem_id)))
    logger.info("Reference front sampled", problem=problem_id, n=n, m=problem.m, count=sample.count)
    return sample
