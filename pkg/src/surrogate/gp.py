"""Gaussian Process Regression - Isotropic squared-exponential GP surrogate

Self-Explanatory: Kernel evaluation, Cholesky-based fitting, mean/variance prediction and
hyperparameter learning by maximizing the log marginal likelihood.
Why: Every expensive objective is modelled by one GP; the surrogate's mean and
uncertainty drive both the acquisition baseline and SAEA/ME's transformed problem.
How:
- k(x, x') = sigma_f^2 exp(-|x - x'|^2 / (2 l^2)), one length scale for all inputs
- A jitter of 1e-10 sigma_f^2 is always on the diagonal; it grows x10 on failed
  factorizations, up to 1e-4 sigma_f^2, before NumericalFailureError
- Hyperparameters: multi-start bounded Nelder-Mead over (log sigma_f, log l), noise
  fixed at the jitter floor (objectives are deterministic)
- `Surrogate` wraps a model with unit-box input scaling and standardized targets
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from scipy.linalg import LinAlgError, cho_solve, cholesky, solve_triangular
from scipy.optimize import minimize
from scipy.spatial.distance import cdist, pdist

from src.utils.errors import InvalidArgumentError, NumericalFailureError
from src.utils.metrics import gp_fit_duration_seconds, gp_jitter_escalations_total, track_duration

logger = structlog.get_logger()

JITTER_FLOOR = 1e-10
JITTER_CEILING = 1e-4
JITTER_GROWTH = 10.0
LOG_2PI = math.log(2.0 * math.pi)
FAILED_FIT_PENALTY = 1e25
NOISE_FLOOR_RATIO = 1e-4
NOISE_START_RATIO = 1e-2


# ============================================================================
# DOMAIN TYPES
# ============================================================================


class ValidatedParams(BaseModel):
    """Frozen parameter record; out-of-range values raise InvalidArgumentError"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    def __init__(self, **data):
        try:
            super().__init__(**data)
        except ValidationError as exc:
            error = exc.errors()[0]
            name = ".".join(str(part) for part in error["loc"])
            raise InvalidArgumentError(f"{type(self).__name__}.{name}: {error['msg']}") from exc


class KernelParams(ValidatedParams):
    sigma_f: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    length_scale: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    sigma_n: float = Field(default=0.0, ge=0, allow_inf_nan=False)

    @property
    def noise_fraction(self) -> float:
        """Share of the prior variance attributed to observation noise"""
        return self.sigma_n ** 2 / (self.sigma_f ** 2 + self.sigma_n ** 2)


@dataclass(frozen=True)
class Prediction:
    mean: float
    variance: float

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)


@dataclass(frozen=True, eq=False)
class GpModel:
    """Fitted GP; immutable and safe to share between readers"""
    params: KernelParams
    mean_const: float
    train_inputs: np.ndarray
    train_targets: np.ndarray
    chol_factor: np.ndarray
    alpha: np.ndarray
    feature_indices: Tuple[int, ...]
    jitter: float = 0.0

    @property
    def size(self) -> int:
        return int(self.train_inputs.shape[0])

    @property
    def dim(self) -> int:
        return int(self.train_inputs.shape[1])

    @property
    def noise_variance(self) -> float:
        return self.params.sigma_n ** 2 + self.jitter


class GpSearchConfig(BaseModel):
    """Hyperparameter search settings; bound factors scale the data-derived reference values"""
    model_config = ConfigDict(extra="forbid")

    restarts: int = Field(default=5, ge=1)
    max_iter: int = Field(default=100, ge=1)
    bound_factor: float = Field(default=1e3, gt=1)
    seed: int = 0
    xatol: float = Field(default=1e-4, gt=0)
    fatol: float = Field(default=1e-6, gt=0)


# ============================================================================
# KERNEL
# ============================================================================


def kernel(x, x_prime, params: KernelParams) -> float:
    x = np.asarray(x, dtype=float).ravel()
    x_prime = np.asarray(x_prime, dtype=float).ravel()
    if x.shape != x_prime.shape:
        raise InvalidArgumentError(f"kernel inputs differ in length: {x.size} vs {x_prime.size}")
    sq = float(np.sum((x - x_prime) ** 2))
    return params.sigma_f ** 2 * math.exp(-sq / (2.0 * params.length_scale ** 2))


def kernel_matrix(A: np.ndarray, B: np.ndarray, params: KernelParams) -> np.ndarray:
    """Cross-covariance between the rows of A and the rows of B"""
    sq = cdist(A, B, metric="sqeuclidean")
    return params.sigma_f ** 2 * np.exp(-sq / (2.0 * params.length_scale ** 2))


# ============================================================================
# FACTORIZATION
# ============================================================================


def _as_training_data(inputs, targets) -> Tuple[np.ndarray, np.ndarray]:
    X = np.asarray(inputs, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    y = np.asarray(targets, dtype=float).ravel()
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise InvalidArgumentError(f"inputs must be an N x d matrix with N, d >= 1, got shape {X.shape}")
    if y.size != X.shape[0]:
        raise InvalidArgumentError(f"{X.shape[0]} inputs but {y.size} targets")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise InvalidArgumentError("training data contains non-finite values")
    return X, y


def _factorize(X: np.ndarray, params: KernelParams) -> Tuple[np.ndarray, float]:
    """Lower Cholesky factor of K + (sigma_n^2 + jitter) I, escalating the jitter on failure"""
    K = kernel_matrix(X, X, params)
    scale = params.sigma_f ** 2
    jitter = JITTER_FLOOR * scale
    diag = np.arange(X.shape[0])
    while True:
        K_noisy = K.copy()
        K_noisy[diag, diag] += params.sigma_n ** 2 + jitter
        try:
            return cholesky(K_noisy, lower=True, check_finite=False), jitter
        except LinAlgError:
            jitter *= JITTER_GROWTH
            if jitter > JITTER_CEILING * scale * (1.0 + 1e-9):
                raise NumericalFailureError(
                    "covariance matrix is not positive definite after jitter escalation",
                    diagnostics={
                        "n_train": X.shape[0],
                        "sigma_f": params.sigma_f,
                        "length_scale": params.length_scale,
                        "max_jitter": JITTER_CEILING * scale,
                    },
                )
            gp_jitter_escalations_total.inc()
            logger.warning("Cholesky failed, escalating jitter", jitter=jitter, n_train=X.shape[0])


def fit(
    inputs,
    targets,
    params: KernelParams,
    mean_const: float,
    feature_indices: Optional[Sequence[int]] = None,
) -> GpModel:
    """Factorize K + noise once and precompute alpha = (K + noise)^-1 (f - m)"""
    X, y = _as_training_data(inputs, targets)
    X, y = X.copy(), y.copy()
    if feature_indices is None:
        feature_indices = tuple(range(X.shape[1]))
    feature_indices = tuple(int(i) for i in feature_indices)
    if len(feature_indices) != X.shape[1]:
        raise InvalidArgumentError(f"{len(feature_indices)} feature indices for {X.shape[1]} input columns")
    L, jitter = _factorize(X, params)
    alpha = cho_solve((L, True), y - mean_const, check_finite=False)
    X.setflags(write=False)
    y.setflags(write=False)
    return GpModel(
        params=params,
        mean_const=float(mean_const),
        train_inputs=X,
        train_targets=y,
        chol_factor=L,
        alpha=alpha,
        feature_indices=feature_indices,
        jitter=jitter,
    )


# ============================================================================
# PREDICTION
# ============================================================================


def predict_batch(model: GpModel, Z) -> Tuple[np.ndarray, np.ndarray]:
    """Means and variances for every row of Z (rows live in the model's input space)"""
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    if Z.shape[1] != model.dim:
        raise InvalidArgumentError(f"prediction inputs have {Z.shape[1]} columns, model expects {model.dim}")
    K_star = kernel_matrix(model.train_inputs, Z, model.params)
    mean = model.mean_const + K_star.T @ model.alpha
    v = solve_triangular(model.chol_factor, K_star, lower=True, check_finite=False)
    variance = model.params.sigma_f ** 2 - np.sum(v * v, axis=0)
    return mean, np.maximum(variance, 0.0)


def predict(model: GpModel, z) -> Prediction:
    z = np.asarray(z, dtype=float).ravel()
    if z.size != model.dim:
        raise InvalidArgumentError(f"prediction input has length {z.size}, model expects {model.dim}")
    mean, variance = predict_batch(model, z.reshape(1, -1))
    return Prediction(mean=float(mean[0]), variance=float(variance[0]))


# ============================================================================
# LIKELIHOOD AND HYPERPARAMETER SEARCH
# ============================================================================


def log_marginal_likelihood(inputs, targets, params: KernelParams, mean_const: float) -> float:
    X, y = _as_training_data(inputs, targets)
    L, _ = _factorize(X, params)
    r = y - mean_const
    alpha = cho_solve((L, True), r, check_finite=False)
    return float(-0.5 * r @ alpha - np.sum(np.log(np.diag(L))) - 0.5 * X.shape[0] * LOG_2PI)


def _reference_scales(X: np.ndarray, y: np.ndarray) -> Tuple[float, float]:
    """Median pairwise input distance and target std, each falling back to 1 when degenerate"""
    distances = pdist(X) if X.shape[0] > 1 else np.empty(0)
    distances = distances[distances > 0]
    length_ref = float(np.median(distances)) if distances.size else 1.0
    signal_ref = float(np.std(y))
    if not signal_ref > 0:
        signal_ref = 1.0
    return signal_ref, length_ref


def _params_from(theta: np.ndarray) -> KernelParams:
    """(log sigma_f, log l[, log sigma_n]) -> KernelParams"""
    sigma_n = math.exp(theta[2]) if theta.size > 2 else 0.0
    return KernelParams(sigma_f=math.exp(theta[0]), length_scale=math.exp(theta[1]), sigma_n=sigma_n)


def optimize_hyperparameters(
    inputs,
    targets,
    search_config: Optional[GpSearchConfig] = None,
    learn_noise: bool = False,
) -> KernelParams:
    """Best (sigma_f, l) found by multi-start Nelder-Mead on the negative log marginal likelihood

    The prior mean is fixed at the target mean. Starts are the data-derived reference
    point plus uniform draws in log-space; ties on the likelihood go to the earliest start.
    `learn_noise=True` adds sigma_n to the search, bounded to [1e-4, 1] times the target std.
    """
    config = search_config or GpSearchConfig()
    X, y = _as_training_data(inputs, targets)
    if X.shape[0] < 2:
        raise InvalidArgumentError("hyperparameter search needs at least 2 training points")
    mean_const = float(np.mean(y))
    signal_ref, length_ref = _reference_scales(X, y)
    spread = math.log(config.bound_factor)
    center = np.array([math.log(signal_ref), math.log(length_ref)])
    bounds = [(c - spread, c + spread) for c in center]
    if learn_noise:
        noise_bounds = (math.log(NOISE_FLOOR_RATIO * signal_ref), math.log(signal_ref))
        center = np.append(center, math.log(NOISE_START_RATIO * signal_ref))
        bounds.append(noise_bounds)

    def negative_lml(theta: np.ndarray) -> float:
        try:
            value = -log_marginal_likelihood(X, y, _params_from(theta), mean_const)
        except (NumericalFailureError, InvalidArgumentError, OverflowError):
            return FAILED_FIT_PENALTY
        return value if math.isfinite(value) else FAILED_FIT_PENALTY

    rng = np.random.default_rng(config.seed)
    starts = [center]
    for _ in range(config.restarts - 1):
        start = center[:2] + rng.uniform(-0.5 * spread, 0.5 * spread, size=2)
        if learn_noise:
            start = np.append(start, rng.uniform(*noise_bounds))
        starts.append(start)

    # (negative lml, start index, theta); start points themselves are candidates too
    candidates: List[Tuple[float, int, np.ndarray]] = []
    for index, theta0 in enumerate(starts):
        candidates.append((negative_lml(theta0), index, theta0))
        result = minimize(
            negative_lml,
            theta0,
            method="Nelder-Mead",
            bounds=bounds,
            options={"maxiter": config.max_iter, "xatol": config.xatol, "fatol": config.fatol},
        )
        candidates.append((float(result.fun), index, np.asarray(result.x, dtype=float)))

    best_value, best_index, best_theta = min(candidates, key=lambda c: (c[0], c[1]))
    if best_value >= FAILED_FIT_PENALTY:
        logger.error("Every hyperparameter start failed to factorize", n_train=X.shape[0])
        raise NumericalFailureError(
            "hyperparameter search failed at every start",
            diagnostics={"n_train": X.shape[0], "restarts": config.restarts},
        )
    params = _params_from(best_theta)
    logger.debug(
        "Hyperparameters learned",
        sigma_f=params.sigma_f,
        length_scale=params.length_scale,
        sigma_n=params.sigma_n,
        lml=-best_value,
        start=best_index,
    )
    return params


# ============================================================================
# NORMALIZED SURROGATE
# ============================================================================


@dataclass(frozen=True, eq=False)
class Surrogate:
    """GP over a variable subset, fitted in unit-box inputs and standardized targets

    `predict` takes full decision vectors in problem units and answers in objective units.
    """
    model: GpModel
    lower: np.ndarray
    upper: np.ndarray
    target_mean: float
    target_scale: float
    feature_indices: Tuple[int, ...] = field(default=())

    def _scale_inputs(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        projected = X[:, list(self.feature_indices)]
        return (projected - self.lower) / (self.upper - self.lower)

    def predict(self, X) -> Tuple[np.ndarray, np.ndarray]:
        """Means and variances (objective units) for every row of X"""
        mean, variance = predict_batch(self.model, self._scale_inputs(X))
        return self.target_mean + self.target_scale * mean, variance * self.target_scale ** 2

    def predict_one(self, x) -> Prediction:
        mean, variance = self.predict(np.asarray(x, dtype=float).reshape(1, -1))
        return Prediction(mean=float(mean[0]), variance=float(variance[0]))


def _fit_normalized(X, y, lower, upper, feature_indices, search_config, learn_noise) -> Surrogate:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    if feature_indices is None:
        feature_indices = range(X.shape[1])
    indices = tuple(sorted(int(i) for i in feature_indices))
    if not indices:
        raise InvalidArgumentError("a surrogate needs at least one input variable")
    if indices[0] < 0 or indices[-1] >= X.shape[1]:
        raise InvalidArgumentError(f"feature indices {indices} out of range for {X.shape[1]} variables")

    sub_lower, sub_upper = lower[list(indices)], upper[list(indices)]
    Z = (X[:, list(indices)] - sub_lower) / (sub_upper - sub_lower)
    target_mean = float(np.mean(y))
    target_scale = float(np.std(y))
    if not target_scale > 0:
        target_scale = 1.0
    t = (y - target_mean) / target_scale

    if y.size >= 2:
        params = optimize_hyperparameters(Z, t, search_config, learn_noise=learn_noise)
    else:
        params = KernelParams()
    model = fit(Z, t, params, mean_const=0.0, feature_indices=indices)
    return Surrogate(
        model=model,
        lower=sub_lower,
        upper=sub_upper,
        target_mean=target_mean,
        target_scale=target_scale,
        feature_indices=indices,
    )


def fit_surrogate(
    X,
    y,
    lower: Sequence[float],
    upper: Sequence[float],
    feature_indices: Optional[Sequence[int]] = None,
    search_config: Optional[GpSearchConfig] = None,
    label: str = "f",
    learn_noise: bool = False,
) -> Surrogate:
    """Learn hyperparameters and fit one GP on the chosen variables of X

    The fit time lands in saea_gp_fit_duration_seconds under `label`, failed fits included.
    """
    timed_fit = track_duration(gp_fit_duration_seconds, objective=label)(_fit_normalized)
    return timed_fit(X, y, lower, upper, feature_indices, search_config, learn_noise)
