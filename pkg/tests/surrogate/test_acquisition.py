"""Unit Tests for Acquisition Functions - PI, EI, confidence bounds and the GP-SAEA loop

Self-Explanatory: Closed-form values, Monte-Carlo agreement, monotonicity and the
argmin contract of the one-point-per-iteration loop.
How: Stratified normal draws (inverse CDF at bin midpoints) stand in for 10^6 i.i.d. samples,
so the 3-standard-error check is not at the mercy of the sampling seed.
Run: pytest tests/surrogate/
"""

import numpy as np
import pytest
from scipy.stats import norm

from src.moea.ga import GaResult
from src.surrogate.acquisition import (
    ONE_D_FUNCTIONS,
    AcquisitionKind,
    GenericSaeaConfig,
    Incumbent,
    SpreadMode,
    UcbParams,
    acquisition_score,
    confidence_bound,
    expected_improvement,
    generic_saea_log,
    probability_of_improvement,
    run_generic_saea,
    spread,
)
from src.surrogate.gp import GpSearchConfig, Prediction
from src.utils.errors import InvalidArgumentError

MC_SAMPLES = 1_000_000
STANDARD_NORMAL = norm.ppf((np.arange(MC_SAMPLES) + 0.5) / MC_SAMPLES)


def _incumbent(value: float) -> Incumbent:
    return Incumbent(best_input=np.zeros(1), best_value=value)


# ============================================================================
# CLOSED-FORM VALUES
# ============================================================================


def test_probability_of_improvement_values():
    assert probability_of_improvement(Prediction(1.0, 0.25), _incumbent(1.0)) == pytest.approx(0.5)
    assert probability_of_improvement(Prediction(0.5, 0.25), _incumbent(1.0)) == pytest.approx(0.841345, abs=1e-6)
    assert probability_of_improvement(Prediction(1.5, 0.0), _incumbent(1.0)) == 0.0
    assert probability_of_improvement(Prediction(0.5, 0.0), _incumbent(1.0)) == 1.0


def test_probability_of_improvement_literal_orientation():
    pred = Prediction(0.5, 0.25)
    assert probability_of_improvement(pred, _incumbent(1.0), literal=True) == pytest.approx(1.0 - 0.841345, abs=1e-6)


def test_expected_improvement_values():
    assert expected_improvement(Prediction(0.0, 1.0), _incumbent(1.0)) == pytest.approx(norm.cdf(1.0) + norm.pdf(1.0))
    assert expected_improvement(Prediction(1.0, 1.0), _incumbent(1.0)) == pytest.approx(0.398942, abs=1e-6)
    assert expected_improvement(Prediction(1.0, 0.0), _incumbent(1.0)) == 0.0
    assert expected_improvement(Prediction(0.25, 0.0), _incumbent(1.0)) == pytest.approx(0.75)


def test_confidence_bound_values():
    pred = Prediction(1.0, 0.25)
    assert confidence_bound(pred, UcbParams(kappa=0.0)) == pytest.approx(1.0)
    assert confidence_bound(pred, UcbParams(kappa=2.0)) == pytest.approx(0.0)
    assert confidence_bound(pred, UcbParams(kappa=2.0), literal=True) == pytest.approx(2.0)


def test_variance_spread_mode():
    pred = Prediction(1.0, 0.04)
    assert spread(0.04, SpreadMode.VARIANCE) == pytest.approx(0.04)
    assert spread(0.04) == pytest.approx(0.2)
    assert confidence_bound(pred, UcbParams(kappa=1.0), SpreadMode.VARIANCE) == pytest.approx(0.96)
    expected = norm.cdf((1.02 - 1.0) / 0.04)
    assert probability_of_improvement(pred, _incumbent(1.02), SpreadMode.VARIANCE) == pytest.approx(expected)


def test_ucb_kappa_must_be_non_negative():
    with pytest.raises(InvalidArgumentError):
        UcbParams(kappa=-1.0)
    with pytest.raises(InvalidArgumentError):
        UcbParams(kappa=float("nan"))
    assert UcbParams().kappa == 2.0
    assert UcbParams(kappa=1.5) == UcbParams(kappa=1.5)


# ============================================================================
# MONTE-CARLO AGREEMENT AND PROPERTIES
# ============================================================================


def test_pi_and_ei_match_monte_carlo():
    rng = np.random.default_rng(31)
    for _ in range(20):
        mu, s, best = rng.normal(), rng.uniform(0.05, 2.0), rng.normal()
        draws = mu + s * STANDARD_NORMAL
        pred, incumbent = Prediction(mu, s ** 2), _incumbent(best)

        pi = probability_of_improvement(pred, incumbent)
        hits = (draws < best).astype(float)
        # one stratum of probability mass is the resolution of the stratified sample
        pi_se = max(np.sqrt(pi * (1.0 - pi) / MC_SAMPLES), 1.0 / MC_SAMPLES)
        assert abs(pi - hits.mean()) <= 3 * pi_se

        gains = np.maximum(best - draws, 0.0)
        ei_se = max(gains.std() / np.sqrt(MC_SAMPLES), s / MC_SAMPLES)
        assert abs(expected_improvement(pred, incumbent) - gains.mean()) <= 3 * ei_se


def test_near_certain_improvement_matches_sampling():
    mu, s, best = -0.395, 0.182, 0.607
    draws = mu + s * STANDARD_NORMAL
    assert np.all(draws < best)
    pi = probability_of_improvement(Prediction(mu, s ** 2), _incumbent(best))
    assert 1.0 - pi < 1e-6
    assert abs(pi - 1.0) <= 3.0 / MC_SAMPLES


def test_expected_improvement_lower_bounds(rng):
    for _ in range(200):
        mu, s, best = rng.normal(), rng.uniform(0.01, 2.0), rng.normal()
        ei = expected_improvement(Prediction(mu, s ** 2), _incumbent(best))
        assert ei >= 0.0
        if mu < best:
            assert ei >= best - mu - 1e-12


def test_probability_of_improvement_monotone(rng):
    means = np.sort(rng.normal(size=50))
    values = [probability_of_improvement(Prediction(m, 0.3), _incumbent(0.0)) for m in means]
    assert all(a >= b for a, b in zip(values, values[1:]))

    bests = np.sort(rng.normal(size=50))
    values = [probability_of_improvement(Prediction(0.0, 0.3), _incumbent(b)) for b in bests]
    assert all(a <= b for a, b in zip(values, values[1:]))


def test_acquisition_score_is_minimized():
    config = GenericSaeaConfig(acquisition=AcquisitionKind.EI)
    scores = acquisition_score(config, np.array([0.0, 1.0]), np.array([1.0, 1.0]), 1.0)
    assert scores[0] < scores[1] < 0.0

    config = GenericSaeaConfig(acquisition=AcquisitionKind.UCB, kappa=2.0)
    np.testing.assert_allclose(acquisition_score(config, np.array([1.0]), np.array([0.25]), 0.0), [0.0])


# ============================================================================
# GENERIC LOOP
# ============================================================================


SMALL_GA = dict(ga_pop_size=20, ga_generations=20, gp=GpSearchConfig(restarts=2, max_iter=50))


def test_budget_equal_to_initial_design_skips_modelling(mocker, rng):
    fit = mocker.patch("src.surrogate.acquisition.fit_surrogate")
    quadratic = ONE_D_FUNCTIONS["quadratic"]
    X, y = generic_saea_log(quadratic.fn, quadratic.lower, quadratic.upper, 10, rng)
    assert y.size == 10
    fit.assert_not_called()
    incumbent = Incumbent.from_log(X, y)
    assert incumbent.best_value == y.min()


def test_incumbent_is_log_minimum(rng):
    forrester = ONE_D_FUNCTIONS["forrester"]
    config = GenericSaeaConfig(n_init=5, acquisition=AcquisitionKind.PI, **SMALL_GA)
    X, y = generic_saea_log(forrester.fn, forrester.lower, forrester.upper, 9, rng, config)
    assert X.shape == (9, 1)
    incumbent = run_generic_saea(forrester.fn, forrester.lower, forrester.upper, 9, np.random.default_rng(12345), config)
    assert incumbent.best_value == pytest.approx(y.min())
    assert forrester.fn(incumbent.best_input) == incumbent.best_value


def test_duplicate_proposal_is_replaced(mocker, rng):
    quadratic = ONE_D_FUNCTIONS["quadratic"]
    config = GenericSaeaConfig(n_init=4, **SMALL_GA)

    def propose_existing(fn, lower, upper, rng, pop_size, generations, initial):
        return GaResult(best_x=initial[0].copy(), best_value=0.0)

    mocker.patch("src.surrogate.acquisition.ga_minimize", side_effect=propose_existing)
    X, _ = generic_saea_log(quadratic.fn, quadratic.lower, quadratic.upper, 5, rng, config)
    assert not np.any(np.all(X[:4] == X[4], axis=1))


def test_empty_log_and_bad_budget(rng):
    with pytest.raises(InvalidArgumentError):
        Incumbent.from_log(np.empty((0, 1)), [])
    quadratic = ONE_D_FUNCTIONS["quadratic"]
    with pytest.raises(InvalidArgumentError):
        generic_saea_log(quadratic.fn, quadratic.lower, quadratic.upper, 0, rng)


def test_quadratic_converges_with_expected_improvement():
    quadratic = ONE_D_FUNCTIONS["quadratic"]
    config = GenericSaeaConfig(acquisition=AcquisitionKind.EI, **SMALL_GA)
    successes = 0
    for seed in range(11):
        incumbent = run_generic_saea(
            quadratic.fn, quadratic.lower, quadratic.upper, 30, np.random.default_rng(seed), config
        )
        successes += incumbent.best_value <= 1e-3
    assert successes >= 9
