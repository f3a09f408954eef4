"""SAEA/ME - Surrogate-assisted EA with multiple-point evaluation

Self-Explanatory: The outer loop. Latin hypercube start, one correlation analysis, then
repeat {refit one GP per objective on its variable group; NSGA-II on the 2m-objective
transformed problem; HV-contribution subset selection; true evaluation of the chosen
batch} until the FE budget is spent.
Why: Batches of promising and uncertain solutions per iteration, with each GP built only
on the variables that move its objective.

Defaults:
- N_I = min(11n - 1, floor(0.4 budget)) initial points
- k = 10 per ranking, c = 1 in the transformed problem, box factor 2 in S^l
- spread = predictive variance (printed formulas); `spread_mode="stddev"` for sigma
- Inner NSGA-II restarts every iteration, seeded with the archive's non-dominated vectors
- Groups are checked once against the initial design (no evaluations) and widened to all
  variables when their objective is not explained by them; `widen_groups=False` keeps the
  probe groups as found

A GP that cannot be factorized even with maximal jitter ends the run early; the record
then carries status "aborted" and the diagnostics.
"""

import math
import time
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.indicators.igd import igd
from src.moea.nsga2 import nsga2_optimize
from src.problems.benchmarks import Problem, reference_front
from src.saeame.archive import Archive, ExpensiveEvaluator, Phase, TrainingSet, DEDUP_TOLERANCE
from src.saeame.correlation import (
    DEFAULT_DELTA,
    DEFAULT_NOISE_THRESHOLD,
    CorrelationGroups,
    correlation_analysis,
    refine_groups,
)
from src.saeame.sampling import latin_hypercube
from src.saeame.selection import DEFAULT_BOX_COEFF, DEFAULT_K, CandidateSet, subset_selection
from src.saeame.surrogates import build_surrogates, predict_objectives, transformed_objectives_batch
from src.surrogate.acquisition import SpreadMode, spread
from src.surrogate.gp import GpSearchConfig
from src.utils.errors import InvalidArgumentError, NumericalFailureError
from src.utils.metrics import record_run, run_duration_seconds, selected_batch_size, track_duration
from src.utils.records import LogEntry, RunRecord

logger = structlog.get_logger()

ALGORITHM = "saeame"
INIT_FRACTION = 0.4


class SaeaMeConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_init: Optional[int] = Field(default=None, ge=1)
    k_select: int = Field(default=DEFAULT_K, ge=1)
    lcb_coeff: float = Field(default=1.0, ge=0)
    box_coeff: float = Field(default=DEFAULT_BOX_COEFF, ge=0)
    spread_mode: SpreadMode = SpreadMode.VARIANCE
    alg3_literal: bool = False
    alg4_union: bool = False
    inner_pop: int = Field(default=50, ge=2)
    inner_generations: int = Field(default=50, ge=0)
    delta: float = Field(default=DEFAULT_DELTA, gt=0)
    widen_groups: bool = True
    noise_threshold: float = Field(default=DEFAULT_NOISE_THRESHOLD, gt=0, lt=1)
    inject_archive: bool = True
    dedup_tolerance: float = Field(default=DEDUP_TOLERANCE, ge=0)
    seed: Optional[int] = None
    gp: GpSearchConfig = Field(default_factory=GpSearchConfig)

    @model_validator(mode="after")
    def _even_inner_population(self):
        if self.inner_pop % 2:
            raise ValueError("inner_pop must be even")
        return self


def initial_design_size(n: int, budget: int, n_init: Optional[int] = None) -> int:
    if n_init is not None:
        return n_init
    return max(1, min(11 * n - 1, math.floor(INIT_FRACTION * budget)))


@dataclass
class SaeaMeState:
    """What the loop leaves behind; exposed for inspection and tests"""
    training: TrainingSet
    evaluator: ExpensiveEvaluator
    groups: Optional[CorrelationGroups] = None
    iterations: int = 0


def _fill_point(problem: Problem, training: TrainingSet, rng: np.random.Generator) -> np.ndarray:
    while True:
        x = problem.lower + rng.random(problem.n) * (problem.upper - problem.lower)
        if training.novel_mask(x[None, :])[0]:
            return x[None, :]


def _iterate(problem: Problem, config: SaeaMeConfig, state: SaeaMeState, rng: np.random.Generator):
    training, evaluator = state.training, state.evaluator
    while evaluator.remaining > 0:
        state.iterations += 1
        iteration = state.iterations
        models = build_surrogates(training, state.groups, problem.lower, problem.upper, config.gp)

        def surrogate_problem(X: np.ndarray) -> np.ndarray:
            return transformed_objectives_batch(models, X, config.lcb_coeff, config.spread_mode)

        initial = training.nondominated().decisions if config.inject_archive else None
        population = nsga2_optimize(
            surrogate_problem,
            problem.lower,
            problem.upper,
            config.inner_pop,
            config.inner_generations,
            rng,
            initial=initial,
        )

        means, variances = predict_objectives(models, population.genes)
        candidates = CandidateSet.from_predictions(
            population.genes, means, spread(variances, config.spread_mode), config.box_coeff, config.k_select
        )
        selection = subset_selection(candidates, training=training, union=config.alg4_union)
        batch, phase = selection.solutions[: evaluator.remaining], Phase.SEARCH
        if batch.shape[0] == 0:
            batch, phase = _fill_point(problem, training, rng), Phase.FILL

        evaluator.evaluate(batch, iteration, phase)
        selected_batch_size.observe(batch.shape[0])
        logger.info(
            "Iteration finished",
            iteration=iteration,
            selected=batch.shape[0],
            phase=phase.value,
            fe_count=training.fe_count,
            archive=training.nondominated().size,
        )


@track_duration(run_duration_seconds, algorithm=ALGORITHM)
def run_saeame(
    problem: Problem,
    budget: int,
    config: Optional[SaeaMeConfig] = None,
    rng: Optional[np.random.Generator] = None,
    seed: int = 0,
    repeat: int = 0,
) -> Tuple[Archive, RunRecord]:
    """Spend `budget` true evaluations on `problem`; returns the non-dominated archive and its record

    `rng` defaults to a Generator seeded with config.seed (or `seed`); `seed` is what the record reports.
    """
    config = config or SaeaMeConfig()
    if config.seed is not None:
        seed = config.seed
    rng = rng if rng is not None else np.random.default_rng(seed)
    n_init = initial_design_size(problem.n, budget, config.n_init)
    if budget < n_init + problem.n + 1:
        logger.error("Budget below initial design plus probes", budget=budget, n_init=n_init, n=problem.n)
        raise InvalidArgumentError(f"budget {budget} is below N_I + n + 1 = {n_init + problem.n + 1}")

    start = time.perf_counter()
    training = TrainingSet(problem.n, problem.m, config.dedup_tolerance)
    state = SaeaMeState(training=training, evaluator=ExpensiveEvaluator(problem, budget, training, ALGORITHM))
    logger.info("SAEA/ME started", problem=problem.id, n=problem.n, budget=budget, n_init=n_init, seed=seed)

    status, diagnostics = "completed", {}
    state.evaluator.evaluate(latin_hypercube(problem.n, n_init, problem.lower, problem.upper, rng), 0, Phase.INIT)
    state.groups = correlation_analysis(problem, config.delta, state.evaluator, literal=config.alg3_literal)
    if config.widen_groups:
        design = [e for e in state.evaluator.log if e.phase is Phase.INIT]
        state.groups = refine_groups(
            state.groups,
            np.array([e.x for e in design]),
            np.array([e.f for e in design]),
            problem.lower,
            problem.upper,
            config.noise_threshold,
            config.gp,
        )
    try:
        _iterate(problem, config, state, rng)
    except NumericalFailureError as exc:
        status, diagnostics = "aborted", {"error": str(exc), **exc.diagnostics}
        logger.error("SAEA/ME aborted", iteration=state.iterations, **exc.diagnostics)

    archive = training.nondominated()
    wall_time = time.perf_counter() - start
    record_run(ALGORITHM, status)
    record = build_record(
        ALGORITHM, problem, budget, seed, repeat, state.evaluator, archive, wall_time,
        config=config.model_dump(mode="json"), status=status, diagnostics=diagnostics,
    )
    logger.info("SAEA/ME finished", problem=problem.id, status=status, igd=record.igd, iterations=state.iterations)
    return archive, record


def build_record(
    algorithm: str,
    problem: Problem,
    budget: int,
    seed: int,
    repeat: int,
    evaluator: ExpensiveEvaluator,
    archive: Archive,
    wall_time: float,
    config: Optional[dict] = None,
    status: str = "completed",
    diagnostics: Optional[dict] = None,
) -> RunRecord:
    """RunRecord from an evaluator's log; IGD against the problem's fixed reference front"""
    front = reference_front(problem.id, problem.n, problem.m)
    return RunRecord(
        algorithm=algorithm,
        problem=problem.id,
        n=problem.n,
        m=problem.m,
        repeat=repeat,
        seed=seed,
        budget=budget,
        config=config or {},
        status=status,
        diagnostics=diagnostics or {},
        log=[
            LogEntry(iteration=e.iteration, fe_index=e.fe_index, phase=e.phase.value, x=e.x.tolist(), f=e.f.tolist())
            for e in evaluator.log
        ],
        archive_x=archive.decisions.tolist(),
        archive_f=archive.objectives.tolist(),
        igd=igd(archive.objectives, front) if archive.size else None,
        wall_time=wall_time,
    )
