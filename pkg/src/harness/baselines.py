"""Baselines - Surrogate-free optimizers spending the same FE budget

- random-search: `budget` uniform samples over the decision box
- nsga2-budget: plain NSGA-II on the true objectives; generations = ceil((budget - pop) / pop)
  with the last offspring batch truncated so exactly `budget` evaluations are made
"""

import math
import time
from typing import Optional, Tuple

import numpy as np
import structlog

from src.moea.nsga2 import nsga2_optimize
from src.problems.benchmarks import Problem
from src.saeame.archive import Archive, ExpensiveEvaluator, Phase, TrainingSet
from src.saeame.optimizer import build_record
from src.utils.errors import InvalidArgumentError
from src.utils.metrics import record_run, run_duration_seconds, track_duration
from src.utils.records import RunRecord

logger = structlog.get_logger()


@track_duration(run_duration_seconds, algorithm="random-search")
def random_search_baseline(
    problem: Problem,
    budget: int,
    rng: Optional[np.random.Generator] = None,
    seed: int = 0,
    repeat: int = 0,
) -> Tuple[Archive, RunRecord]:
    rng = rng if rng is not None else np.random.default_rng(seed)
    start = time.perf_counter()
    training = TrainingSet(problem.n, problem.m)
    evaluator = ExpensiveEvaluator(problem, budget, training, "random-search")

    X = problem.lower + rng.random((budget, problem.n)) * (problem.upper - problem.lower)
    evaluator.evaluate(X, 0, Phase.SEARCH)

    archive = training.nondominated()
    wall_time = time.perf_counter() - start
    record_run("random-search", "completed")
    record = build_record("random-search", problem, budget, seed, repeat, evaluator, archive, wall_time)
    logger.info("Random search finished", problem=problem.id, budget=budget, igd=record.igd)
    return archive, record


def nsga2_generations(budget: int, pop_size: int) -> int:
    return max(0, math.ceil((budget - pop_size) / pop_size))


@track_duration(run_duration_seconds, algorithm="nsga2-budget")
def nsga2_budget_baseline(
    problem: Problem,
    budget: int,
    pop_size: int,
    rng: Optional[np.random.Generator] = None,
    seed: int = 0,
    repeat: int = 0,
) -> Tuple[Archive, RunRecord]:
    if pop_size < 2 or pop_size % 2:
        raise InvalidArgumentError(f"pop_size must be a positive even number, got {pop_size}")
    rng = rng if rng is not None else np.random.default_rng(seed)
    start = time.perf_counter()
    training = TrainingSet(problem.n, problem.m)
    evaluator = ExpensiveEvaluator(problem, budget, training, "nsga2-budget")
    generation = 0

    def true_objectives(X: np.ndarray) -> np.ndarray:
        nonlocal generation
        F = evaluator.evaluate(X, generation, Phase.INIT if generation == 0 else Phase.SEARCH)
        generation += 1
        return F

    generations = nsga2_generations(budget, pop_size)
    nsga2_optimize(true_objectives, problem.lower, problem.upper, pop_size, generations, rng, max_evaluations=budget)

    archive = training.nondominated()
    wall_time = time.perf_counter() - start
    record_run("nsga2-budget", "completed")
    record = build_record(
        "nsga2-budget", problem, budget, seed, repeat, evaluator, archive, wall_time,
        config={"pop_size": pop_size, "generations": generations},
    )
    logger.info("NSGA-II baseline finished", problem=problem.id, budget=budget, generations=generations, igd=record.igd)
    return archive, record
