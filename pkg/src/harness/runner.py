"""Experiment Runner - problems x dims x algorithms x repeats, one record file per run

Self-Explanatory: Expands an ExperimentConfig into run cells, executes the ones without a
completed record (all of them with force=True), and writes each RunRecord atomically.
How:
- Seed of repeat r is base_seed + r, so seeds are unique within a cell and reproducible
- workers > 1 fans runs out to a ProcessPoolExecutor; results come back in cell order
- Records land in <out>/records/<problem>_n<n>_<algorithm>_r<repeat>.csv
- Prometheus metrics of this process are written to <out>/metrics.prom at the end
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

import numpy as np
import structlog

from src.harness.baselines import nsga2_budget_baseline, random_search_baseline
from src.harness.config import DEFAULT_WORKERS, Algorithm, ExperimentConfig
from src.problems.benchmarks import get_problem
from src.saeame.optimizer import run_saeame
from src.utils.errors import ResultsIOError
from src.utils.metrics import export_metrics
from src.utils.records import RunRecord, read_record, write_record

logger = structlog.get_logger()

RECORDS_DIR = "records"
METRICS_FILE = "metrics.prom"


@dataclass(frozen=True)
class RunSpec:
    problem: str
    n: int
    algorithm: Algorithm
    repeat: int
    seed: int

    @property
    def filename(self) -> str:
        return f"{self.problem}_n{self.n}_{self.algorithm.value}_r{self.repeat:02d}.csv"


def plan_runs(config: ExperimentConfig) -> List[RunSpec]:
    return [
        RunSpec(problem, n, algorithm, repeat, config.base_seed + repeat)
        for problem in config.problems
        for n in config.dims
        for algorithm in config.algorithms
        for repeat in range(config.repeats)
    ]


def execute_run(spec: RunSpec, config: ExperimentConfig) -> RunRecord:
    """One replication; pure function of (spec, config)"""
    problem = get_problem(spec.problem, spec.n, config.m)
    pop_size, budget = config.settings_for(spec.n)
    rng = np.random.default_rng(spec.seed)
    if spec.algorithm is Algorithm.SAEAME:
        _, record = run_saeame(problem, budget, config.saeame_config(spec.n), rng, seed=spec.seed, repeat=spec.repeat)
    elif spec.algorithm is Algorithm.NSGA2_BUDGET:
        _, record = nsga2_budget_baseline(problem, budget, pop_size, rng, seed=spec.seed, repeat=spec.repeat)
    else:
        _, record = random_search_baseline(problem, budget, rng, seed=spec.seed, repeat=spec.repeat)
    return record


def _run_and_write(spec: RunSpec, config: ExperimentConfig, path: Path) -> Path:
    record = execute_run(spec, config)
    return write_record(record, path)


def _is_complete(path: Path) -> bool:
    if not path.exists():
        return False
    try:
        return read_record(path).completed
    except ResultsIOError:
        logger.warning("Unreadable record will be recomputed", path=str(path))
        return False


def _prepare_output(out_dir: Path) -> Path:
    records = out_dir / RECORDS_DIR
    try:
        records.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        logger.error("Output directory not creatable", out_dir=str(out_dir), error=str(exc))
        raise ResultsIOError(f"cannot create {records}: {exc}") from exc
    if not os.access(records, os.W_OK):
        logger.error("Output directory not writable", out_dir=str(out_dir))
        raise ResultsIOError(f"{records} is not writable")
    return records


def run_experiment(
    config: ExperimentConfig,
    out_dir,
    force: bool = False,
    workers: Optional[int] = None,
) -> List[Path]:
    """Record paths for every cell (existing completed ones included)"""
    out_dir = Path(out_dir)
    records_dir = _prepare_output(out_dir)
    workers = DEFAULT_WORKERS if workers is None else workers
    specs = plan_runs(config)
    paths = [records_dir / spec.filename for spec in specs]
    pending = [(spec, path) for spec, path in zip(specs, paths) if force or not _is_complete(path)]
    logger.info("Experiment planned", runs=len(specs), pending=len(pending), workers=workers, force=force)

    if workers <= 1 or len(pending) <= 1:
        for spec, path in pending:
            _run_and_write(spec, config, path)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_and_write, spec, config, path) for spec, path in pending]
            for future in futures:
                future.result()

    export_metrics(str(out_dir / METRICS_FILE))
    logger.info("Experiment finished", runs=len(specs), computed=len(pending), out_dir=str(out_dir))
    return paths
