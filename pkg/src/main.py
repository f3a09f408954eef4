"""SAEA/ME Command Line - Experiment harness entry point

Run with: python -m src.main <command> [options]

Commands:
1. run: execute an experiment matrix from a config file (one record file per run)
2. summarize: median/std IGD table with rank-sum markers against saeame
3. front: archive + true Pareto front of one record as plot-ready CSV
4. saea-single: the single-objective GP loop on a 1-D demo function

Exit codes: 0 ok, 1 other optimizer error, 2 config error, 3 results I/O error,
4 numerical failure.
"""

import argparse
import logging
import sys
from typing import List, Optional

import numpy as np
import structlog

from src.harness.config import DEFAULT_WORKERS, load_config
from src.harness.fronts import emit_front_csv
from src.harness.runner import run_experiment
from src.harness.summary import summarize
from src.surrogate.acquisition import ONE_D_FUNCTIONS, AcquisitionKind, GenericSaeaConfig, SpreadMode, run_generic_saea
from src.utils.errors import ConfigError, NumericalFailureError, OptimizationError, ResultsIOError
from src.utils.records import format_float, read_record

logger = structlog.get_logger()

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4


def configure_logging(level: str = "INFO", pretty: bool = False):
    """structlog on top of stdlib logging; JSON lines unless pretty"""
    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=getattr(logging, level.upper()))
    renderer = structlog.dev.ConsoleRenderer() if pretty else structlog.processors.JSONRenderer()
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.stdlib.add_log_level,
            renderer,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


# ============================================================================
# COMMANDS
# ============================================================================


def cmd_run(args) -> int:
    config = load_config(args.config)
    paths = run_experiment(config, args.out, force=args.force, workers=args.workers)
    print(f"{len(paths)} records in {args.out}")
    return EXIT_OK


def cmd_summarize(args) -> int:
    path = summarize(args.input, args.out)
    print(path)
    return EXIT_OK


def cmd_front(args) -> int:
    record = read_record(args.record)
    path = emit_front_csv(record, args.out, pf_points=args.pf_points)
    print(path)
    return EXIT_OK


def cmd_saea_single(args) -> int:
    problem = ONE_D_FUNCTIONS[args.problem_1d]
    config = GenericSaeaConfig(
        acquisition=AcquisitionKind(args.acq),
        kappa=args.kappa,
        spread_mode=SpreadMode.VARIANCE if args.literal_variance else SpreadMode.STDDEV,
        literal=args.literal,
    )
    incumbent = run_generic_saea(
        problem.fn, problem.lower, problem.upper, args.budget, np.random.default_rng(args.seed), config
    )
    x = " ".join(format_float(v) for v in incumbent.best_input)
    print(f"{problem.name}: best_value={format_float(incumbent.best_value)} best_input={x}")
    return EXIT_OK


# ============================================================================
# PARSER
# ============================================================================


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="saea", description="Surrogate-assisted expensive multi-objective optimization")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--pretty-logs", action="store_true", help="human-readable console logs instead of JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute an experiment matrix")
    run.add_argument("--config", required=True, help="experiment config file")
    run.add_argument("--out", required=True, help="results directory")
    run.add_argument("--force", action="store_true", help="recompute runs that already have a record")
    run.add_argument("--workers", type=int, default=DEFAULT_WORKERS, help="parallel run processes")
    run.set_defaults(handler=cmd_run)

    summary = sub.add_parser("summarize", help="build the IGD summary table")
    summary.add_argument("--in", dest="input", required=True, help="results directory")
    summary.add_argument("--out", required=True, help="summary CSV path")
    summary.set_defaults(handler=cmd_summarize)

    front = sub.add_parser("front", help="export one record's front for plotting")
    front.add_argument("--record", required=True, help="run record CSV")
    front.add_argument("--out", required=True, help="front CSV path")
    front.add_argument("--pf-points", type=int, default=1000, help="true-front sample size")
    front.set_defaults(handler=cmd_front)

    single = sub.add_parser("saea-single", help="single-objective GP loop on a 1-D function")
    single.add_argument("--problem-1d", default="quadratic", choices=sorted(ONE_D_FUNCTIONS))
    single.add_argument("--budget", type=int, default=30)
    single.add_argument("--acq", default="ei", choices=[k.value for k in AcquisitionKind])
    single.add_argument("--kappa", type=float, default=2.0)
    single.add_argument("--literal-variance", action="store_true", help="use the variance as the spread")
    single.add_argument("--literal", action="store_true", help="printed PI/UCB orientation")
    single.add_argument("--seed", type=int, default=0)
    single.set_defaults(handler=cmd_saea_single)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level, args.pretty_logs)
    try:
        return args.handler(args)
    except ConfigError as exc:
        logger.error("Configuration error", key=exc.key, error=str(exc))
        return EXIT_CONFIG
    except ResultsIOError as exc:
        logger.error("Results I/O error", error=str(exc))
        return EXIT_IO
    except NumericalFailureError as exc:
        logger.error("Numerical failure", error=str(exc), **exc.diagnostics)
        return EXIT_NUMERICAL
    except OptimizationError as exc:
        logger.error("Optimization error", error_type=type(exc).__name__, error=str(exc))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
