"""Prometheus Metrics - Observability for optimization runs

Self-Explanatory: Counters and histograms describing what a run spent and where.
Why: Expensive evaluations are the budgeted resource, and GP refits dominate wall time;
both need to be visible when an experiment matrix runs for hours.
How: prometheus_client default registry. `run` writes it to <out>/metrics.prom
(textfile-collector format) when the experiment finishes.

Metrics Categories:
1. Budget Metrics: function evaluations, selected batch sizes, training-set size
2. Model Metrics: GP fit latency, jitter escalations
3. Run Metrics: completed/aborted runs, run duration
"""

import time
from functools import wraps
from typing import Callable

import structlog
from prometheus_client import (
    REGISTRY,
    Counter,
    Gauge,
    Histogram,
    write_to_textfile,
)

logger = structlog.get_logger()

# ============================================================================
# BUDGET METRICS
# ============================================================================

function_evaluations_total = Counter(
    "saea_function_evaluations_total",
    "Expensive objective evaluations charged to a budget",
    ["algorithm", "problem"],
)

selected_batch_size = Histogram(
    "saea_selected_batch_size",
    "Solutions chosen for true evaluation per outer iteration",
    buckets=[1, 2, 3, 5, 10, 20],
)

training_set_size = Gauge(
    "saea_training_set_size",
    "Entries in the most recently updated training set",
)

# ============================================================================
# MODEL METRICS
# ============================================================================

gp_fit_duration_seconds = Histogram(
    "saea_gp_fit_duration_seconds",
    "Hyperparameter search plus factorization for one objective",
    ["objective"],
    buckets=[0.01, 0.05, 0.1, 0.5, 1, 2, 5, 10],
)

gp_jitter_escalations_total = Counter(
    "saea_gp_jitter_escalations_total",
    "Cholesky retries with a larger diagonal jitter",
)

# ============================================================================
# RUN METRICS
# ============================================================================

runs_total = Counter(
    "saea_runs_total",
    "Finished optimization runs",
    ["algorithm", "status"],
)

run_duration_seconds = Histogram(
    "saea_run_duration_seconds",
    "Wall time of one optimization run",
    ["algorithm"],
    buckets=[1, 10, 30, 60, 300, 600, 1800, 3600],
)

# ============================================================================
# DECORATOR UTILITIES
# ============================================================================


def track_duration(histogram: Histogram, **labels) -> Callable:
    """Decorator observing the wrapped call's wall time, also when it raises"""
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            try:
                return func(*args, **kwargs)
            finally:
                target = histogram.labels(**labels) if labels else histogram
                target.observe(time.perf_counter() - start_time)
        return wrapper
    return decorator


# ============================================================================
# HELPER FUNCTIONS
# ============================================================================


def record_evaluations(algorithm: str, problem: str, count: int = 1):
    function_evaluations_total.labels(algorithm=algorithm, problem=problem).inc(count)


def record_run(algorithm: str, status: str):
    """Count a finished run; its duration comes from `track_duration` on the run function"""
    runs_total.labels(algorithm=algorithm, status=status).inc()


def export_metrics(path: str):
    """Write the registry in textfile-collector format"""
    write_to_textfile(path, REGISTRY)
    logger.info("Metrics exported", path=path)
