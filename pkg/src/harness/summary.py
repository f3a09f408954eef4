"""Summary Table - Median/std IGD per cell with rank-sum markers against SAEA/ME

Markers compare each algorithm's IGD sample with the saeame sample of the same
(problem, n): "†" when saeame is significantly better (lower IGD), "‡" when it is
significantly worse. Cells with fewer than 5 runs on either side get no marker.
"""

import csv
import io
from collections import defaultdict
from pathlib import Path
from typing import Dict, Iterable, List, Tuple

import numpy as np
import structlog

from src.indicators.statistics import MIN_SAMPLE_SIZE, Direction, wilcoxon_rank_sum
from src.utils.errors import ResultsIOError
from src.utils.records import META_PREFIX, RunRecord, atomic_write_text, format_float, read_record

logger = structlog.get_logger()

REFERENCE_ALGORITHM = "saeame"
BETTER_MARK = "†"
WORSE_MARK = "‡"
SUMMARY_COLUMNS = ["problem", "n", "algorithm", "median_igd", "std_igd", "marker"]

Cell = Tuple[str, int, str]


def collect_records(results_dir) -> List[RunRecord]:
    """Every run record below results_dir (files without the meta header are skipped)"""
    root = Path(results_dir)
    if not root.is_dir():
        raise ResultsIOError(f"{root} is not a directory")
    records = []
    for path in sorted(root.rglob("*.csv")):
        with path.open(encoding="utf-8") as handle:
            if not handle.readline().startswith(META_PREFIX):
                continue
        records.append(read_record(path))
    return records


def significance_marker(reference: Iterable[float], other: Iterable[float]) -> str:
    reference, other = list(reference), list(other)
    if len(reference) < MIN_SAMPLE_SIZE or len(other) < MIN_SAMPLE_SIZE:
        return ""
    result = wilcoxon_rank_sum(reference, other)
    if not result.significant:
        return ""
    return BETTER_MARK if result.direction is Direction.A_LOWER else WORSE_MARK


def summary_rows(records: Iterable[RunRecord]) -> List[Dict[str, object]]:
    samples: Dict[Cell, List[float]] = defaultdict(list)
    for record in records:
        if record.completed and record.igd is not None:
            samples[(record.problem, record.n, record.algorithm)].append(record.igd)
    if not samples:
        raise ResultsIOError("no completed run records to summarize")

    rows = []
    for (problem, n, algorithm) in sorted(samples, key=lambda c: (c[0], c[1], c[2] != REFERENCE_ALGORITHM, c[2])):
        values = np.asarray(samples[(problem, n, algorithm)])
        reference = samples.get((problem, n, REFERENCE_ALGORITHM))
        marker = ""
        if algorithm != REFERENCE_ALGORITHM and reference is not None:
            marker = significance_marker(reference, values)
        rows.append({
            "problem": problem,
            "n": n,
            "algorithm": algorithm,
            "median_igd": float(np.median(values)),
            "std_igd": float(np.std(values, ddof=1)) if values.size > 1 else 0.0,
            "marker": marker,
        })
    return rows


def summarize(results_dir, out_path) -> Path:
    rows = summary_rows(collect_records(results_dir))
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=SUMMARY_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({
            **row,
            "median_igd": format_float(row["median_igd"]),
            "std_igd": format_float(row["std_igd"]),
        })
    out_path = Path(out_path)
    atomic_write_text(out_path, buffer.getvalue())
    logger.info("Summary written", path=str(out_path), cells=len(rows))
    return out_path
