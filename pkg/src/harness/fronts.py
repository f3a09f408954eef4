"""Front export - archive and true-front points as labeled CSV rows for plotting"""

import csv
import io
from pathlib import Path

import structlog

from src.problems.benchmarks import DEFAULT_PF_POINTS, reference_front
from src.utils.errors import InvalidArgumentError
from src.utils.records import RunRecord, atomic_write_text, format_float

logger = structlog.get_logger()

ARCHIVE_LABEL = "archive"
TRUE_PF_LABEL = "true_pf"


def emit_front_csv(record: RunRecord, out_path, pf_points: int = DEFAULT_PF_POINTS) -> Path:
    """Columns label, f1..fm; archive rows first, then the reference-front sample"""
    if not record.archive_f:
        raise InvalidArgumentError(f"record for {record.problem} has an empty archive")
    front = reference_front(record.problem, record.n, record.m, pf_points)

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["label"] + [f"f{j + 1}" for j in range(record.m)])
    for point in record.archive_f:
        writer.writerow([ARCHIVE_LABEL] + [format_float(v) for v in point])
    for point in front.points:
        writer.writerow([TRUE_PF_LABEL] + [format_float(v) for v in point])

    out_path = Path(out_path)
    atomic_write_text(out_path, buffer.getvalue())
    logger.info("Front written", path=str(out_path), archive=len(record.archive_f), true_pf=front.count)
    return out_path
