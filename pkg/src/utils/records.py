"""Run Records - One replication's complete, self-describing result file

Self-Explanatory: Everything a run produced (config snapshot, seed, every FE, final
archive, IGD) in one pydantic model, persisted as one CSV file.
How:
- Line 1: `# meta: {json}` holding every field except the evaluation log
- Then the evaluation log: iter, fe_index, x_1..x_n, f_1..f_m (floats as {:.5e})
- The meta JSON keeps full float precision, so summaries are recomputable exactly
- Writes go to a temporary file in the target directory, then os.replace

Determinism: two records of the same seed and config agree on every field but wall_time.
"""

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Optional

import structlog
from pydantic import BaseModel, Field, ValidationError

from src.utils.errors import ResultsIOError

logger = structlog.get_logger()

META_PREFIX = "# meta: "
FLOAT_FORMAT = "{:.5e}"
TIMING_FIELDS = {"wall_time"}


def format_float(value: float) -> str:
    return FLOAT_FORMAT.format(value)


class LogEntry(BaseModel):
    iteration: int
    fe_index: int
    phase: str
    x: List[float]
    f: List[float]


class RunRecord(BaseModel):
    algorithm: str
    problem: str
    n: int
    m: int
    repeat: int = 0
    seed: int
    budget: int
    config: Dict[str, Any] = Field(default_factory=dict)
    status: str = "completed"
    diagnostics: Dict[str, Any] = Field(default_factory=dict)
    log: List[LogEntry] = Field(default_factory=list)
    archive_x: List[List[float]] = Field(default_factory=list)
    archive_f: List[List[float]] = Field(default_factory=list)
    igd: Optional[float] = None
    wall_time: float = 0.0

    @property
    def completed(self) -> bool:
        return self.status == "completed"

    def fingerprint(self) -> Dict[str, Any]:
        """Every deterministic field (all but timing)"""
        return self.model_dump(exclude=TIMING_FIELDS)

    def same_result(self, other: "RunRecord") -> bool:
        return self.fingerprint() == other.fingerprint()


# ============================================================================
# PERSISTENCE
# ============================================================================


def atomic_write_text(path: Path, text: str):
    """Write `text` to `path` through a same-directory temporary file and rename"""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        logger.error("Write failed", path=str(path), error=str(exc))
        raise ResultsIOError(f"cannot write {path}: {exc}") from exc


def render_record(record: RunRecord) -> str:
    meta = record.model_dump(exclude={"log"})
    meta["phases"] = [entry.phase for entry in record.log]
    buffer = io.StringIO()
    buffer.write(META_PREFIX + json.dumps(meta, sort_keys=True) + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        ["iter", "fe_index"] + [f"x_{i + 1}" for i in range(record.n)] + [f"f_{j + 1}" for j in range(record.m)]
    )
    for entry in record.log:
        writer.writerow(
            [entry.iteration, entry.fe_index]
            + [format_float(v) for v in entry.x]
            + [format_float(v) for v in entry.f]
        )
    return buffer.getvalue()


def write_record(record: RunRecord, path) -> Path:
    path = Path(path)
    atomic_write_text(path, render_record(record))
    logger.debug("Record written", path=str(path), evaluations=len(record.log))
    return path


def read_record(path) -> RunRecord:
    """Parse a record file; the log is restored at the printed precision, phases from the meta line"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        logger.error("Read failed", path=str(path), error=str(exc))
        raise ResultsIOError(f"cannot read {path}: {exc}") from exc

    header, _, body = text.partition("\n")
    if not header.startswith(META_PREFIX):
        raise ResultsIOError(f"{path} is not a run record (missing meta header)")
    try:
        meta = json.loads(header[len(META_PREFIX):])
        phases = meta.pop("phases", [])
        n, m = int(meta["n"]), int(meta["m"])
        log = []
        for i, row in enumerate(csv.DictReader(io.StringIO(body))):
            log.append(
                LogEntry(
                    iteration=int(row["iter"]),
                    fe_index=int(row["fe_index"]),
                    phase=phases[i] if i < len(phases) else "",
                    x=[float(row[f"x_{k + 1}"]) for k in range(n)],
                    f=[float(row[f"f_{k + 1}"]) for k in range(m)],
                )
            )
        return RunRecord(**meta, log=log)
    except (ValueError, KeyError, ValidationError) as exc:
        logger.error("Malformed record", path=str(path), error=str(exc))
        raise ResultsIOError(f"{path} is malformed: {exc}") from exc
