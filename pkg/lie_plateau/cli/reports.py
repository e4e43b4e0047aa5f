"""
Run reports and tables.

Reports are pydantic models written as JSON; tables are pandas frames written as CSV with a
fixed column order. Both are written atomically under a file lock so parallel runs never
leave half-written files behind.
"""
import json
import os
import tempfile
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from filelock import FileLock
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from rich.console import Console
from rich.table import Table

from lie_plateau import __version__
from lie_plateau.core.constants import EXIT_OK
from lie_plateau.core.exceptions import ConfigError
from lie_plateau.core.utils.logger import get_logger

logger = get_logger(__name__)

STATUS_OK = "ok"
STATUS_TRUNCATED = "truncated"
STATUS_OUTSIDE_THEORY = "outside-theory"
STATUS_NOT_CONVERGED = "not-converged"
STATUS_ERROR = "error"


class RunReport(BaseModel):
    """Everything one run produced, with the config and seed needed to replay it"""

    model_config = ConfigDict(extra="forbid")

    command: str = Field(..., description="Subcommand that produced the report")
    status: str = Field(default=STATUS_OK)
    exit_code: int = Field(default=EXIT_OK)
    config: Dict[str, Any] = Field(..., description="Resolved experiment config")
    seed: int
    n: Optional[int] = None
    setup: Optional[int] = None
    dla: Optional[Dict[str, Any]] = Field(default=None, description="DLA manifest")
    purity: Optional[Dict[str, Any]] = None
    variance: Optional[Dict[str, Any]] = Field(default=None, description="Exact prediction")
    monte_carlo: Optional[Dict[str, Any]] = None
    diagnosis: Optional[Dict[str, Any]] = None
    depth: Optional[Dict[str, Any]] = None
    notes: List[str] = Field(default_factory=list)
    errors: List[str] = Field(default_factory=list)
    version: str = Field(default=__version__)
    started_at: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    wall_clock_seconds: float = 0.0

    def fail(self, error: Exception, status: str, exit_code: int):
        self.status = status
        self.exit_code = exit_code
        self.errors.append(str(error))


class Stopwatch:
    def __init__(self):
        self.start = time.perf_counter()

    def elapsed(self) -> float:
        return time.perf_counter() - self.start


def _json_default(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def _atomic_write(path: Path, write):
    path.parent.mkdir(parents=True, exist_ok=True)
    with FileLock(str(path) + ".lock"):
        fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
                write(f)
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)


def report_to_json(report: RunReport) -> str:
    return json.dumps(report.model_dump(), indent=2, default=_json_default)


def write_report(report: RunReport, path: Union[str, Path]) -> Path:
    path = Path(path)
    text = report_to_json(report)
    _atomic_write(path, lambda f: f.write(text))
    logger.info(f"Wrote {report.command} report ({report.status}) to {path}")
    return path


def write_reports(reports: Sequence[RunReport], path: Union[str, Path]) -> Path:
    """Several reports as one JSON array"""
    path = Path(path)
    text = "[\n" + ",\n".join(report_to_json(report) for report in reports) + "\n]"
    _atomic_write(path, lambda f: f.write(text))
    logger.info(f"Wrote {len(reports)} reports to {path}")
    return path


def load_reports(path: Union[str, Path]) -> List[RunReport]:
    """Read a report file back, re-validating every entry against the schema"""
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"Cannot read report {path}: {e}")
    entries = payload if isinstance(payload, list) else [payload]
    try:
        return [RunReport.model_validate(entry) for entry in entries]
    except ValidationError as e:
        raise ConfigError(f"Report {path} does not match the schema", [str(e)])


def write_table(rows: List[Dict[str, Any]], columns: List[str], path: Union[str, Path]) -> Path:
    """CSV with exactly `columns`, in order; missing values are left empty"""
    path = Path(path)
    frame = pd.DataFrame(rows, columns=columns)
    _atomic_write(path, lambda f: frame.to_csv(f, index=False))
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def print_summary(rows: List[Dict[str, Any]], columns: List[str], title: str, console: Optional[Console] = None):
    """Rich table of the CSV rows on the terminal"""
    console = console or Console()
    table = Table(title=title)
    for column in columns:
        table.add_column(column, justify="right" if column not in ("status", "verdict") else "left")
    for row in rows:
        table.add_row(*[_format_cell(row.get(column)) for column in columns])
    console.print(table)


def _format_cell(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        if np.isnan(value):
            return "nan"
        return f"{value:.6g}"
    return str(value)
