"""
Report Service - CSV and JSON result files

Writes verification rows produced by the command service. Writes go
through a sibling .lock file so that several CLI processes targeting one
output path do not interleave.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

from filelock import FileLock

from src.constants import CSV_COLUMNS, REPORT_FORMATS
from src.error_handler import InvalidInputError
from src.verbose_logger import get_logger
from version import get_version


@dataclass
class ReportRow:
    """One line of a verification report; unset numeric fields are written empty"""
    scenario: str
    d: int
    n: int
    K: Optional[int] = None
    rate: Optional[float] = None
    fidelity_way1: Optional[float] = None
    fidelity_way2: Optional[float] = None
    gap: Optional[float] = None
    bound_corollary1: Optional[float] = None
    bound_hashing_or_markov: Optional[float] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> Dict[str, Any]:
        out = {name: getattr(self, name) for name in CSV_COLUMNS}
        out.update(self.extra)
        return out


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return f"{value:.12g}"
    return str(value)


class ReportService:
    """Service for rendering and saving verification reports"""

    def __init__(self, lock_timeout: float = 10):
        self.lock_timeout = lock_timeout

    def render_csv(self, rows: List[ReportRow]) -> str:
        """CSV text with the fixed column schema; extra fields are dropped"""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            values = row.as_dict()
            writer.writerow([_cell(values[name]) for name in CSV_COLUMNS])
        return buf.getvalue()

    def render_json(self, command: str, rows: List[ReportRow], passed: bool,
                    notes: Optional[List[str]] = None) -> str:
        payload = {
            "command": command,
            "version": get_version(),
            "generated": datetime.now().isoformat(timespec="seconds"),
            "passed": passed,
            "notes": notes or [],
            "rows": [row.as_dict() for row in rows],
        }
        return json.dumps(payload, indent=2, default=float)

    def render(self, fmt: str, command: str, rows: List[ReportRow], passed: bool,
               notes: Optional[List[str]] = None) -> str:
        if fmt not in REPORT_FORMATS:
            raise InvalidInputError(f"unknown report format {fmt!r}", field="format")
        if fmt == "csv":
            return self.render_csv(rows)
        return self.render_json(command, rows, passed, notes)

    def save(self, path: str, text: str) -> Path:
        """Write text to path under a file lock

        Args:
            path: Output file path; parent directories are created
            text: Rendered report

        Returns:
            The resolved output path
        """
        out = Path(path)
        out.parent.mkdir(parents=True, exist_ok=True)
        lock = FileLock(str(out.with_suffix(out.suffix + ".lock")), timeout=self.lock_timeout)
        with lock:
            out.write_text(text, encoding="utf-8")
        get_logger().log_info(f"Report written to {out}")
        return out
