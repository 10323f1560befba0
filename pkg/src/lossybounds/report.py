"""Tabular reports with deterministic CSV and JSON serialization."""
import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import List, Optional

SANDWICH_COLUMNS = ("space_id", "n", "L_n", "U_n", "v_hat", "v_ci", "scaled_L", "scaled_U", "scaled_v", "pass")


def format_value(value):
    """Shortest round-trip text for numbers; blanks for missing values."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return str(value)


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return format_value(value)
    return value


@dataclass
class Report:
    columns: tuple
    rows: List[dict] = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    pass_column: Optional[str] = "pass"

    def add(self, **row):
        missing = set(self.columns) - set(row)
        if missing:
            raise KeyError(f"row is missing columns {sorted(missing)}")
        self.rows.append(row)

    @property
    def violations(self):
        if self.pass_column is None:
            return []
        return [row for row in self.rows if row.get(self.pass_column) is False]

    @property
    def all_passed(self):
        return not self.violations

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([format_value(row[c]) for c in self.columns])
        return buf.getvalue()

    def to_json(self):
        payload = {
            "columns": list(self.columns),
            "rows": [{c: _json_value(row[c]) for c in self.columns} for row in self.rows],
            "meta": self.meta,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def write(self, path, fmt="csv"):
        text = self.to_csv() if fmt == "csv" else self.to_json()
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)

    def summary_lines(self):
        for row in self.rows:
            yield "  ".join(f"{c}={format_value(row[c])}" for c in self.columns)


def BoundReport(space_id=None, meta=None):
    """Empty sandwich report with the fixed bound-report columns."""
    meta = dict(meta or {})
    if space_id is not None:
        meta.setdefault("space_id", space_id)
    return Report(SANDWICH_COLUMNS, meta=meta)
