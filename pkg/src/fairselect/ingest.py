"""CSV ingestion: derived columns, min-max normalization, grid snapping.

Rows with missing or unparseable score values are dropped (counted in the
report). Every score column is min-max normalized to [0, 1] and snapped to
the decimal grid, which is what makes downstream tie detection exact.
Higher-score-is-better is assumed throughout; negate a column via a derived
column ("neg=zero-col" style) when lower is better.
"""

import csv
from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional

from .errors import IngestError
from .model import Candidate, Dataset


@dataclass(frozen=True)
class IngestionSpec:
    path: str
    score_columns: tuple[str, ...]
    group_column: str
    protected_value: str
    derived_columns: tuple[str, ...] = ()  # "name=colA-colB" (difference; dates in days)
    snap_decimals: int = 6
    delimiter: str = ","

    def __post_init__(self):
        if not self.score_columns:
            raise IngestError("at least one score column is required")
        if self.group_column in self.score_columns:
            raise IngestError("group column cannot also be a score column")


@dataclass
class IngestResult:
    dataset: Dataset
    rows_read: int
    rows_dropped: int
    warnings: list[str] = field(default_factory=list)
    column_names: tuple[str, ...] = ()

    @property
    def protected_share(self) -> float:
        ds = self.dataset
        return ds.protected_count / ds.n


def _parse_derived(exprs) -> list[tuple[str, str, str]]:
    out = []
    for expr in exprs:
        try:
            name, body = expr.split("=", 1)
            left, right = body.split("-", 1)
        except ValueError as e:
            raise IngestError(f"derived column {expr!r} is not name=colA-colB") from e
        out.append((name.strip(), left.strip(), right.strip()))
    return out


def _cell_value(raw: Optional[str]) -> Optional[float]:
    if raw is None:
        return None
    raw = raw.strip()
    if not raw:
        return None
    try:
        return float(raw)
    except ValueError:
        pass
    try:
        return datetime.fromisoformat(raw).timestamp() / 86400.0  # days
    except ValueError:
        return None


def ingest_csv(spec: IngestionSpec) -> IngestResult:
    """Read, derive, normalize and snap a CSV into a Dataset."""
    derived = _parse_derived(spec.derived_columns)
    rows_read = 0
    kept_scores: list[list[float]] = []
    kept_groups: list[str] = []
    with open(spec.path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh, delimiter=spec.delimiter)
        header = reader.fieldnames or []
        needed = set(spec.score_columns) | {spec.group_column}
        for _, left, right in derived:
            needed |= {left, right}
        derived_names = {name for name, _, _ in derived}
        missing = needed - set(header) - derived_names
        if missing:
            raise IngestError(f"missing columns: {sorted(missing)}")
        for row in reader:
            rows_read += 1
            values = {}
            ok = True
            for name, left, right in derived:
                a = _cell_value(row.get(left))
                b = _cell_value(row.get(right))
                if a is None or b is None:
                    ok = False
                    break
                values[name] = a - b
            if ok:
                for col in spec.score_columns:
                    if col in values:
                        continue
                    v = _cell_value(row.get(col))
                    if v is None:
                        ok = False
                        break
                    values[col] = v
            group = (row.get(spec.group_column) or "").strip()
            if not ok or not group:
                continue
            kept_scores.append([values[col] for col in spec.score_columns])
            kept_groups.append(group)

    if not kept_scores:
        raise IngestError("no usable rows after dropping invalid ones")
    warnings: list[str] = []
    n = len(kept_scores)
    scale = 10**spec.snap_decimals
    for j, col in enumerate(spec.score_columns):
        lo = min(r[j] for r in kept_scores)
        hi = max(r[j] for r in kept_scores)
        if hi == lo:
            warnings.append(f"column {col!r} is constant; normalized to 0")
            for r in kept_scores:
                r[j] = 0.0
            continue
        span = hi - lo
        for r in kept_scores:
            r[j] = round((r[j] - lo) / span * scale) / scale

    cands = [
        Candidate(cid=i, scores=tuple(kept_scores[i]), group=kept_groups[i])
        for i in range(n)
    ]
    ds = Dataset(cands, protected=spec.protected_value, grid_decimals=spec.snap_decimals)
    if ds.protected_count == 0:
        warnings.append(
            f"protected value {spec.protected_value!r} matches no rows"
        )
    return IngestResult(
        dataset=ds,
        rows_read=rows_read,
        rows_dropped=rows_read - n,
        warnings=warnings,
        column_names=tuple(spec.score_columns),
    )
