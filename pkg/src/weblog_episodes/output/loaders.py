"""Readers for the CSV tables the exporter writes.

Files may start with a ``# periodicity=...,granularity=...`` line. Headers are
matched loosely so hand-made tables ("Website,Start Time,End Time,Confidence")
load as well as exported ones.
"""

import csv
import io
import logging
import re
from collections.abc import Iterator
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path

from pydantic import ValidationError

from weblog_episodes.folding.folder import TimePointError, parse_time_point
from weblog_episodes.models import FoldedPoint, FoldedSeries, Granularity, Periodicity, SignificantInterval

logger = logging.getLogger(__name__)

_HEADER_ALIASES = {
    "website": "entity",
    "site": "entity",
    "starttime": "startpoint",
    "start": "startpoint",
    "endtime": "endpoint",
    "end": "endpoint",
    "time": "timepoint",
    "conf": "confidence",
    "ac": "accesscount",
    "n": "periodcount",
}


class TableFormatError(ValueError):
    """A CSV table is missing columns or holds an unreadable value."""

    def __init__(self, path: Path, line_number: int, message: str) -> None:
        super().__init__(f"{path}, line {line_number}: {message}")
        self.path = path
        self.line_number = line_number


def _normalize_header(name: str) -> str:
    key = re.sub(r"[\s_%()-]+", "", name.strip().lower())
    return _HEADER_ALIASES.get(key, key)


def read_layout(path: Path) -> tuple[Periodicity | None, Granularity | None]:
    """Periodicity and granularity declared on a file's leading comment line, if any."""
    first = _text(path).partition("\n")[0].strip()
    if not first.startswith("#"):
        return None, None

    settings = dict(
        part.split("=", 1) for part in first.lstrip("#").replace(" ", "").split(",") if "=" in part
    )
    try:
        periodicity = Periodicity(settings["periodicity"]) if "periodicity" in settings else None
        granularity = Granularity(settings["granularity"]) if "granularity" in settings else None
    except ValueError as e:
        raise TableFormatError(path, 1, str(e)) from None
    return periodicity, granularity


def read_table(path: Path) -> tuple[list[str], list[list[str]]]:
    """
    Read a CSV table, skipping comment lines and blank rows.

    Returns:
        (header cells as written, data rows)

    Raises:
        FileNotFoundError: If the file doesn't exist
        TableFormatError: If the file has no header row
    """
    rows = list(_rows(path))
    if not rows:
        raise TableFormatError(path, 1, "file has no header row")
    return rows[0][1], [cells for _, cells in rows[1:]]


def _text(path: Path) -> str:
    raw = path.read_bytes()
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise TableFormatError(path, raw.count(b"\n", 0, e.start) + 1, f"not valid UTF-8 ({e.reason})") from None


def _rows(path: Path) -> Iterator[tuple[int, list[str]]]:
    if not path.exists():
        raise FileNotFoundError(f"Table not found: {path}")
    reader = csv.reader(io.StringIO(_text(path), newline=""))
    for row in reader:
        cells = [cell.strip() for cell in row]
        if not any(cells) or cells[0].startswith("#"):
            continue
        yield reader.line_num, cells


def _records(path: Path, required: set[str]) -> Iterator[tuple[int, dict[str, str]]]:
    rows = _rows(path)
    header_row = next(rows, None)
    if header_row is None:
        raise TableFormatError(path, 1, "file has no header row")
    header_line, header = header_row
    columns = [_normalize_header(name) for name in header]
    missing = sorted(required - set(columns))
    if missing:
        raise TableFormatError(path, header_line, f"missing columns: {', '.join(missing)}")

    for line_number, cells in rows:
        if len(cells) != len(columns):
            raise TableFormatError(path, line_number, f"expected {len(columns)} columns, found {len(cells)}")
        yield line_number, dict(zip(columns, cells, strict=True))


def _int(path: Path, line_number: int, value: str, column: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise TableFormatError(path, line_number, f"{column} is not an integer: {value!r}") from None


def _optional_int(path: Path, line_number: int, record: dict[str, str], column: str) -> int | None:
    value = record.get(column.lower())
    return _int(path, line_number, value, column) if value else None


def _point(
    path: Path,
    line_number: int,
    record: dict[str, str],
    columns: tuple[str, ...],
    periodicity: Periodicity,
    granularity: Granularity,
) -> int:
    for column in columns:
        if record.get(column):
            try:
                return parse_time_point(record[column], periodicity, granularity)
            except TimePointError as e:
                raise TableFormatError(path, line_number, str(e)) from None
    raise TableFormatError(path, line_number, f"no value for {columns[0]}")


def load_folded(
    path: Path,
    n_override: int | None = None,
    periodicity: Periodicity | None = None,
    granularity: Granularity | None = None,
) -> dict[str, FoldedSeries]:
    """
    Load folded series from a CSV with entity, timePoint and accessCount columns.

    Args:
        path: Folded CSV file
        n_override: N used instead of the periodCount column (required if the file has none)
        periodicity: Overrides the file's declared periodicity (default daily)
        granularity: Overrides the file's declared granularity (default minute)

    Returns:
        FoldedSeries keyed by entity, in order of first appearance

    Raises:
        TableFormatError: If columns are missing, a value is malformed, a time point
            repeats for an entity or N is unknown
    """
    declared_p, declared_g = read_layout(path) if path.exists() else (None, None)
    periodicity = periodicity or declared_p or Periodicity.DAILY
    granularity = granularity or declared_g or Granularity.MINUTE

    points: dict[str, dict[int, int]] = {}
    period_counts: dict[str, int] = {}
    for line_number, record in _records(path, {"entity", "accesscount"}):
        entity = record["entity"]
        if not entity:
            raise TableFormatError(path, line_number, "empty entity")
        offset = _point(path, line_number, record, ("timepoint", "clock"), periodicity, granularity)
        count = _int(path, line_number, record["accesscount"], "accessCount")
        if count < 1:
            raise TableFormatError(path, line_number, f"accessCount must be positive, got {count}")

        series_points = points.setdefault(entity, {})
        if offset in series_points:
            raise TableFormatError(path, line_number, f"time point {offset} repeated for {entity}")
        series_points[offset] = count

        if n_override is None and record.get("periodcount"):
            n = _int(path, line_number, record["periodcount"], "periodCount")
            if period_counts.setdefault(entity, n) != n:
                raise TableFormatError(path, line_number, f"conflicting periodCount for {entity}")

    dataset: dict[str, FoldedSeries] = {}
    for entity, series_points in points.items():
        n = n_override if n_override is not None else period_counts.get(entity)
        if n is None:
            raise TableFormatError(path, 1, f"no periodCount for {entity}; pass an N override")
        try:
            dataset[entity] = FoldedSeries(
                entity=entity,
                periodicity=periodicity,
                granularity=granularity,
                points=tuple(FoldedPoint(time_point=t, access_count=c) for t, c in sorted(series_points.items())),
                period_count=n,
            )
        except ValidationError as e:
            raise TableFormatError(path, 1, f"{entity}: {e.errors()[0]['msg']}") from None

    logger.info("Loaded folded series of %d entities from %s", len(dataset), path)
    return dataset


def _confidence(path: Path, line_number: int, text: str) -> Fraction:
    try:
        return Fraction(Decimal(text.rstrip("%").strip()))
    except (InvalidOperation, ValueError):
        raise TableFormatError(path, line_number, f"malformed confidence {text!r}") from None


def load_intervals(
    path: Path,
    periodicity: Periodicity | None = None,
    granularity: Granularity | None = None,
) -> list[SignificantInterval]:
    """
    Load significant intervals in file order.

    Start and end points may be offsets or clock text. When accessCount and
    periodCount are present the confidence is recomputed exactly from them;
    otherwise the confidence column is taken as written.

    Raises:
        FileNotFoundError: If the file doesn't exist
        TableFormatError: If columns are missing or a value is malformed
    """
    declared_p, declared_g = read_layout(path) if path.exists() else (None, None)
    periodicity = periodicity or declared_p or Periodicity.DAILY
    granularity = granularity or declared_g or Granularity.MINUTE

    intervals: list[SignificantInterval] = []
    for line_number, record in _records(path, {"entity"}):
        start = _point(path, line_number, record, ("startpoint", "startclock"), periodicity, granularity)
        end = _point(path, line_number, record, ("endpoint", "endclock"), periodicity, granularity)

        access_count = _optional_int(path, line_number, record, "accessCount")
        point_count = _optional_int(path, line_number, record, "pointCount")
        n = _optional_int(path, line_number, record, "periodCount")

        if access_count is not None and n is not None:
            confidence = Fraction(100 * access_count, n)
        elif record.get("confidence"):
            confidence = _confidence(path, line_number, record["confidence"])
        else:
            raise TableFormatError(path, line_number, "no confidence and no accessCount/periodCount")

        try:
            intervals.append(
                SignificantInterval(
                    entity=record["entity"],
                    start=start,
                    end=end,
                    confidence=confidence,
                    access_count=access_count,
                    point_count=point_count,
                    period_count=n,
                )
            )
        except ValidationError as e:
            raise TableFormatError(path, line_number, e.errors()[0]["msg"]) from None

    logger.info("Loaded %d intervals from %s", len(intervals), path)
    return intervals
