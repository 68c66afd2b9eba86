"""Log file parser and data cleaning for access records."""

import csv
import io
import logging
from collections.abc import Iterable
from datetime import datetime
from pathlib import Path
from typing import TextIO

from pydantic import ValidationError

from weblog_episodes.models import AccessStatus, LogRecord, TimestampFormat

logger = logging.getLogger(__name__)

# Layout of the sample tables, e.g. "4/15/2009 2:05 pm"
MDY_TIMESTAMP_FORMATS = ["%m/%d/%Y %I:%M %p", "%m/%d/%Y %I:%M:%S %p", "%m/%d/%Y %H:%M"]

HEADER_NAMES = {"entity", "website", "site"}


class LogParseError(ValueError):
    """A log line could not be turned into a record."""

    def __init__(self, line_number: int, message: str) -> None:
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


def _parse_mdy_timestamp(text: str) -> datetime | None:
    for fmt in MDY_TIMESTAMP_FORMATS:
        try:
            return datetime.strptime(text, fmt)
        except ValueError:
            continue
    return None


def _parse_iso_timestamp(text: str) -> datetime | None:
    try:
        value = datetime.fromisoformat(text)
    except ValueError:
        return None
    # Timestamps are naive local time
    return value.replace(tzinfo=None, microsecond=0)


def parse_timestamp(text: str, timestamp_format: TimestampFormat = TimestampFormat.AUTO) -> datetime | None:
    """
    Parse a timestamp in one of the accepted layouts.

    Args:
        text: Timestamp text
        timestamp_format: Layout selector; AUTO tries month/day/year then ISO-8601

    Returns:
        Parsed naive datetime, or None if the text matches no accepted layout
    """
    text = " ".join(text.split())
    if timestamp_format is TimestampFormat.MDY:
        return _parse_mdy_timestamp(text)
    if timestamp_format is TimestampFormat.ISO:
        return _parse_iso_timestamp(text)
    return _parse_mdy_timestamp(text) or _parse_iso_timestamp(text)


def format_timestamp(value: datetime) -> str:
    """Format a timestamp the way cleaned files store it."""
    if value.second:
        return value.strftime("%Y-%m-%d %H:%M:%S")
    return value.strftime("%Y-%m-%d %H:%M")


def _parse_status(text: str) -> AccessStatus | None:
    normalized = text.replace(" ", "").replace("_", "").replace("-", "")
    try:
        return AccessStatus(normalized)
    except ValueError:
        return None


def _is_header(row: list[str]) -> bool:
    return bool(row) and row[0].strip().lower() in HEADER_NAMES


def parse_log(
    source: Iterable[str],
    timestamp_format: TimestampFormat = TimestampFormat.AUTO,
    delimiter: str = ",",
) -> list[LogRecord]:
    """
    Parse delimited log lines into records.

    Each non-empty line holds entity, access status and timestamp. A leading header
    line is skipped when its first column names the entity column.

    Args:
        source: Text stream or iterable of lines
        timestamp_format: Accepted timestamp layout
        delimiter: Column delimiter

    Returns:
        One LogRecord per non-empty line, in file order

    Raises:
        LogParseError: If a line has the wrong shape, an unknown status, an empty
            entity or an unparseable timestamp
    """
    records: list[LogRecord] = []
    reader = csv.reader(source, delimiter=delimiter)
    first_row = True

    for row in reader:
        line_number = reader.line_num
        cells = [cell.strip() for cell in row]
        if not any(cells):
            continue
        if first_row:
            first_row = False
            if _is_header(cells):
                continue

        if len(cells) != 3:
            raise LogParseError(line_number, f"expected 3 columns, found {len(cells)}")

        entity, status_text, timestamp_text = cells
        if not entity:
            raise LogParseError(line_number, "empty entity")

        status = _parse_status(status_text)
        if status is None:
            raise LogParseError(line_number, f"unknown access status {status_text!r}")

        timestamp = parse_timestamp(timestamp_text, timestamp_format)
        if timestamp is None:
            raise LogParseError(line_number, f"malformed timestamp {timestamp_text!r}")

        try:
            records.append(LogRecord(entity=entity, status=status, timestamp=timestamp))
        except ValidationError as e:
            raise LogParseError(line_number, str(e)) from None

    return records


def parse_log_file(
    path: Path,
    timestamp_format: TimestampFormat = TimestampFormat.AUTO,
    delimiter: str = ",",
) -> list[LogRecord]:
    """
    Parse a log file and return its records.

    Raises:
        FileNotFoundError: If the file doesn't exist
        LogParseError: If any line is malformed
    """
    if not path.exists():
        raise FileNotFoundError(f"Log file not found: {path}")

    logger.info("Parsing log file: %s", path)

    raw = path.read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise LogParseError(raw.count(b"\n", 0, e.start) + 1, f"not valid UTF-8 ({e.reason})") from None
    records = parse_log(io.StringIO(text, newline=""), timestamp_format=timestamp_format, delimiter=delimiter)

    logger.info("Parsed %d records from log file", len(records))
    return records


def serialize_log(records: Iterable[LogRecord], sink: TextIO, header: bool = True) -> None:
    """Write records in the same column layout parse_log reads."""
    writer = csv.writer(sink, lineterminator="\n")
    if header:
        writer.writerow(["entity", "status", "timestamp"])
    for record in records:
        writer.writerow([record.entity, record.status.value, format_timestamp(record.timestamp)])


def clean(records: Iterable[LogRecord]) -> dict[str, list[LogRecord]]:
    """
    Keep only access records and separate them per entity.

    Partitions appear in order of each entity's first access; within a partition
    the original order is preserved.
    """
    partitions: dict[str, list[LogRecord]] = {}
    dropped = 0
    for record in records:
        if not record.is_access():
            dropped += 1
            continue
        partitions.setdefault(record.entity, []).append(record)

    logger.debug("Cleaning kept %d entities, dropped %d non-access records", len(partitions), dropped)
    return partitions
