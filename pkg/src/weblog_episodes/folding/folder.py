"""Folding of per-entity access records over a periodicity."""

import logging
import re
from collections import Counter
from collections.abc import Mapping, Sequence
from datetime import datetime
from itertools import chain

from weblog_episodes.models import FoldedPoint, FoldedSeries, Granularity, LogRecord, Periodicity

logger = logging.getLogger(__name__)

WEEKDAY_NAMES = ["Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"]

CLOCK_PATTERN = re.compile(
    r"^(?:(?P<day>[A-Za-z]{3})\s+)?"
    r"(?P<hour>\d{1,2}):(?P<minute>\d{2})(?::(?P<second>\d{2}))?"
    r"\s*(?P<meridiem>[aApP][mM])?$"
)


class FoldingError(ValueError):
    """Records cannot be folded into a single series."""


class TimePointError(ValueError):
    """A time point in clock notation could not be read."""


def time_point(timestamp: datetime, periodicity: Periodicity, granularity: Granularity) -> int:
    """
    Offset of a timestamp from the start of its period.

    Daily periods start at midnight, weekly periods at Monday 00:00.
    """
    minutes = timestamp.hour * 60 + timestamp.minute
    if periodicity is Periodicity.WEEKLY:
        minutes += timestamp.weekday() * 1440
    if granularity is Granularity.SECOND:
        return minutes * 60 + timestamp.second
    return minutes


def period_index(record: LogRecord, periodicity: Periodicity) -> int:
    """Index of the day or (Monday-anchored) week a record falls in."""
    ordinal = record.timestamp.date().toordinal()
    if periodicity is Periodicity.WEEKLY:
        # date.toordinal() is 1 on Monday 0001-01-01
        return (ordinal - 1) // 7
    return ordinal


def period_count(records: Sequence[LogRecord], periodicity: Periodicity, n_override: int | None = None) -> int:
    """
    Number of periods (N) the records were collected over.

    Args:
        records: Records of one or more entities
        periodicity: Daily or weekly
        n_override: Configured N that replaces the computed value

    Returns:
        Inclusive count of periods from the earliest to the latest record

    Raises:
        FoldingError: If there are no records and no override
    """
    if n_override is not None:
        if n_override < 1:
            raise FoldingError(f"N override must be positive, got {n_override}")
        return n_override
    if not records:
        raise FoldingError("cannot count periods of an empty record list without an N override")
    indices = [period_index(r, periodicity) for r in records]
    return max(indices) - min(indices) + 1


def fold(
    records: Sequence[LogRecord],
    periodicity: Periodicity = Periodicity.DAILY,
    granularity: Granularity = Granularity.MINUTE,
    n_override: int | None = None,
    entity: str | None = None,
) -> FoldedSeries:
    """
    Fold one entity's access records into per-time-point access counts.

    Args:
        records: Cleaned access records of a single entity
        periodicity: Period to fold over
        granularity: Resolution of time points
        n_override: Configured N; required when records is empty
        entity: Entity name, needed only for an empty record list

    Returns:
        FoldedSeries with points sorted by time point

    Raises:
        FoldingError: If records mix entities, contain non-access records, or are
            empty without both an entity name and an N override
    """
    names = {r.entity for r in records}
    if len(names) > 1:
        raise FoldingError(f"cannot fold records of several entities together: {', '.join(sorted(names))}")
    if any(not r.is_access() for r in records):
        raise FoldingError("only access records can be folded; clean the log first")

    name = names.pop() if names else entity
    if name is None:
        raise FoldingError("an empty record list needs an explicit entity name")
    if entity is not None and entity != name:
        raise FoldingError(f"records belong to {name!r}, not {entity!r}")

    counts = Counter(time_point(r.timestamp, periodicity, granularity) for r in records)
    points = tuple(FoldedPoint(time_point=t, access_count=c) for t, c in sorted(counts.items()))
    n = period_count(records, periodicity, n_override)

    logger.debug("Folded %d records of %s into %d points (N=%d)", len(records), name, len(points), n)
    return FoldedSeries(
        entity=name,
        periodicity=periodicity,
        granularity=granularity,
        points=points,
        period_count=n,
    )


def fold_all(
    partitions: Mapping[str, Sequence[LogRecord]],
    periodicity: Periodicity = Periodicity.DAILY,
    granularity: Granularity = Granularity.MINUTE,
    n_override: int | None = None,
) -> dict[str, FoldedSeries]:
    """
    Fold every cleaned partition, keyed by entity.

    All series share one N: the override if given, otherwise the period count of
    the whole log from its first to its last access.
    """
    if not partitions:
        return {}
    n = period_count(list(chain.from_iterable(partitions.values())), periodicity, n_override)
    return {
        entity: fold(records, periodicity, granularity, n_override=n, entity=entity)
        for entity, records in partitions.items()
    }


def format_time_point(offset: int, periodicity: Periodicity, granularity: Granularity) -> str:
    """Render an offset as clock text, e.g. "14:05", "14:05:30" or "Mon 14:05"."""
    seconds = offset * 60 if granularity is Granularity.MINUTE else offset
    day, seconds = divmod(seconds, 86400)
    hours, seconds = divmod(seconds, 3600)
    minutes, seconds = divmod(seconds, 60)

    clock = f"{hours}:{minutes:02d}"
    if granularity is Granularity.SECOND:
        clock += f":{seconds:02d}"
    if periodicity is Periodicity.WEEKLY:
        return f"{WEEKDAY_NAMES[day]} {clock}"
    return clock


def parse_time_point(text: str, periodicity: Periodicity, granularity: Granularity) -> int:
    """
    Read a time point written as an integer offset or as clock text.

    Accepts "845", "14:05", "2:05 pm", "14:05:30" and, for weekly periods, "Tue 14:05".

    Raises:
        TimePointError: If the text is malformed or outside the period
    """
    text = text.strip()
    limit = periodicity.length(granularity)

    if text.isdigit():
        offset = int(text)
    else:
        match = CLOCK_PATTERN.match(text)
        if match is None:
            raise TimePointError(f"malformed time point {text!r}")

        hour, minute = int(match["hour"]), int(match["minute"])
        second = int(match["second"] or 0)
        if match["meridiem"]:
            if not 1 <= hour <= 12:
                raise TimePointError(f"hour out of range in {text!r}")
            hour = hour % 12 + (12 if match["meridiem"].lower() == "pm" else 0)
        if hour > 23 or minute > 59 or second > 59:
            raise TimePointError(f"clock value out of range in {text!r}")

        day = 0
        if match["day"]:
            if periodicity is not Periodicity.WEEKLY:
                raise TimePointError(f"weekday given for a daily time point: {text!r}")
            try:
                day = [d.lower() for d in WEEKDAY_NAMES].index(match["day"].lower())
            except ValueError:
                raise TimePointError(f"unknown weekday in {text!r}") from None

        if granularity is Granularity.MINUTE:
            if second:
                raise TimePointError(f"seconds given for a minute time point: {text!r}")
            offset = day * 1440 + hour * 60 + minute
        else:
            offset = day * 86400 + hour * 3600 + minute * 60 + second

    if offset >= limit:
        raise TimePointError(f"time point {text!r} outside period of {limit} units")
    return offset
