"""Significant interval discovery over folded time series.

Implements the two single-pass discovery procedures:

- One-Pass-SI: minimal windows meeting min-conf whose span is within max-Len
- One-Pass-AllSI: the same without a length limit

Both return only valid intervals: no result strictly contains another result of
the same entity.
"""

import logging
from collections.abc import Iterable, Mapping
from decimal import Decimal
from fractions import Fraction
from itertools import groupby

from weblog_episodes.models import FoldedSeries, PairRelation, SignificantInterval

logger = logging.getLogger(__name__)


def meets_confidence(access_count: int, period_count: int, min_conf: Decimal | Fraction) -> bool:
    """Exact test of 100 * ac / N >= min_conf."""
    return 100 * access_count >= Fraction(min_conf) * period_count


def _minimal_windows(series: FoldedSeries, min_conf: Decimal | Fraction) -> list[SignificantInterval]:
    """
    Shortest window reaching min_conf for every start point, in one sweep.

    The smallest qualifying end never moves left as the start moves right (counts
    are positive), so a single running window over the points suffices.
    """
    if min_conf <= 0:
        raise ValueError(f"min_conf must be positive, got {min_conf}")
    points = series.points
    n = series.period_count
    windows: list[SignificantInterval] = []

    end = 0  # window is points[start:end]
    running = 0
    for start, first in enumerate(points):
        while end < len(points) and not meets_confidence(running, n, min_conf):
            running += points[end].access_count
            end += 1
        if not meets_confidence(running, n, min_conf):
            # Later starts only see smaller sums
            break
        windows.append(
            SignificantInterval.from_counts(
                entity=series.entity,
                start=first.time_point,
                end=points[end - 1].time_point,
                access_count=running,
                point_count=end - start,
                period_count=n,
            )
        )
        running -= first.access_count

    return windows


def prune_contained(candidates: Iterable[SignificantInterval]) -> list[SignificantInterval]:
    """
    Drop every candidate that strictly contains another candidate.

    Identical bounds are not containment; both copies survive. Survivors are
    returned sorted by (start, end).
    """
    ordered = sorted(candidates, key=lambda c: (-c.start, c.end))
    survivors: list[SignificantInterval] = []
    min_end_after: int | None = None  # smallest end among strictly later starts

    for _, group_iter in groupby(ordered, key=lambda c: c.start):
        group = list(group_iter)
        group_min_end = group[0].end
        for candidate in group:
            embeds_later = min_end_after is not None and min_end_after <= candidate.end
            embeds_same_start = group_min_end < candidate.end
            if not (embeds_later or embeds_same_start):
                survivors.append(candidate)
        if min_end_after is None or group_min_end < min_end_after:
            min_end_after = group_min_end

    survivors.sort(key=lambda c: (c.start, c.end))
    return survivors


def one_pass_si(series: FoldedSeries, min_conf: Decimal | Fraction, max_len: int) -> list[SignificantInterval]:
    """
    Discover significant intervals whose span is at most max_len.

    Args:
        series: Folded series of one entity
        min_conf: Minimum confidence in percent
        max_len: Maximum span (end - start) in granularity units

    Returns:
        Valid significant intervals sorted by (start, end)
    """
    if max_len < 0:
        raise ValueError(f"max_len must be non-negative, got {max_len}")
    candidates = [w for w in _minimal_windows(series, min_conf) if w.span <= max_len]
    intervals = prune_contained(candidates)
    logger.debug("One-Pass-SI found %d intervals for %s", len(intervals), series.entity)
    return intervals


def one_pass_allsi(series: FoldedSeries, min_conf: Decimal | Fraction) -> list[SignificantInterval]:
    """Discover significant intervals of any length."""
    intervals = prune_contained(_minimal_windows(series, min_conf))
    logger.debug("One-Pass-AllSI found %d intervals for %s", len(intervals), series.entity)
    return intervals


def discover_all(
    dataset: Mapping[str, FoldedSeries],
    min_conf: Decimal | Fraction,
    max_len: int | None = None,
) -> list[SignificantInterval]:
    """
    Run discovery over every entity.

    Uses One-Pass-SI when max_len is given and One-Pass-AllSI otherwise.

    Returns:
        Intervals of all entities sorted by (entity, start, end)
    """
    found: list[SignificantInterval] = []
    for series in dataset.values():
        if max_len is None:
            found.extend(one_pass_allsi(series, min_conf))
        else:
            found.extend(one_pass_si(series, min_conf, max_len))
    found.sort(key=lambda i: (i.entity, i.start, i.end))
    return found


def classify_pair(a: SignificantInterval, b: SignificantInterval) -> PairRelation:
    """
    Relationship between two intervals of the same entity.

    Raises:
        ValueError: If the intervals belong to different entities
    """
    if a.entity != b.entity:
        raise ValueError(f"cannot classify intervals of {a.entity!r} and {b.entity!r}")
    if a.bounds == b.bounds:
        return PairRelation.EQUAL
    if (a.start <= b.start and b.end <= a.end) or (b.start <= a.start and a.end <= b.end):
        return PairRelation.CONTAINED
    if a.start <= b.end and b.start <= a.end:
        return PairRelation.OVERLAPPING
    return PairRelation.DISJOINT
