"""Brute-force reference implementations used to cross-check discovery.

These enumerate definitions directly and are exponential or quadratic by
nature; they exist for the test suite, not for production runs.
"""

import logging
from collections.abc import Sequence
from decimal import Decimal
from fractions import Fraction

from weblog_episodes.models import Episode, FedInput, FoldedSeries, Semantics, SignificantInterval

logger = logging.getLogger(__name__)


def brute_force_si(
    series: FoldedSeries,
    min_conf: Decimal | Fraction,
    max_len: int | None = None,
) -> set[SignificantInterval]:
    """
    Every window over folded points that is a significant interval by definition.

    A window qualifies when 100 * ac >= min_conf * N and its span is at most max_len
    (None means no limit). Qualifying windows that strictly contain another
    qualifying window are discarded.
    """
    points = series.points
    n = series.period_count
    threshold = Fraction(min_conf) * n
    kept: list[SignificantInterval] = []

    for i in range(len(points)):
        for j in range(i, len(points)):
            span = points[j].time_point - points[i].time_point
            if max_len is not None and span > max_len:
                continue
            access_count = sum(p.access_count for p in points[i : j + 1])
            if 100 * access_count < threshold:
                continue
            kept.append(
                SignificantInterval.from_counts(
                    entity=series.entity,
                    start=points[i].time_point,
                    end=points[j].time_point,
                    access_count=access_count,
                    point_count=j - i + 1,
                    period_count=n,
                )
            )

    def strictly_contains(outer: SignificantInterval, inner: SignificantInterval) -> bool:
        return outer.start <= inner.start and inner.end <= outer.end and outer.bounds != inner.bounds

    return {w for w in kept if not any(strictly_contains(w, other) for other in kept)}


def _violation(
    episode: Episode,
    positions: dict[SignificantInterval, list[int]],
    window: int,
    semantics: Semantics,
    cap: int,
) -> str | None:
    members = episode.members
    if len(members) != episode.level:
        return "member count differs from entity count"
    if tuple(m.entity for m in members) != episode.entities:
        return "entities do not match members"
    if len(set(episode.entities)) != episode.level:
        return "repeated entity"
    if episode.level > cap:
        return f"level {episode.level} exceeds {cap} distinct entities"

    base = members[0]
    if episode.start != base.start:
        return "start differs from base start"
    if episode.end != max(m.end for m in members):
        return "end differs from latest member end"
    if episode.pattern_confidence != min(m.confidence for m in members):
        return "pattern confidence is not the minimum member confidence"

    previous = -1
    for member in members:
        later = [p for p in positions.get(member, []) if p > previous]
        if not later:
            return f"member {member.entity}@{member.start} not found in input order"
        previous = later[0]

    for member in members[1:]:
        if member.start - base.start > window:
            return f"{member.entity} starts outside the window"
        if semantics is Semantics.E and member.end - base.start > window:
            return f"{member.entity} ends outside the window"
    return None


def check_episode_set(
    fed_input: FedInput,
    window: int,
    semantics: Semantics,
    episodes: Sequence[Episode],
) -> bool:
    """
    Validate episodes structurally against the input they were mined from.

    Checks the window rule of the semantics, the pattern-confidence rule, the
    end-point rule, entity distinctness, the level cap and that members are input
    intervals taken in input order starting from the base.
    """
    positions: dict[SignificantInterval, list[int]] = {}
    for index, interval in enumerate(fed_input.intervals):
        positions.setdefault(interval, []).append(index)

    cap = fed_input.entity_count
    for episode in episodes:
        problem = _violation(episode, positions, window, semantics, cap)
        if problem is not None:
            logger.debug("Invalid episode %s: %s", episode.entities, problem)
            return False
    return True
