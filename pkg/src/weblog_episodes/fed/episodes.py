"""Frequent episode discovery over significant intervals of several entities."""

import logging
from collections.abc import Iterable, Sequence
from fractions import Fraction

from pydantic import ValidationError

from weblog_episodes.models import Episode, FedInput, Semantics, SignificantInterval

logger = logging.getLogger(__name__)


class FedInputError(ValueError):
    """Episode discovery was given unusable input."""


def pattern_confidence(confidences: Iterable[Fraction]) -> Fraction:
    """
    Confidence of a pattern: the minimum confidence of its members.

    Raises:
        ValueError: If no confidences are given
    """
    values = list(confidences)
    if not values:
        raise ValueError("pattern confidence needs at least one member confidence")
    return min(values)


def build_fed_input(intervals: Iterable[SignificantInterval]) -> FedInput:
    """Order intervals by start point, keeping input order among equal starts."""
    return FedInput(intervals=tuple(sorted(intervals, key=lambda i: i.start)))


def admits(base: SignificantInterval, candidate: SignificantInterval, window: int, semantics: Semantics) -> bool:
    """Whether candidate may join an episode grown from base."""
    if candidate.start - base.start > window:
        return False
    if semantics is Semantics.E:
        return candidate.end - base.start <= window
    return True


def _episode(members: Sequence[SignificantInterval]) -> Episode:
    return Episode(
        entities=tuple(m.entity for m in members),
        start=members[0].start,
        end=max(m.end for m in members),
        pattern_confidence=pattern_confidence(m.confidence for m in members),
        members=tuple(members),
    )


def one_pass_fed(
    fed_input: FedInput | Sequence[SignificantInterval],
    window: int,
    semantics: Semantics = Semantics.S,
) -> list[Episode]:
    """
    Discover frequent episodes with the sequential window rule.

    Every interval serves once as the base of a chain. Scanning forward, each
    admissible interval of an entity not yet in the chain joins it and the grown
    chain is emitted as an episode one level higher. The scan stops at the first
    interval starting more than ``window`` after the base, or when the chain holds
    every distinct entity.

    Args:
        fed_input: Intervals sorted by start point
        window: Sequential window length in granularity units
        semantics: S admits joiners by start; E also requires their end in the window

    Returns:
        Episodes grouped by level (level 2 first), each level in base order

    Raises:
        FedInputError: If the window is negative or the intervals are not sorted
    """
    if window < 0:
        raise FedInputError(f"window must be non-negative, got {window}")
    if not isinstance(fed_input, FedInput):
        try:
            fed_input = FedInput(intervals=tuple(fed_input))
        except ValidationError as e:
            raise FedInputError(e.errors()[0]["msg"]) from None

    intervals = fed_input.intervals
    cap = fed_input.entity_count
    by_level: dict[int, list[Episode]] = {}

    for base_index, base in enumerate(intervals):
        chain = [base]
        seen = {base.entity}
        for candidate in intervals[base_index + 1 :]:
            if len(chain) >= cap:
                break
            if candidate.start - base.start > window:
                break
            if candidate.entity in seen or not admits(base, candidate, window, semantics):
                continue
            chain.append(candidate)
            seen.add(candidate.entity)
            by_level.setdefault(len(chain), []).append(_episode(chain))

    episodes = [episode for level in sorted(by_level) for episode in by_level[level]]
    logger.debug(
        "One-Pass-FED found %d episodes over %d intervals (window=%d, semantics=%s)",
        len(episodes),
        len(intervals),
        window,
        semantics.value,
    )
    return episodes
