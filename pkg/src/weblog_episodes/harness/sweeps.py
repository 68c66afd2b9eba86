"""Parameter sweeps over discovery and episode mining.

Each sweep reruns one procedure for a list of parameter values and records the
number of results and the elapsed time. Counts are deterministic; timings are
reported for plotting only.
"""

import logging
import time
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import TypeVar

from weblog_episodes.fed.episodes import build_fed_input, one_pass_fed
from weblog_episodes.models import FoldedSeries, Semantics, SignificantInterval
from weblog_episodes.sid.discovery import one_pass_allsi, one_pass_si

logger = logging.getLogger(__name__)

T = TypeVar("T", int, Decimal)


@dataclass
class SweepRow:
    """Result count and elapsed time at one parameter value."""

    parameter_value: int | Decimal
    count: int
    elapsed_micros: int


@dataclass
class SweepResult:
    """Counts across a range of one parameter, sorted by parameter value."""

    parameter: str
    rows: list[SweepRow] = field(default_factory=list)

    def counts(self) -> list[int]:
        return [row.count for row in self.rows]

    def values(self) -> list[int | Decimal]:
        return [row.parameter_value for row in self.rows]


def _timed(run: Callable[[], int]) -> tuple[int, int]:
    started = time.perf_counter_ns()
    count = run()
    return count, (time.perf_counter_ns() - started) // 1000


def _sweep(parameter: str, values: Iterable[T], run: Callable[[T], int]) -> SweepResult:
    result = SweepResult(parameter=parameter)
    for value in sorted(set(values)):
        count, elapsed = _timed(lambda value=value: run(value))
        result.rows.append(SweepRow(parameter_value=value, count=count, elapsed_micros=elapsed))
        logger.debug("Sweep %s=%s -> %d results (%d us)", parameter, value, count, elapsed)
    return result


def _count_si(dataset: Mapping[str, FoldedSeries], min_conf: Decimal | Fraction, max_len: int | None) -> int:
    if max_len is None:
        return sum(len(one_pass_allsi(series, min_conf)) for series in dataset.values())
    return sum(len(one_pass_si(series, min_conf, max_len)) for series in dataset.values())


def sweep_maxlen(
    dataset: Mapping[str, FoldedSeries],
    min_conf: Decimal | Fraction,
    max_len_values: Iterable[int],
) -> SweepResult:
    """Total One-Pass-SI interval count over all entities for each max-Len."""
    return _sweep("max_len", max_len_values, lambda value: _count_si(dataset, min_conf, value))


def sweep_minconf(
    dataset: Mapping[str, FoldedSeries],
    max_len: int,
    min_conf_values: Iterable[Decimal],
) -> SweepResult:
    """Total One-Pass-SI interval count over all entities for each min-conf."""
    return _sweep("min_conf", min_conf_values, lambda value: _count_si(dataset, value, max_len))


def compare_si_allsi(
    dataset: Mapping[str, FoldedSeries],
    max_len: int,
    min_conf_values: Iterable[Decimal],
) -> tuple[SweepResult, SweepResult]:
    """
    One-Pass-SI and One-Pass-AllSI counts and timings at the same min-conf values.

    Returns:
        (SI sweep, AllSI sweep)
    """
    values = list(min_conf_values)
    si = _sweep("min_conf", values, lambda value: _count_si(dataset, value, max_len))
    allsi = _sweep("min_conf", values, lambda value: _count_si(dataset, value, None))
    return si, allsi


def sweep_window(
    intervals: Sequence[SignificantInterval],
    window_values: Iterable[int],
    semantics: Semantics = Semantics.S,
) -> SweepResult:
    """One-Pass-FED episode count for each sequential window length."""
    fed_input = build_fed_input(intervals)
    return _sweep("window", window_values, lambda value: len(one_pass_fed(fed_input, value, semantics)))
