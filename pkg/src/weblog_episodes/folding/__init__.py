"""Folding of cleaned access records over a periodicity."""

from weblog_episodes.folding.folder import (
    FoldingError,
    TimePointError,
    fold,
    fold_all,
    format_time_point,
    parse_time_point,
    period_count,
    time_point,
)

__all__ = [
    "FoldingError",
    "TimePointError",
    "fold",
    "fold_all",
    "format_time_point",
    "parse_time_point",
    "period_count",
    "time_point",
]
