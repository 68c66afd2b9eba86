"""Significant interval discovery (One-Pass-SI and One-Pass-AllSI)."""

from weblog_episodes.sid.discovery import (
    classify_pair,
    discover_all,
    meets_confidence,
    one_pass_allsi,
    one_pass_si,
    prune_contained,
)

__all__ = [
    "classify_pair",
    "discover_all",
    "meets_confidence",
    "one_pass_allsi",
    "one_pass_si",
    "prune_contained",
]
