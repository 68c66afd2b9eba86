"""Synthetic data, parameter sweeps and contribution reporting."""

from weblog_episodes.harness.contribution import ContributionRow, contribution_report, mine_monthly
from weblog_episodes.harness.generator import five_site_spec, generate
from weblog_episodes.harness.sweeps import (
    SweepResult,
    SweepRow,
    compare_si_allsi,
    sweep_maxlen,
    sweep_minconf,
    sweep_window,
)

__all__ = [
    # Generator
    "five_site_spec",
    "generate",
    # Sweeps
    "SweepResult",
    "SweepRow",
    "compare_si_allsi",
    "sweep_maxlen",
    "sweep_minconf",
    "sweep_window",
    # Contribution
    "ContributionRow",
    "contribution_report",
    "mine_monthly",
]
