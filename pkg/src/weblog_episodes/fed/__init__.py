"""Frequent episode discovery (One-Pass-FED)."""

from weblog_episodes.fed.episodes import FedInputError, admits, build_fed_input, one_pass_fed, pattern_confidence

__all__ = ["FedInputError", "admits", "build_fed_input", "one_pass_fed", "pattern_confidence"]
