"""Reference implementations for cross-checking discovery results."""

from weblog_episodes.oracle.reference import brute_force_si, check_episode_set

__all__ = ["brute_force_si", "check_episode_set"]
