"""Significant interval and frequent episode mining over folded web access logs."""

__version__ = "0.1.0"
