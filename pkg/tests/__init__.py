"""Tests for weblog_episodes package."""
