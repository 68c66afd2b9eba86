"""Log ingestion: parsing raw access logs and data cleaning."""

from weblog_episodes.ingest.log_parser import LogParseError, clean, parse_log, parse_log_file, serialize_log

__all__ = ["LogParseError", "clean", "parse_log", "parse_log_file", "serialize_log"]
