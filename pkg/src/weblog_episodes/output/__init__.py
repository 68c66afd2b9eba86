"""Reading and writing result tables."""

from weblog_episodes.output.exporter import Exporter, atomic_write_text
from weblog_episodes.output.loaders import TableFormatError, load_folded, load_intervals, read_layout, read_table

__all__ = [
    "Exporter",
    "TableFormatError",
    "atomic_write_text",
    "load_folded",
    "load_intervals",
    "read_layout",
    "read_table",
]
