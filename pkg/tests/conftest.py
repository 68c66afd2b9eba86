"""Pytest fixtures for weblog_episodes tests."""

import io
import tempfile
from collections.abc import Generator
from fractions import Fraction
from pathlib import Path

import pytest

from weblog_episodes.fed.episodes import build_fed_input
from weblog_episodes.folding.folder import fold_all
from weblog_episodes.ingest.log_parser import clean, parse_log
from weblog_episodes.models import FedInput, FoldedPoint, FoldedSeries, LogRecord, SignificantInterval

# Seven days of raw access log for two websites
SAMPLE_LOG = """\
Website,Access Status,Timestamp
Citeseer.com,Access,4/15/2009 2:05 pm
Rgtu.net,Access,4/15/2009 2:10 pm
Citeseer.com,Access,4/16/2009 2:10 pm
Citeseer.com,Access,4/17/2009 2:40 pm
Citeseer.com,Access,4/18/2009 2:40 pm
Rgtu.net,Access,4/19/2009 2:10 pm
Citeseer.com,Access,4/19/2009 2:05 pm
Rgtu.net,Access,4/20/2009 2:20 pm
Rgtu.net,Access,4/20/2009 2:10 pm
Rgtu.net,Access,4/21/2009 2:05 pm
Citeseer.com,Access,4/21/2009 2:05 pm
Citeseer.com,Access,4/21/2009 2:10 pm
Rgtu.net,Access,4/22/2009 2:05 pm
Citeseer.com,Access,4/22/2009 2:10 pm
Rgtu.net,Access,4/22/2009 2:20 pm
"""

# Ten days of one website plus a second that only appears on the last two
UNEVEN_SPAN_LOG = "".join(
    [f"A.com,Access,2009-04-{day:02d} 14:05\n" for day in range(1, 11)]
    + [f"B.com,Access,2009-04-{day:02d} 14:05\n" for day in (9, 10)]
)

# Significant intervals of three websites, in clock notation
SAMPLE_INTERVALS = """\
Website,Start Time,End Time,Confidence
Citeseer.com,1:00,1:15,70
Rgtu.net,1:10,1:20,80
Newsworld.com,2:00,2:10,75
Citeseer.com,2:00,2:10,80
Rgtu.net,2:05,2:15,70
"""


@pytest.fixture
def temp_dir() -> Generator[Path]:
    """Create a temporary directory for test files."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def sample_log_text() -> str:
    """Raw log of two websites over a week."""
    return SAMPLE_LOG


@pytest.fixture
def sample_log_file(temp_dir: Path) -> Path:
    """The sample raw log written to disk."""
    path = temp_dir / "access_log.csv"
    path.write_text(SAMPLE_LOG)
    return path


@pytest.fixture
def sample_records() -> list[LogRecord]:
    """Parsed records of the sample raw log."""
    return parse_log(io.StringIO(SAMPLE_LOG))


@pytest.fixture
def uneven_span_log_file(temp_dir: Path) -> Path:
    """Log whose two websites span ten days and two days."""
    path = temp_dir / "uneven_log.csv"
    path.write_text(UNEVEN_SPAN_LOG)
    return path


@pytest.fixture
def uneven_span_records() -> list[LogRecord]:
    """Parsed records of the uneven span log."""
    return parse_log(io.StringIO(UNEVEN_SPAN_LOG))


@pytest.fixture
def sample_dataset(sample_records: list[LogRecord]) -> dict[str, FoldedSeries]:
    """Sample log cleaned and folded daily by minute with N=7."""
    return fold_all(clean(sample_records), n_override=7)


@pytest.fixture
def citeseer_series() -> FoldedSeries:
    """Folded Citeseer.com series: 2:05 pm x3, 2:10 pm x3, 2:40 pm x2 over 7 days."""
    return FoldedSeries(
        entity="Citeseer.com",
        points=(
            FoldedPoint(time_point=845, access_count=3),
            FoldedPoint(time_point=850, access_count=3),
            FoldedPoint(time_point=880, access_count=2),
        ),
        period_count=7,
    )


@pytest.fixture
def rgtu_series() -> FoldedSeries:
    """Folded Rgtu.net series: 2:05 pm x2, 2:10 pm x3, 2:20 pm x2 over 7 days."""
    return FoldedSeries(
        entity="Rgtu.net",
        points=(
            FoldedPoint(time_point=845, access_count=2),
            FoldedPoint(time_point=850, access_count=3),
            FoldedPoint(time_point=860, access_count=2),
        ),
        period_count=7,
    )


@pytest.fixture
def sample_intervals_file(temp_dir: Path) -> Path:
    """Hand-written intervals table of three websites."""
    path = temp_dir / "intervals.csv"
    path.write_text(SAMPLE_INTERVALS)
    return path


@pytest.fixture
def sample_intervals() -> list[SignificantInterval]:
    """Intervals of three websites, sorted by start point."""
    rows = [
        ("Citeseer.com", 60, 75, 70),
        ("Rgtu.net", 70, 80, 80),
        ("Newsworld.com", 120, 130, 75),
        ("Citeseer.com", 120, 130, 80),
        ("Rgtu.net", 125, 135, 70),
    ]
    return [SignificantInterval(entity=e, start=s, end=t, confidence=Fraction(c)) for e, s, t, c in rows]


@pytest.fixture
def sample_fed_input(sample_intervals: list[SignificantInterval]) -> FedInput:
    """Sample intervals as episode discovery input."""
    return build_fed_input(sample_intervals)
