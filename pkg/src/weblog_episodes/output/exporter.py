"""Export functionality for mining results."""

import csv
import io
import logging
import os
import re
import tempfile
from collections.abc import Callable, Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any

from weblog_episodes.folding.folder import format_time_point
from weblog_episodes.harness.contribution import ContributionRow
from weblog_episodes.harness.sweeps import SweepResult
from weblog_episodes.ingest.log_parser import serialize_log
from weblog_episodes.models import (
    Episode,
    FoldedSeries,
    Granularity,
    LogRecord,
    Periodicity,
    RunManifest,
    SignificantInterval,
    round_half_up,
)

logger = logging.getLogger(__name__)

INTERVAL_COLUMNS = [
    "entity",
    "startPoint",
    "endPoint",
    "startClock",
    "endClock",
    "accessCount",
    "pointCount",
    "span",
    "density",
    "confidence",
    "periodCount",
]

FOLDED_COLUMNS = ["entity", "timePoint", "clock", "accessCount", "periodCount"]

SWEEP_COLUMNS = ["parameterValue", "count", "elapsedMicros"]

CONTRIBUTION_COLUMNS = ["month", "entity", "episodes", "percent"]


def atomic_write_text(path: Path, text: str) -> None:
    """Write a file by renaming a completed temporary file over it."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, temp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(temp_name, path)
    except BaseException:
        Path(temp_name).unlink(missing_ok=True)
        raise


def entity_filename(entity: str) -> str:
    """File-system safe name for an entity's cleaned file."""
    safe = re.sub(r"[^A-Za-z0-9._-]+", "_", entity).strip("._") or "entity"
    return f"{safe}.csv"


def layout_comment(periodicity: Periodicity, granularity: Granularity) -> str:
    return f"# periodicity={periodicity.value},granularity={granularity.value}\n"


def _render(rows: Callable[[Any], None], prefix: str = "") -> str:
    buffer = io.StringIO()
    buffer.write(prefix)
    rows(csv.writer(buffer, lineterminator="\n"))
    return buffer.getvalue()


class Exporter:
    """Writes mining results into an output directory."""

    def __init__(
        self,
        output_dir: Path,
        periodicity: Periodicity = Periodicity.DAILY,
        granularity: Granularity = Granularity.MINUTE,
    ) -> None:
        """
        Initialize the exporter.

        Args:
            output_dir: Directory all files are written to
            periodicity: Periodicity used to print clock columns
            granularity: Granularity used to print clock columns
        """
        self.output_dir = output_dir
        self.periodicity = periodicity
        self.granularity = granularity

    def _clock(self, offset: int) -> str:
        return format_time_point(offset, self.periodicity, self.granularity)

    def _path(self, name: str | Path) -> Path:
        path = Path(name)
        return path if path.is_absolute() else self.output_dir / path

    def export_partitions(self, partitions: Mapping[str, Sequence[LogRecord]]) -> list[Path]:
        """
        Write one cleaned file per entity.

        Returns:
            Paths written, in partition order
        """
        written: list[Path] = []
        used: set[str] = set()
        for entity, records in partitions.items():
            name = entity_filename(entity)
            stem = name.removesuffix(".csv")
            suffix = 2
            while name in used:
                name = f"{stem}_{suffix}.csv"
                suffix += 1
            used.add(name)

            buffer = io.StringIO()
            serialize_log(records, buffer)
            path = self._path(name)
            atomic_write_text(path, buffer.getvalue())
            written.append(path)

        logger.info("Exported %d cleaned entity files to %s", len(written), self.output_dir)
        return written

    def export_folded(self, dataset: Mapping[str, FoldedSeries], filename: str | Path = "folded.csv") -> Path:
        """Write folded series of all entities to one CSV."""

        def rows(writer: Any) -> None:
            writer.writerow(FOLDED_COLUMNS)
            for series in dataset.values():
                for point in series.points:
                    writer.writerow(
                        [
                            series.entity,
                            point.time_point,
                            self._clock(point.time_point),
                            point.access_count,
                            series.period_count,
                        ]
                    )

        path = self._path(filename)
        atomic_write_text(path, _render(rows, layout_comment(self.periodicity, self.granularity)))
        logger.info("Exported folded series to %s", path)
        return path

    def export_intervals(self, intervals: Iterable[SignificantInterval], filename: str | Path) -> Path:
        """Write significant intervals sorted by (entity, start, end)."""
        ordered = sorted(intervals, key=lambda i: (i.entity, i.start, i.end))

        def rows(writer: Any) -> None:
            writer.writerow(INTERVAL_COLUMNS)
            for interval in ordered:
                density = interval.density
                writer.writerow(
                    [
                        interval.entity,
                        interval.start,
                        interval.end,
                        self._clock(interval.start),
                        self._clock(interval.end),
                        _blank(interval.access_count),
                        _blank(interval.point_count),
                        interval.span,
                        "" if density is None else round_half_up(density),
                        round_half_up(interval.confidence),
                        _blank(interval.period_count),
                    ]
                )

        path = self._path(filename)
        atomic_write_text(path, _render(rows, layout_comment(self.periodicity, self.granularity)))
        logger.info("Exported %d intervals to %s", len(ordered), path)
        return path

    def export_episodes(self, episodes: Iterable[Episode], prefix: str = "episodes") -> list[Path]:
        """
        Write one CSV per episode level.

        The level-2 file is always written, header-only when there are no episodes.
        """
        by_level: dict[int, list[Episode]] = {2: []}
        for episode in episodes:
            by_level.setdefault(episode.level, []).append(episode)

        written: list[Path] = []
        for level in sorted(by_level):

            def rows(writer: Any, level: int = level) -> None:
                writer.writerow(
                    [f"entity{k}" for k in range(1, level + 1)]
                    + ["startPoint", "endPoint", "startClock", "endClock", "patternConfidence"]
                )
                for episode in by_level[level]:
                    writer.writerow(
                        [
                            *episode.entities,
                            episode.start,
                            episode.end,
                            self._clock(episode.start),
                            self._clock(episode.end),
                            round_half_up(episode.pattern_confidence),
                        ]
                    )

            path = self._path(f"{prefix}_level{level}.csv")
            atomic_write_text(path, _render(rows, layout_comment(self.periodicity, self.granularity)))
            written.append(path)

        logger.info("Exported episodes of %d levels to %s", len(written), self.output_dir)
        return written

    def export_sweep(self, sweep: SweepResult, filename: str | Path) -> Path:
        """Write a sweep as parameterValue,count,elapsedMicros rows."""

        def rows(writer: Any) -> None:
            writer.writerow(SWEEP_COLUMNS)
            for row in sweep.rows:
                writer.writerow([row.parameter_value, row.count, row.elapsed_micros])

        path = self._path(filename)
        atomic_write_text(path, _render(rows))
        logger.info("Exported %s sweep to %s", sweep.parameter, path)
        return path

    def export_contribution(self, rows_in: Iterable[ContributionRow], filename: str | Path) -> Path:
        """Write the monthly contribution report."""

        def rows(writer: Any) -> None:
            writer.writerow(CONTRIBUTION_COLUMNS)
            for row in rows_in:
                writer.writerow([row.month, row.entity, row.episodes, round_half_up(row.percent)])

        path = self._path(filename)
        atomic_write_text(path, _render(rows))
        logger.info("Exported contribution report to %s", path)
        return path

    def export_manifest(self, manifest: RunManifest, filename: str | Path = "manifest.json") -> Path:
        """Write the run manifest as JSON."""
        path = self._path(filename)
        atomic_write_text(path, manifest.model_dump_json(indent=2) + "\n")
        return path


def _blank(value: int | None) -> int | str:
    return "" if value is None else value
