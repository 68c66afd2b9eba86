"""CLI interface for significant interval and frequent episode mining."""

import io
import logging
from collections import Counter
from collections.abc import Iterator, Sequence
from contextlib import contextmanager
from datetime import datetime
from decimal import Decimal, InvalidOperation
from enum import Enum
from pathlib import Path
from typing import Annotated, Any

from dotenv import load_dotenv

# Load environment variables from .env file before any config is accessed
load_dotenv()

import typer  # noqa: E402
import yaml  # noqa: E402
from pydantic import ValidationError  # noqa: E402
from rich.console import Console  # noqa: E402
from rich.table import Table  # noqa: E402

from weblog_episodes import __version__  # noqa: E402
from weblog_episodes.config import (  # noqa: E402
    ConfigError,
    get_config,
    load_config_file,
    require_settings,
    required,
    resolve_mining_config,
)
from weblog_episodes.fed.episodes import FedInputError, build_fed_input, one_pass_fed  # noqa: E402
from weblog_episodes.folding.folder import FoldingError, TimePointError, fold_all, period_count  # noqa: E402
from weblog_episodes.harness.contribution import contribution_report, mine_monthly  # noqa: E402
from weblog_episodes.harness.generator import five_site_spec, generate  # noqa: E402
from weblog_episodes.harness.sweeps import compare_si_allsi, sweep_maxlen, sweep_minconf, sweep_window  # noqa: E402
from weblog_episodes.ingest.log_parser import LogParseError, clean, parse_log_file, serialize_log  # noqa: E402
from weblog_episodes.models import (  # noqa: E402
    Episode,
    GeneratorSpec,
    Granularity,
    LogRecord,
    MiningConfig,
    Periodicity,
    RunManifest,
    Semantics,
    SignificantInterval,
    TimestampFormat,
)
from weblog_episodes.output.exporter import Exporter, atomic_write_text  # noqa: E402
from weblog_episodes.output.loaders import (  # noqa: E402
    TableFormatError,
    load_folded,
    load_intervals,
    read_layout,
    read_table,
)
from weblog_episodes.sid.discovery import discover_all  # noqa: E402

app = typer.Typer(
    name="wle",
    help="Significant interval and frequent episode mining over web access logs",
    no_args_is_help=True,
)
console = Console()

# Set up logging
logging.basicConfig(
    level=get_config().log_level or "INFO",
    format="%(levelname)s: %(message)s",
)
logger = logging.getLogger(__name__)

SEMANTICS_E_NOTE = (
    "semantics e is an interpreted reading: joining intervals must start and end within the window of the base start"
)

DATA_ERRORS = (LogParseError, FoldingError, FedInputError, TimePointError, TableFormatError, FileNotFoundError)


class SweepParameter(str, Enum):
    """Parameter a sweep varies."""

    MAXLEN = "maxlen"
    MINCONF = "minconf"
    COMPARE = "compare"
    WINDOW = "window"


# Shared options
ConfigOption = Annotated[
    Path | None, typer.Option("--config", "-c", help="YAML or JSON file with run settings; flags override it")
]
OutOption = Annotated[Path, typer.Option("--out", "-o", help="Output directory")]
PeriodicityOption = Annotated[
    Periodicity | None, typer.Option("--periodicity", help="Fold over days or weeks (default daily)")
]
GranularityOption = Annotated[
    Granularity | None, typer.Option("--granularity", help="Time point resolution (default minute)")
]
MinConfOption = Annotated[str | None, typer.Option("--min-conf", help="Minimum confidence in percent, 2 decimals")]
MaxLenOption = Annotated[int | None, typer.Option("--max-len", help="Maximum interval span in time points")]
WindowOption = Annotated[int | None, typer.Option("--window", "-w", help="Sequential window length in time points")]
SemanticsOption = Annotated[Semantics | None, typer.Option("--semantics", help="Window admission rule (default s)")]
NOption = Annotated[int | None, typer.Option("--n", "-n", help="Override the number of periods N")]
SeedOption = Annotated[int | None, typer.Option("--seed", help="Random seed (default 7)")]


@contextmanager
def handle_errors() -> Iterator[None]:
    """Map library errors to exit codes: 1 for configuration, 2 for data."""
    try:
        yield
    except ConfigError as e:
        console.print(f"[red]Error:[/red] {e}")
        raise typer.Exit(1) from None
    except DATA_ERRORS as e:
        console.print(f"[red]Error:[/red] {e}")
        raise typer.Exit(2) from None


def build_config(config_path: Path | None, **flags: Any) -> MiningConfig:
    """Resolve the run's MiningConfig from an optional config file and flags."""
    file_values = load_config_file(config_path) if config_path else None
    return resolve_mining_config(file_values, **flags)


def explicit_layout(config: MiningConfig) -> tuple[Periodicity | None, Granularity | None]:
    """Periodicity and granularity only where the user set them."""
    periodicity = config.periodicity if "periodicity" in config.model_fields_set else None
    granularity = config.granularity if "granularity" in config.model_fields_set else None
    return periodicity, granularity


def table_layout(path: Path, config: MiningConfig) -> tuple[Periodicity, Granularity]:
    """Layout for reading a table: explicit settings, then the file's declaration, then defaults."""
    periodicity, granularity = explicit_layout(config)
    declared_p, declared_g = read_layout(path) if path.exists() else (None, None)
    return (
        periodicity or declared_p or Periodicity.DAILY,
        granularity or declared_g or Granularity.MINUTE,
    )


def write_manifest(
    exporter: Exporter,
    command: str,
    inputs: Sequence[Path],
    config: MiningConfig,
    started_at: datetime,
) -> Path:
    """Write manifest.json next to a command's outputs."""
    notes = [SEMANTICS_E_NOTE] if config.semantics is Semantics.E else []
    manifest = RunManifest(
        command=command,
        inputs=[str(p) for p in inputs],
        output_dir=str(exporter.output_dir),
        config=config,
        tool_version=__version__,
        started_at=started_at,
        finished_at=datetime.now(),
        notes=notes,
    )
    return exporter.export_manifest(manifest)


def read_logs(paths: Sequence[Path]) -> list[LogRecord]:
    """Parse one or more log files in the configured timestamp layout."""
    settings = get_config()
    records: list[LogRecord] = []
    for path in paths:
        records.extend(parse_log_file(path, settings.timestamp_format or TimestampFormat.AUTO, settings.delimiter))
    return records


def print_interval_summary(intervals: Sequence[SignificantInterval], title: str) -> None:
    per_entity = Counter(interval.entity for interval in intervals)
    table = Table(title=title)
    table.add_column("Entity", style="cyan")
    table.add_column("Intervals", justify="right")
    for entity in sorted(per_entity):
        table.add_row(entity, str(per_entity[entity]))
    console.print(table)


def print_episode_summary(episodes: Sequence[Episode]) -> None:
    per_level = Counter(episode.level for episode in episodes)
    table = Table(title="Frequent Episodes")
    table.add_column("Level", justify="right", style="cyan")
    table.add_column("Episodes", justify="right")
    for level in sorted(per_level):
        table.add_row(str(level), str(per_level[level]))
    console.print(table)


@app.command("clean")
def clean_command(
    inputs: Annotated[list[Path], typer.Argument(help="Raw access log files")],
    out: OutOption,
    config_path: ConfigOption = None,
) -> None:
    """Keep access records and write one cleaned file per entity."""
    started_at = datetime.now()
    with handle_errors():
        config = build_config(config_path)
        partitions = clean(read_logs(inputs))
        exporter = Exporter(out)
        written = exporter.export_partitions(partitions)
        write_manifest(exporter, "clean", inputs, config, started_at)

    console.print(f"[green]Cleaned {len(written)} entities[/green] into {out}")
    for entity, path in zip(partitions, written, strict=True):
        console.print(f"  - {entity}: {len(partitions[entity])} records ({path.name})")


@app.command("fold")
def fold_command(
    inputs: Annotated[list[Path], typer.Argument(help="Cleaned (or raw) access log files")],
    out: OutOption,
    periodicity: PeriodicityOption = None,
    granularity: GranularityOption = None,
    n: NOption = None,
    config_path: ConfigOption = None,
) -> None:
    """Fold access records over a periodicity into per-time-point counts."""
    started_at = datetime.now()
    with handle_errors():
        config = build_config(config_path, periodicity=periodicity, granularity=granularity, n_override=n)
        partitions = clean(read_logs(inputs))
        if not partitions:
            # Without records N can only come from the override
            period_count([], config.periodicity, config.n_override)
        dataset = fold_all(partitions, config.periodicity, config.granularity, config.n_override)

        exporter = Exporter(out, config.periodicity, config.granularity)
        path = exporter.export_folded(dataset)
        write_manifest(exporter, "fold", inputs, config, started_at)

    console.print(f"[green]Folded {len(dataset)} entities[/green] into {path}")
    for series in dataset.values():
        console.print(f"  - {series.entity}: {len(series.points)} time points, N={series.period_count}")


def _discover(
    command: str,
    folded: Path,
    out: Path,
    config: MiningConfig,
    started_at: datetime,
) -> None:
    periodicity, granularity = table_layout(folded, config)
    dataset = load_folded(folded, config.n_override, periodicity, granularity)
    max_len = config.max_len if command == "si" else None
    intervals = discover_all(dataset, required(config.min_conf, "min_conf"), max_len)

    exporter = Exporter(out, periodicity, granularity)
    path = exporter.export_intervals(intervals, f"intervals_{command}.csv")
    write_manifest(exporter, command, [folded], config, started_at)

    print_interval_summary(intervals, "Significant Intervals")
    console.print(f"[green]Wrote {len(intervals)} intervals[/green] to {path}")


@app.command("si")
def si_command(
    folded: Annotated[Path, typer.Argument(help="Folded CSV file")],
    out: OutOption,
    min_conf: MinConfOption = None,
    max_len: MaxLenOption = None,
    n: NOption = None,
    periodicity: PeriodicityOption = None,
    granularity: GranularityOption = None,
    config_path: ConfigOption = None,
) -> None:
    """Discover significant intervals with a maximum length (One-Pass-SI)."""
    started_at = datetime.now()
    with handle_errors():
        config = build_config(
            config_path,
            min_conf=min_conf,
            max_len=max_len,
            n_override=n,
            periodicity=periodicity,
            granularity=granularity,
        )
        require_settings(config, "min_conf", "max_len")
        _discover("si", folded, out, config, started_at)


@app.command("allsi")
def allsi_command(
    folded: Annotated[Path, typer.Argument(help="Folded CSV file")],
    out: OutOption,
    min_conf: MinConfOption = None,
    n: NOption = None,
    periodicity: PeriodicityOption = None,
    granularity: GranularityOption = None,
    config_path: ConfigOption = None,
) -> None:
    """Discover significant intervals of any length (One-Pass-AllSI)."""
    started_at = datetime.now()
    with handle_errors():
        config = build_config(
            config_path,
            min_conf=min_conf,
            n_override=n,
            periodicity=periodicity,
            granularity=granularity,
        )
        require_settings(config, "min_conf")
        _discover("allsi", folded, out, config, started_at)


@app.command("fed")
def fed_command(
    intervals_path: Annotated[Path, typer.Argument(help="Intervals CSV file")],
    out: OutOption,
    window: WindowOption = None,
    semantics: SemanticsOption = None,
    periodicity: PeriodicityOption = None,
    granularity: GranularityOption = None,
    config_path: ConfigOption = None,
) -> None:
    """Discover frequent episodes from significant intervals (One-Pass-FED)."""
    started_at = datetime.now()
    with handle_errors():
        config = build_config(
            config_path,
            window=window,
            semantics=semantics,
            periodicity=periodicity,
            granularity=granularity,
        )
        window = required(config.window, "window")

        layout = table_layout(intervals_path, config)
        intervals = load_intervals(intervals_path, *layout)
        episodes = one_pass_fed(build_fed_input(intervals), window, config.semantics)

        exporter = Exporter(out, *layout)
        exporter.export_episodes(episodes)
        write_manifest(exporter, "fed", [intervals_path], config, started_at)

    if config.semantics is Semantics.E:
        console.print(f"[yellow]Note:[/yellow] {SEMANTICS_E_NOTE}")
    print_episode_summary(episodes)
    console.print(f"[green]Wrote {len(episodes)} episodes[/green] to {out}")


@app.command("pipeline")
def pipeline_command(
    inputs: Annotated[list[Path], typer.Argument(help="Raw access log files")],
    out: OutOption,
    min_conf: MinConfOption = None,
    max_len: MaxLenOption = None,
    window: WindowOption = None,
    semantics: SemanticsOption = None,
    n: NOption = None,
    periodicity: PeriodicityOption = None,
    granularity: GranularityOption = None,
    config_path: ConfigOption = None,
) -> None:
    """
    Run clean, fold, interval discovery and episode discovery in one go.

    One-Pass-SI is used when --max-len is set, One-Pass-AllSI otherwise.
    """
    started_at = datetime.now()
    with handle_errors():
        config = build_config(
            config_path,
            min_conf=min_conf,
            max_len=max_len,
            window=window,
            semantics=semantics,
            n_override=n,
            periodicity=periodicity,
            granularity=granularity,
        )
        min_conf = required(config.min_conf, "min_conf")
        window = required(config.window, "window")

        partitions = clean(read_logs(inputs))
        if not partitions:
            period_count([], config.periodicity, config.n_override)
        Exporter(out / "cleaned").export_partitions(partitions)

        exporter = Exporter(out, config.periodicity, config.granularity)
        dataset = fold_all(partitions, config.periodicity, config.granularity, config.n_override)
        exporter.export_folded(dataset)

        intervals = discover_all(dataset, min_conf, config.max_len)
        exporter.export_intervals(intervals, "intervals.csv")

        episodes = one_pass_fed(build_fed_input(intervals), window, config.semantics)
        exporter.export_episodes(episodes)
        write_manifest(exporter, "pipeline", inputs, config, started_at)

    print_interval_summary(intervals, "Significant Intervals")
    print_episode_summary(episodes)
    console.print(f"[green]Pipeline complete[/green]: results in {out}")


def _generator_spec(
    profile: Path | None,
    seed: int | None,
    days: int | None,
    spread: int,
    not_access_rate: float | None,
) -> GeneratorSpec:
    try:
        if profile:
            if not profile.exists():
                raise ConfigError(f"Profile file not found: {profile}")
            return GeneratorSpec.from_yaml(profile, seed=seed, days=days, not_access_rate=not_access_rate)
        spec = five_site_spec(seed=7 if seed is None else seed, spread=spread, days=days or 90)
        if not_access_rate is not None:
            spec = GeneratorSpec.model_validate({**spec.model_dump(), "not_access_rate": not_access_rate})
        return spec
    except (ValidationError, yaml.YAMLError, UnicodeDecodeError) as e:
        raise ConfigError(f"Invalid generator settings: {e}") from None


@app.command("gen")
def gen_command(
    output: Annotated[Path, typer.Argument(help="Log file to write")],
    seed: SeedOption = None,
    days: Annotated[int | None, typer.Option("--days", help="Number of days (default 90)")] = None,
    spread: Annotated[int, typer.Option("--spread", help="Jitter around each peak in minutes")] = 0,
    not_access_rate: Annotated[
        float | None, typer.Option("--not-access-rate", help="Share of rows emitted as NotAccess")
    ] = None,
    profile: Annotated[
        Path | None, typer.Option("--profile", "-p", help="YAML generator spec instead of the built-in sites")
    ] = None,
    config_path: ConfigOption = None,
) -> None:
    """
    Generate a seeded synthetic access log.

    manifest.json is written next to the log, recording the seed actually used.
    """
    started_at = datetime.now()
    with handle_errors():
        config = build_config(config_path, seed=seed)
        spec = _generator_spec(profile, config.seed, days, spread, not_access_rate)

        records = generate(spec)
        buffer = io.StringIO()
        serialize_log(records, buffer)
        atomic_write_text(output, buffer.getvalue())

        inputs = [profile] if profile else []
        write_manifest(
            Exporter(output.parent), "gen", inputs, config.model_copy(update={"seed": spec.seed}), started_at
        )

    console.print(f"[green]Generated {len(records)} records[/green] (seed {spec.seed}) to {output}")


def _parse_values(text: str, parameter: SweepParameter) -> list[Any]:
    items = [item.strip() for item in text.split(",") if item.strip()]
    if not items:
        raise ConfigError("--values needs at least one value")
    try:
        if parameter in (SweepParameter.MINCONF, SweepParameter.COMPARE):
            numbers: list[Any] = [Decimal(item) for item in items]
        else:
            numbers = [int(item) for item in items]
    except (InvalidOperation, ValueError):
        raise ConfigError(f"Malformed --values entry in {text!r}") from None

    # Each value must be a valid setting on its own
    field = {
        SweepParameter.MAXLEN: "max_len",
        SweepParameter.MINCONF: "min_conf",
        SweepParameter.COMPARE: "min_conf",
        SweepParameter.WINDOW: "window",
    }[parameter]
    return [getattr(resolve_mining_config(**{field: number}), field) for number in numbers]


@app.command("sweep")
def sweep_command(
    input_path: Annotated[Path, typer.Argument(help="Folded CSV (maxlen/minconf/compare) or intervals CSV (window)")],
    out: OutOption,
    parameter: Annotated[SweepParameter, typer.Option("--parameter", help="Parameter to vary")],
    values: Annotated[str, typer.Option("--values", help="Comma separated parameter values")],
    min_conf: MinConfOption = None,
    max_len: MaxLenOption = None,
    semantics: SemanticsOption = None,
    n: NOption = None,
    config_path: ConfigOption = None,
) -> None:
    """Rerun discovery across parameter values and record counts and timings."""
    started_at = datetime.now()
    with handle_errors():
        config = build_config(config_path, min_conf=min_conf, max_len=max_len, semantics=semantics, n_override=n)
        parsed = _parse_values(values, parameter)
        exporter = Exporter(out)

        if parameter is SweepParameter.WINDOW:
            intervals = load_intervals(input_path, *table_layout(input_path, config))
            results = [sweep_window(intervals, parsed, config.semantics)]
            names = ["sweep_window.csv"]
        else:
            dataset = load_folded(input_path, config.n_override, *table_layout(input_path, config))
            if parameter is SweepParameter.MAXLEN:
                results = [sweep_maxlen(dataset, required(config.min_conf, "min_conf"), parsed)]
                names = ["sweep_maxlen.csv"]
            else:
                max_len = required(config.max_len, "max_len")
                if parameter is SweepParameter.MINCONF:
                    results = [sweep_minconf(dataset, max_len, parsed)]
                    names = ["sweep_minconf.csv"]
                else:
                    results = list(compare_si_allsi(dataset, max_len, parsed))
                    names = ["sweep_si.csv", "sweep_allsi.csv"]

        for result, name in zip(results, names, strict=True):
            exporter.export_sweep(result, name)
        write_manifest(exporter, f"sweep {parameter.value}", [input_path], config, started_at)

    table = Table(title=f"Sweep over {parameter.value}")
    table.add_column("Value", justify="right", style="cyan")
    for name in names:
        table.add_column(name.removesuffix(".csv"), justify="right")
    for index, value in enumerate(results[0].values()):
        table.add_row(str(value), *(str(result.rows[index].count) for result in results))
    console.print(table)


@app.command("contrib")
def contrib_command(
    inputs: Annotated[list[Path], typer.Argument(help="Raw access log files")],
    out: OutOption,
    min_conf: MinConfOption = None,
    max_len: MaxLenOption = None,
    window: WindowOption = None,
    semantics: SemanticsOption = None,
    n: NOption = None,
    periodicity: PeriodicityOption = None,
    granularity: GranularityOption = None,
    config_path: ConfigOption = None,
) -> None:
    """Mine each calendar month separately and report every entity's share of episodes."""
    started_at = datetime.now()
    with handle_errors():
        config = build_config(
            config_path,
            min_conf=min_conf,
            max_len=max_len,
            window=window,
            semantics=semantics,
            n_override=n,
            periodicity=periodicity,
            granularity=granularity,
        )
        require_settings(config, "min_conf", "window")
        rows = contribution_report(mine_monthly(read_logs(inputs), config))

        exporter = Exporter(out)
        path = exporter.export_contribution(rows, "contribution.csv")
        write_manifest(exporter, "contrib", inputs, config, started_at)

    table = Table(title="Monthly Contribution")
    table.add_column("Month", style="cyan")
    table.add_column("Entity")
    table.add_column("Episodes", justify="right")
    table.add_column("Percent", justify="right")
    for row in rows:
        table.add_row(row.month, row.entity, str(row.episodes), f"{float(row.percent):.2f}")
    console.print(table)
    console.print(f"[green]Wrote contribution report[/green] to {path}")


@app.command("show")
def show_command(
    path: Annotated[Path, typer.Argument(help="Any CSV result table")],
    limit: Annotated[int, typer.Option("--limit", help="Maximum rows to display")] = 50,
) -> None:
    """Print a result table."""
    with handle_errors():
        header, rows = read_table(path)

    table = Table(title=path.name)
    for column in header:
        table.add_column(column)
    for row in rows[:limit]:
        table.add_row(*row)
    console.print(table)
    if len(rows) > limit:
        console.print(f"[dim]... and {len(rows) - limit} more rows[/dim]")


if __name__ == "__main__":
    app()
