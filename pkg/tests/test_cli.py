"""Tests for the command-line interface."""

import json
from pathlib import Path

import pytest
from typer.testing import CliRunner, Result

from weblog_episodes.cli import SEMANTICS_E_NOTE, app

runner = CliRunner()

SAMPLE_SI_ROWS = [
    "Citeseer.com,845,850,14:05,14:10,6,2,5,1.00,85.71,7",
    "Rgtu.net,845,850,14:05,14:10,5,2,5,0.83,71.43,7",
    "Rgtu.net,850,860,14:10,14:20,5,2,10,0.45,71.43,7",
]


def run(*args: str | Path) -> Result:
    return runner.invoke(app, [str(a) for a in args])


def data_lines(path: Path) -> list[str]:
    """Rows of a result table without the layout comment and header."""
    return [line for line in path.read_text().splitlines() if not line.startswith("#")][1:]


@pytest.fixture
def folded_file(temp_dir: Path, sample_log_file: Path) -> Path:
    """The sample log cleaned and folded with N=7 through the CLI."""
    assert run("clean", sample_log_file, "-o", temp_dir / "clean").exit_code == 0
    cleaned = [temp_dir / "clean" / name for name in ("Citeseer.com.csv", "Rgtu.net.csv")]
    result = run("fold", *cleaned, "-o", temp_dir / "fold", "--n", "7")
    assert result.exit_code == 0, result.output
    return temp_dir / "fold" / "folded.csv"


class TestClean:
    """Tests for the clean command."""

    def test_partitions(self, temp_dir: Path, sample_log_file: Path) -> None:
        """Test two cleaned files with 8 and 7 records plus a manifest."""
        result = run("clean", sample_log_file, "-o", temp_dir / "out")
        assert result.exit_code == 0, result.output
        assert len(data_lines(temp_dir / "out" / "Citeseer.com.csv")) == 8
        assert len(data_lines(temp_dir / "out" / "Rgtu.net.csv")) == 7
        manifest = json.loads((temp_dir / "out" / "manifest.json").read_text())
        assert manifest["command"] == "clean"
        assert manifest["inputs"] == [str(sample_log_file)]

    def test_empty_file(self, temp_dir: Path) -> None:
        """Test an empty log writes no entity files."""
        log = temp_dir / "empty.csv"
        log.write_text("")
        result = run("clean", log, "-o", temp_dir / "out")
        assert result.exit_code == 0
        assert [p.name for p in (temp_dir / "out").iterdir()] == ["manifest.json"]

    def test_bad_row(self, temp_dir: Path) -> None:
        """Test a malformed row exits with code 2 and names its line."""
        log = temp_dir / "bad.csv"
        log.write_text("a,Access,2009-04-15 10:00\na,Access,2009-04-15 10:05\na,Access\n")
        result = run("clean", log, "-o", temp_dir / "out")
        assert result.exit_code == 2
        assert "line 3" in result.output

    def test_missing_file(self, temp_dir: Path) -> None:
        """Test a missing input exits with code 2."""
        assert run("clean", temp_dir / "nope.csv", "-o", temp_dir / "out").exit_code == 2

    def test_invalid_utf8(self, temp_dir: Path) -> None:
        """Test a log that is not UTF-8 exits with code 2 instead of crashing."""
        log = temp_dir / "latin1.csv"
        log.write_bytes(b"Caf\xe9.com,Access,2009-04-15 10:00\n")
        result = run("clean", log, "-o", temp_dir / "out")
        assert result.exit_code == 2
        assert result.exception is None or isinstance(result.exception, SystemExit)


class TestFold:
    """Tests for the fold command."""

    def test_citeseer(self, temp_dir: Path, sample_log_file: Path) -> None:
        """Test folding the cleaned Citeseer file with N=7."""
        run("clean", sample_log_file, "-o", temp_dir / "clean")
        result = run("fold", temp_dir / "clean" / "Citeseer.com.csv", "-o", temp_dir / "fold", "--n", "7")
        assert result.exit_code == 0, result.output
        assert data_lines(temp_dir / "fold" / "folded.csv") == [
            "Citeseer.com,845,14:05,3,7",
            "Citeseer.com,850,14:10,3,7",
            "Citeseer.com,880,14:40,2,7",
        ]

    def test_single_row(self, temp_dir: Path) -> None:
        """Test a single record folds to a single point."""
        log = temp_dir / "one.csv"
        log.write_text("a,Access,2009-04-15 09:30\n")
        assert run("fold", log, "-o", temp_dir / "fold").exit_code == 0
        assert data_lines(temp_dir / "fold" / "folded.csv") == ["a,570,9:30,1,1"]

    def test_empty_without_n(self, temp_dir: Path) -> None:
        """Test empty input without --n is a data error."""
        log = temp_dir / "empty.csv"
        log.write_text("")
        assert run("fold", log, "-o", temp_dir / "fold").exit_code == 2

    def test_empty_with_n(self, temp_dir: Path) -> None:
        """Test empty input with --n writes a header-only table."""
        log = temp_dir / "empty.csv"
        log.write_text("")
        assert run("fold", log, "-o", temp_dir / "fold", "--n", "7").exit_code == 0
        assert data_lines(temp_dir / "fold" / "folded.csv") == []

    def test_weekly_layout_recorded(self, temp_dir: Path, sample_log_file: Path) -> None:
        """Test the periodicity is declared on the folded table."""
        assert run("fold", sample_log_file, "-o", temp_dir / "fold", "--periodicity", "weekly").exit_code == 0
        first = (temp_dir / "fold" / "folded.csv").read_text().splitlines()[0]
        assert first == "# periodicity=weekly,granularity=minute"

    def test_shared_period_count(self, temp_dir: Path, uneven_span_log_file: Path) -> None:
        """Test a website seen on fewer days is folded over the whole log's N."""
        assert run("fold", uneven_span_log_file, "-o", temp_dir / "fold").exit_code == 0
        assert data_lines(temp_dir / "fold" / "folded.csv") == ["A.com,845,14:05,10,10", "B.com,845,14:05,2,10"]

    def test_pipeline_shared_period_count(self, temp_dir: Path, uneven_span_log_file: Path) -> None:
        """Test the late website yields no interval once N covers the whole log."""
        result = run(
            "pipeline", uneven_span_log_file, "-o", temp_dir / "out", "--min-conf", "60", "--max-len", "20", "-w", "30"
        )
        assert result.exit_code == 0, result.output
        rows = data_lines(temp_dir / "out" / "intervals.csv")
        assert [row.split(",")[0] for row in rows] == ["A.com"]


class TestDiscovery:
    """Tests for the si and allsi commands."""

    def test_si(self, temp_dir: Path, folded_file: Path) -> None:
        """Test clean, fold and si reproduce the three week-long sample intervals."""
        result = run("si", folded_file, "-o", temp_dir / "si", "--min-conf", "60", "--max-len", "20")
        assert result.exit_code == 0, result.output
        assert data_lines(temp_dir / "si" / "intervals_si.csv") == SAMPLE_SI_ROWS

    def test_allsi(self, temp_dir: Path, folded_file: Path) -> None:
        """Test allsi adds Citeseer 2:10-2:40."""
        result = run("allsi", folded_file, "-o", temp_dir / "allsi", "--min-conf", "60")
        assert result.exit_code == 0, result.output
        rows = data_lines(temp_dir / "allsi" / "intervals_allsi.csv")
        assert [row.split(",")[:3] for row in rows] == [
            ["Citeseer.com", "845", "850"],
            ["Citeseer.com", "850", "880"],
            ["Rgtu.net", "845", "850"],
            ["Rgtu.net", "850", "860"],
        ]

    def test_config_file(self, temp_dir: Path, folded_file: Path) -> None:
        """Test thresholds may come from a config file."""
        config = temp_dir / "run.yaml"
        config.write_text("min-conf: 60\nmax-len: 20\n")
        result = run("si", folded_file, "-o", temp_dir / "si", "--config", config)
        assert result.exit_code == 0, result.output
        assert data_lines(temp_dir / "si" / "intervals_si.csv") == SAMPLE_SI_ROWS

    def test_flag_overrides_config_file(self, temp_dir: Path, folded_file: Path) -> None:
        """Test a flag wins over the config file."""
        config = temp_dir / "run.yaml"
        config.write_text("min_conf: 60\nmax_len: 20\n")
        run("si", folded_file, "-o", temp_dir / "si", "--config", config, "--max-len", "0")
        assert data_lines(temp_dir / "si" / "intervals_si.csv") == []

    @pytest.mark.parametrize(
        "flags",
        [
            ["--min-conf", "101", "--max-len", "20"],
            ["--min-conf", "60.125", "--max-len", "20"],
            ["--max-len", "20"],
            ["--min-conf", "60"],
        ],
    )
    def test_config_errors(self, temp_dir: Path, folded_file: Path, flags: list[str]) -> None:
        """Test invalid or missing thresholds exit with code 1."""
        result = run("si", folded_file, "-o", temp_dir / "si", *flags)
        assert result.exit_code == 1
        assert "Error" in result.output

    def test_unknown_config_key(self, temp_dir: Path, folded_file: Path) -> None:
        """Test an unknown config file key exits with code 1."""
        config = temp_dir / "run.yaml"
        config.write_text("min_conf: 60\nmax_len: 20\nconfidence: 5\n")
        assert run("si", folded_file, "-o", temp_dir / "si", "--config", config).exit_code == 1

    def test_malformed_folded_table(self, temp_dir: Path) -> None:
        """Test a broken folded table exits with code 2."""
        folded = temp_dir / "folded.csv"
        folded.write_text("entity,timePoint,accessCount,periodCount\na,noon,1,3\n")
        result = run("allsi", folded, "-o", temp_dir / "out", "--min-conf", "50")
        assert result.exit_code == 2


class TestFed:
    """Tests for the fed command."""

    def test_three_websites(self, temp_dir: Path, sample_intervals_file: Path) -> None:
        """Test episode files for a 30 minute window."""
        result = run("fed", sample_intervals_file, "-o", temp_dir / "fed", "-w", "30")
        assert result.exit_code == 0, result.output
        assert data_lines(temp_dir / "fed" / "episodes_level2.csv") == [
            "Citeseer.com,Rgtu.net,60,80,1:00,1:20,70.00",
            "Newsworld.com,Citeseer.com,120,130,2:00,2:10,75.00",
            "Citeseer.com,Rgtu.net,120,135,2:00,2:15,70.00",
        ]
        assert data_lines(temp_dir / "fed" / "episodes_level3.csv") == [
            "Newsworld.com,Citeseer.com,Rgtu.net,120,135,2:00,2:15,70.00"
        ]
        manifest = json.loads((temp_dir / "fed" / "manifest.json").read_text())
        assert manifest["notes"] == []

    def test_single_interval(self, temp_dir: Path) -> None:
        """Test one interval gives an empty level-2 file."""
        intervals = temp_dir / "one.csv"
        intervals.write_text("entity,startPoint,endPoint,confidence\na,60,75,70\n")
        assert run("fed", intervals, "-o", temp_dir / "fed", "-w", "30").exit_code == 0
        assert data_lines(temp_dir / "fed" / "episodes_level2.csv") == []

    def test_semantics_e_noted(self, temp_dir: Path, sample_intervals_file: Path) -> None:
        """Test semantics e runs and is flagged in the manifest."""
        result = run("fed", sample_intervals_file, "-o", temp_dir / "fed", "-w", "10", "--semantics", "e")
        assert result.exit_code == 0, result.output
        manifest = json.loads((temp_dir / "fed" / "manifest.json").read_text())
        assert manifest["notes"] == [SEMANTICS_E_NOTE]
        assert manifest["config"]["semantics"] == "e"
        assert data_lines(temp_dir / "fed" / "episodes_level2.csv") == [
            "Newsworld.com,Citeseer.com,120,130,2:00,2:10,75.00"
        ]

    def test_missing_window(self, temp_dir: Path, sample_intervals_file: Path) -> None:
        """Test the window is required."""
        assert run("fed", sample_intervals_file, "-o", temp_dir / "fed").exit_code == 1


class TestPipeline:
    """Tests for the pipeline command."""

    def pipeline(self, log: Path, out: Path) -> Result:
        return run(
            "pipeline", log, "-o", out, "--n", "7", "--min-conf", "60", "--max-len", "20", "--window", "30"
        )

    def test_end_to_end(self, temp_dir: Path, sample_log_file: Path) -> None:
        """Test every stage writes its table."""
        out = temp_dir / "run"
        result = self.pipeline(sample_log_file, out)
        assert result.exit_code == 0, result.output
        assert sorted(p.name for p in (out / "cleaned").iterdir()) == ["Citeseer.com.csv", "Rgtu.net.csv"]
        assert data_lines(out / "intervals.csv") == SAMPLE_SI_ROWS
        assert data_lines(out / "episodes_level2.csv") == ["Citeseer.com,Rgtu.net,845,850,14:05,14:10,71.43"]
        assert json.loads((out / "manifest.json").read_text())["config"]["n_override"] == 7

    def test_deterministic(self, temp_dir: Path, sample_log_file: Path) -> None:
        """Test two runs produce byte-identical result files."""
        first, second = temp_dir / "first", temp_dir / "second"
        assert self.pipeline(sample_log_file, first).exit_code == 0
        assert self.pipeline(sample_log_file, second).exit_code == 0

        def results(root: Path) -> dict[str, bytes]:
            return {
                str(p.relative_to(root)): p.read_bytes()
                for p in sorted(root.rglob("*"))
                if p.is_file() and p.name != "manifest.json"
            }

        assert results(first) == results(second)
        assert len(results(first)) == 5


class TestGen:
    """Tests for the gen command."""

    def test_same_seed_same_bytes(self, temp_dir: Path) -> None:
        """Test a fixed seed reproduces the log byte for byte."""
        assert run("gen", temp_dir / "a.csv", "--seed", "11", "--spread", "5").exit_code == 0
        assert run("gen", temp_dir / "b.csv", "--seed", "11", "--spread", "5").exit_code == 0
        assert (temp_dir / "a.csv").read_bytes() == (temp_dir / "b.csv").read_bytes()

    def test_default_size(self, temp_dir: Path) -> None:
        """Test the default log has about 1700 rows."""
        assert run("gen", temp_dir / "log.csv").exit_code == 0
        assert 1530 <= len(data_lines(temp_dir / "log.csv")) <= 1870

    def test_profile(self, temp_dir: Path) -> None:
        """Test a YAML profile replaces the built-in sites."""
        profile = temp_dir / "profile.yaml"
        profile.write_text("seed: 2\ndays: 4\nentities:\n  - name: a\n    peaks: [60]\n")
        assert run("gen", temp_dir / "log.csv", "--profile", profile).exit_code == 0
        assert len(data_lines(temp_dir / "log.csv")) == 4

    def test_invalid_rate(self, temp_dir: Path) -> None:
        """Test an out-of-range noise rate exits with code 1."""
        assert run("gen", temp_dir / "log.csv", "--not-access-rate", "2").exit_code == 1

    def test_manifest_and_config_seed(self, temp_dir: Path) -> None:
        """Test the seed is read from --config and recorded in a manifest beside the log."""
        settings = temp_dir / "run.yaml"
        settings.write_text("seed: 11\n")
        assert run("gen", temp_dir / "a" / "log.csv", "--config", settings, "--days", "5").exit_code == 0
        assert run("gen", temp_dir / "b" / "log.csv", "--seed", "11", "--days", "5").exit_code == 0
        assert (temp_dir / "a" / "log.csv").read_bytes() == (temp_dir / "b" / "log.csv").read_bytes()

        manifest = json.loads((temp_dir / "a" / "manifest.json").read_text())
        assert manifest["command"] == "gen"
        assert manifest["config"]["seed"] == 11

    def test_default_seed_recorded(self, temp_dir: Path) -> None:
        """Test the manifest names the default seed when none is given."""
        assert run("gen", temp_dir / "log.csv", "--days", "2").exit_code == 0
        manifest = json.loads((temp_dir / "manifest.json").read_text())
        assert manifest["config"]["seed"] == 7

    def test_missing_profile(self, temp_dir: Path) -> None:
        """Test a missing profile exits with code 1."""
        assert run("gen", temp_dir / "log.csv", "--profile", temp_dir / "nope.yaml").exit_code == 1


class TestSweep:
    """Tests for the sweep command."""

    def test_max_len(self, temp_dir: Path, folded_file: Path) -> None:
        """Test a max-Len sweep is written sorted by value."""
        result = run(
            "sweep", folded_file, "-o", temp_dir / "sweep",
            "--parameter", "maxlen", "--values", "20,0,10", "--min-conf", "60",
        )  # fmt: skip
        assert result.exit_code == 0, result.output
        rows = [line.split(",")[:2] for line in data_lines(temp_dir / "sweep" / "sweep_maxlen.csv")]
        assert rows == [["0", "0"], ["10", "3"], ["20", "3"]]

    def test_compare(self, temp_dir: Path, folded_file: Path) -> None:
        """Test compare writes SI and AllSI sweeps side by side."""
        result = run(
            "sweep", folded_file, "-o", temp_dir / "sweep",
            "--parameter", "compare", "--values", "60,50", "--max-len", "20",
        )  # fmt: skip
        assert result.exit_code == 0, result.output
        si = data_lines(temp_dir / "sweep" / "sweep_si.csv")
        allsi = data_lines(temp_dir / "sweep" / "sweep_allsi.csv")
        assert [row.split(",")[0] for row in si] == ["50", "60"]
        counts = zip(si, allsi, strict=True)
        assert all(int(s.split(",")[1]) <= int(a.split(",")[1]) for s, a in counts)

    def test_window(self, temp_dir: Path, sample_intervals_file: Path) -> None:
        """Test a window sweep over an intervals table."""
        result = run(
            "sweep", sample_intervals_file, "-o", temp_dir / "sweep", "--parameter", "window", "--values", "0,10,30"
        )
        assert result.exit_code == 0, result.output
        rows = [line.split(",")[:2] for line in data_lines(temp_dir / "sweep" / "sweep_window.csv")]
        assert rows == [["0", "1"], ["10", "4"], ["30", "4"]]

    def test_bad_values(self, temp_dir: Path, folded_file: Path) -> None:
        """Test malformed or invalid sweep values exit with code 1."""
        base = ["sweep", folded_file, "-o", temp_dir / "sweep", "--max-len", "20", "--parameter", "minconf"]
        assert run(*base, "--values", "sixty").exit_code == 1
        assert run(*base, "--values", "60,150").exit_code == 1


class TestContrib:
    """Tests for the contrib command."""

    def test_no_episodes(self, temp_dir: Path, sample_log_file: Path) -> None:
        """Test an empty episode set writes a header-only report."""
        result = run(
            "contrib", sample_log_file, "-o", temp_dir / "contrib",
            "--min-conf", "100", "--max-len", "5", "--window", "0",
        )  # fmt: skip
        assert result.exit_code == 0, result.output
        assert (temp_dir / "contrib" / "contribution.csv").read_text() == "month,entity,episodes,percent\n"

    def test_shares(self, temp_dir: Path, sample_log_file: Path) -> None:
        """Test one shared episode splits the month evenly."""
        result = run(
            "contrib", sample_log_file, "-o", temp_dir / "contrib",
            "--min-conf", "60", "--max-len", "20", "--window", "30", "--n", "7",
        )  # fmt: skip
        assert result.exit_code == 0, result.output
        assert data_lines(temp_dir / "contrib" / "contribution.csv") == [
            "2009-04,Citeseer.com,1,50.00",
            "2009-04,Rgtu.net,1,50.00",
        ]


class TestShow:
    """Tests for the show command."""

    def test_prints_table(self, sample_intervals_file: Path) -> None:
        """Test a table is printed with its rows."""
        result = run("show", sample_intervals_file)
        assert result.exit_code == 0
        assert "Newsworld.com" in result.output

    def test_missing_file(self, temp_dir: Path) -> None:
        """Test a missing table exits with code 2."""
        assert run("show", temp_dir / "nope.csv").exit_code == 2

    def test_invalid_utf8(self, temp_dir: Path) -> None:
        """Test a table that is not UTF-8 exits with code 2."""
        path = temp_dir / "table.csv"
        path.write_bytes(b"entity,count\nCaf\xe9.com,1\n")
        assert run("show", path).exit_code == 2
