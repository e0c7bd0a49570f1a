"""Figure rendering against CSVs produced by the primary CLI (schema v1)."""

import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from littlewood_plots import (
    FigureError,
    FigureSpec,
    load_rows,
    profile_curve,
    profile_value,
    render,
)
from littlewood_plots.cli import main as cli_main


def run_primary(*args):
    result = subprocess.run(
        [sys.executable, "-m", "littlewood.cli", *args],
        capture_output=True, text=True,
    )
    assert result.returncode == 0, result.stderr
    return result


@pytest.fixture(scope="session")
def theorem2_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("csv") / "theorem2.csv"
    run_primary(
        "sweep", "--theorem", "2", "--n", "101", "--r-grid", "default",
        "--out", str(path),
    )
    return path


@pytest.fixture(scope="session")
def theorem6_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("csv") / "theorem6.csv"
    run_primary(
        "sweep", "--theorem", "6", "--n-list", "15,21,33,105", "--r", "1/4",
        "--out", str(path),
    )
    return path


@pytest.fixture(scope="session")
def exhaustive_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("csv") / "exhaustive15.csv"
    run_primary("exhaustive", "--n", "15", "--r", "1/4", "--out", str(path))
    return path


class TestProfile:
    def test_reference_values(self):
        assert profile_value(Fraction(1, 4)) == pytest.approx(6.0)
        assert profile_value(Fraction(0)) == pytest.approx(1.5)
        assert profile_value(Fraction(5, 4)) == pytest.approx(6.0)

    def test_curve_peaks_at_quarter(self):
        rs, fs = profile_curve(-0.5, 0.5)
        assert fs.max() == pytest.approx(6.0, abs=1e-12)
        assert abs(rs[int(np.argmax(fs))]) == pytest.approx(0.25)


class TestLoadRows:
    def test_missing_file(self, tmp_path):
        with pytest.raises(FigureError, match="no such"):
            load_rows(tmp_path / "nope.csv")

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(FigureError, match="empty"):
            load_rows(path)

    def test_header_only(self, tmp_path, theorem2_csv):
        path = tmp_path / "header.csv"
        path.write_text(Path(theorem2_csv).read_text().splitlines()[0] + "\n")
        with pytest.raises(FigureError, match="no data rows"):
            load_rows(path)

    def test_missing_columns(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("schema_id,n\nv1,15\n")
        with pytest.raises(FigureError, match="required columns"):
            load_rows(path)

    def test_wrong_schema(self, tmp_path, theorem2_csv):
        lines = Path(theorem2_csv).read_text().splitlines()
        path = tmp_path / "v2.csv"
        path.write_text("\n".join([lines[0], lines[1].replace("v1", "v9", 1)]) + "\n")
        with pytest.raises(FigureError, match="schema"):
            load_rows(path)


class TestRotationProfile:
    def test_renders_svg(self, theorem2_csv, tmp_path):
        out = render(FigureSpec(theorem2_csv, "rotation_profile", tmp_path / "prof.svg"))
        assert out.exists() and out.stat().st_size > 0
        assert out.suffix == ".svg"

    def test_default_suffix_is_svg(self, theorem2_csv, tmp_path):
        out = render(FigureSpec(theorem2_csv, "rotation_profile", tmp_path / "prof"))
        assert out.suffix == ".svg"

    def test_needs_two_rotations(self, tmp_path):
        single = tmp_path / "single.csv"
        run_primary("sweep", "--theorem", "2", "--n", "15", "--r", "1/4",
                    "--out", str(single))
        with pytest.raises(FigureError, match="distinct r"):
            render(FigureSpec(single, "rotation_profile", tmp_path / "x.svg"))

    def test_corrupted_f_r_column_fails(self, theorem2_csv, tmp_path):
        lines = Path(theorem2_csv).read_text().splitlines()
        header = lines[0].split(",")
        idx = header.index("f_r")
        row = lines[1].split(",")
        row[idx] = repr(float(row[idx]) + 1e-6)
        bad = tmp_path / "drift.csv"
        bad.write_text("\n".join([lines[0], ",".join(row)] + lines[2:]) + "\n")
        with pytest.raises(FigureError, match="analytic profile"):
            render(FigureSpec(bad, "rotation_profile", tmp_path / "x.svg"))


class TestConvergence:
    def test_renders(self, theorem6_csv, tmp_path):
        out = render(FigureSpec(theorem6_csv, "convergence", tmp_path / "conv.svg"))
        assert out.exists() and out.stat().st_size > 0
        # axis label carries r as p/q
        assert b"1/4" in out.read_bytes()

    def test_single_point_warns(self, tmp_path):
        path = tmp_path / "one.csv"
        run_primary("sweep", "--theorem", "6", "--n", "15", "--r", "1/4",
                    "--out", str(path))
        with pytest.warns(UserWarning, match="single-n"):
            render(FigureSpec(path, "convergence", tmp_path / "one.svg"))

    def test_rejects_mixed_rotations(self, theorem2_csv, tmp_path):
        with pytest.raises(FigureError, match="one fixed r"):
            render(FigureSpec(theorem2_csv, "convergence", tmp_path / "x.svg"))

    def test_rejects_repeated_n(self, tmp_path):
        path = tmp_path / "rep.csv"
        run_primary("sweep", "--theorem", "5", "--n", "15", "--r", "1/4",
                    "--samples", "3", "--out", str(path))
        with pytest.raises(FigureError, match="one row per n"):
            render(FigureSpec(path, "convergence", tmp_path / "x.svg"))


class TestHistogram:
    def test_renders_with_markers(self, exhaustive_csv, tmp_path):
        out = render(FigureSpec(exhaustive_csv, "histogram", tmp_path / "hist.svg"))
        data = out.read_bytes()
        assert b"all_ones" in data
        assert b"jacobi_product" in data

    def test_prime_degenerate_two_bars(self, tmp_path):
        path = tmp_path / "prime.csv"
        run_primary("exhaustive", "--n", "13", "--r", "1/4", "--out", str(path))
        rows = [r for r in load_rows(path) if r["completion"] == "enum"]
        assert len(rows) == 2
        out = render(FigureSpec(path, "histogram", tmp_path / "prime.svg"))
        assert out.exists()

    def test_rejects_multi_cell(self, tmp_path):
        path = tmp_path / "multi.csv"
        run_primary("exhaustive", "--n", "15", "--r-grid", "0,1/4", "--out", str(path))
        with pytest.raises(FigureError, match="single"):
            render(FigureSpec(path, "histogram", tmp_path / "x.svg"))

    def test_rejects_non_exhaustive(self, theorem2_csv, tmp_path):
        with pytest.raises(FigureError, match="enum"):
            render(FigureSpec(theorem2_csv, "histogram", tmp_path / "x.svg"))


class TestDeterminism:
    def test_byte_identical_rerenders(self, theorem2_csv, tmp_path):
        a = render(FigureSpec(theorem2_csv, "rotation_profile", tmp_path / "a.svg"))
        b = render(FigureSpec(theorem2_csv, "rotation_profile", tmp_path / "b.svg"))
        assert a.read_bytes() == b.read_bytes()


class TestCli:
    def test_success(self, theorem2_csv, tmp_path, capsys):
        rc = cli_main(["--kind", "rotation_profile", "--csv", str(theorem2_csv),
                       "--out", str(tmp_path / "fig.svg")])
        assert rc == 0
        assert "wrote" in capsys.readouterr().out

    def test_failure_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("schema_id,n\nv1,15\n")
        rc = cli_main(["--kind", "rotation_profile", "--csv", str(bad),
                       "--out", str(tmp_path / "fig.svg")])
        assert rc == 1
        assert "required columns" in capsys.readouterr().err

    def test_console_entry(self, theorem2_csv, tmp_path):
        result = subprocess.run(
            [sys.executable, "-m", "littlewood_plots.cli", "--kind",
             "rotation_profile", "--csv", str(theorem2_csv),
             "--out", str(tmp_path / "fig.svg")],
            capture_output=True, text=True,
        )
        assert result.returncode == 0


def test_criterion_9_plot_suite(theorem2_csv, tmp_path):
    """[SECONDARY] rotation profile renders; overlay peaks at 6 at r=1/4;
    f_r column matches the re-evaluated curve to 1e-9."""
    out = render(FigureSpec(theorem2_csv, "rotation_profile", tmp_path / "t2.svg"))
    assert out.exists() and out.stat().st_size > 0
    rs, fs = profile_curve(-31 / 64, 0.5)
    assert fs.max() == pytest.approx(6.0, abs=1e-12)
    at_quarter = fs[np.isclose(rs, 0.25)]
    assert at_quarter.size == 1 and at_quarter[0] == pytest.approx(6.0, abs=1e-12)
    worst = max(
        abs(float(row["f_r"]) - profile_value(Fraction(int(row["r_num"]), int(row["r_den"]))))
        for row in load_rows(theorem2_csv)
        if row["f_r"]
    )
    assert worst < 1e-9
    print(f"\nPASS criterion-9 plot suite: overlay max 6.0 at r=1/4; "
          f"f_r column max discrepancy {worst:.2e}")
