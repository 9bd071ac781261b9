"""End-to-end checks of the render_fig command line.

The last test is the acceptance check for this package: both figure modes
render from freshly produced CLI tables without error, and every plotted
point is bit-identical to a CSV cell pair.
"""

import csv
import shutil
import subprocess
import sys
import xml.etree.ElementTree as ET

import numpy as np

from opjump_plots.cli import main
from opjump_plots.figspec import fig1_spec, fig2_spec
from opjump_plots.render import render


def run_script(*args):
    cmd = [sys.executable, "-m", "opjump_plots.cli", *args]
    return subprocess.run(cmd, capture_output=True, text=True)


def test_console_script_is_installed():
    assert shutil.which("render_fig") is not None


def test_help_flags_subsample_as_unfaithful():
    res = run_script("--help")
    assert res.returncode == 0
    assert "--subsample" in res.stdout
    assert "not faithful" in res.stdout


def test_fig2_subprocess_end_to_end(data_dir, tmp_path):
    out = tmp_path / "fig2.svg"
    res = run_script(
        "--mode", "fig2",
        "--csv", str(data_dir / "scan_beta15.csv"),
        "--out", str(out),
    )
    assert res.returncode == 0, res.stderr
    assert "wrote" in res.stdout and "2 series" in res.stdout
    assert out.exists()


def test_cli_bytes_match_library_bytes(data_dir, tmp_path):
    """The script plots exactly what render() plots: identical SVG bytes."""
    paths = [str(data_dir / "scan_beta05.csv")]
    via_cli = tmp_path / "cli.svg"
    via_lib = tmp_path / "lib.svg"
    assert main(["--mode", "fig2", "--csv", *paths, "--out", str(via_cli)]) == 0
    render(fig2_spec(paths, str(via_lib)))
    assert via_cli.read_bytes() == via_lib.read_bytes()


def test_missing_column_is_a_clean_failure(data_dir, tmp_path, capsys):
    rc = main([
        "--mode", "fig2",
        "--csv", str(data_dir / "taylor_x010.csv"),
        "--out", str(tmp_path / "x.svg"),
    ])
    assert rc == 1
    err = capsys.readouterr().err
    assert "xjump" in err and "render_fig:" in err


def test_unreadable_file_is_a_clean_failure(tmp_path, capsys):
    rc = main([
        "--mode", "fig1",
        "--csv", str(tmp_path / "absent.csv"),
        "--out", str(tmp_path / "x.svg"),
    ])
    assert rc == 1
    assert "absent.csv" in capsys.readouterr().err


def test_unknown_mode_is_a_usage_error():
    res = run_script("--mode", "fig9", "--csv", "a.csv", "--out", "x.svg")
    assert res.returncode == 2
    assert "--mode" in res.stderr


def test_label_overrides(data_dir, tmp_path):
    out = tmp_path / "lab.svg"
    rc = main([
        "--mode", "fig2",
        "--csv", str(data_dir / "scan_beta05.csv"),
        "--out", str(out),
        "--xlabel", "jump location",
        "--ylabel", "scaled coefficient",
    ])
    assert rc == 0
    text = out.read_text()
    assert "jump location" in text and "scaled coefficient" in text


# ---------------------------------------------------------------------------
# acceptance: both modes render from CLI tables; plotted points == CSV cells

def csv_cell_pairs(path, xcol, ycols):
    pairs = set()
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            for ycol in ycols:
                if row[xcol] != "" and row[ycol] != "":
                    pairs.add((float(row[xcol]), float(row[ycol])))
    return pairs


def test_acceptance_fig1_fig2_bit_identical(data_dir, tmp_path):
    fig1_csvs = [
        str(data_dir / "taylor_x010.csv"),
        str(data_dir / "taylor_x025.csv"),
        str(data_dir / "asym_beta15.csv"),
    ]
    fig2_csvs = [
        str(data_dir / "scan_beta15.csv"),
        str(data_dir / "scan_beta05.csv"),
    ]
    fig1_out = tmp_path / "fig1.svg"
    fig2_out = tmp_path / "fig2.svg"
    assert main(["--mode", "fig1", "--csv", *fig1_csvs,
                 "--out", str(fig1_out)]) == 0
    assert main(["--mode", "fig2", "--csv", *fig2_csvs,
                 "--out", str(fig2_out)]) == 0
    for out in (fig1_out, fig2_out):
        root = ET.parse(out).getroot()  # well-formed XML
        assert root.tag.endswith("svg")

    # every plotted point appears verbatim in some CSV row
    allowed = {}
    for p in fig1_csvs[:2]:
        allowed[p] = csv_cell_pairs(
            p, "n",
            ("rescaled_iter", "rescaled_taylor2", "rescaled_taylor3"),
        )
    allowed[fig1_csvs[2]] = csv_cell_pairs(
        fig1_csvs[2], "n", ("alpha_est_rescaled",)
    )
    for p in fig2_csvs:
        allowed[p] = csv_cell_pairs(p, "xjump", ("alpha_rescaled",))

    checked = 0
    for spec, srcs in (
        (fig1_spec(fig1_csvs, str(tmp_path / "f1.svg")), fig1_csvs),
        (fig2_spec(fig2_csvs, str(tmp_path / "f2.svg")), fig2_csvs),
    ):
        result = render(spec)
        legal = set().union(*(allowed[p] for p in srcs))
        for series in result.series:
            for x, y in zip(series.x, series.y):
                assert (float(x), float(y)) in legal
                checked += 1
    print(f"PASS acceptance: fig1+fig2 rendered, {checked} plotted points, "
          f"all bit-identical to CSV cells")
    assert checked == 2 * 30 * 3 + 30 + 41 * 2 + 21
