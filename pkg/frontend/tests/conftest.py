import subprocess
import sys

import pytest


def run_opjump(*args: str):
    """Invoke the data-producing CLI in a subprocess.

    The plots package consumes only the files the CLI writes, so the tests
    mint their fixtures the same way a user would -- through the CLI, never
    by importing the numerics package.
    """
    cmd = [sys.executable, "-m", "opjump.cli", *args]
    res = subprocess.run(cmd, capture_output=True, text=True)
    assert res.returncode == 0, f"{' '.join(cmd)}\n{res.stderr}"
    return res


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory):
    """CSV tables of every kind render_fig accepts, freshly produced."""
    d = tmp_path_factory.mktemp("csv")
    run_opjump(
        "scan", "--beta", "1.5", "--xmin", "-4", "--xmax", "4",
        "--steps", "41", "--n", "2,50", "--out", str(d / "scan_beta15.csv"),
    )
    run_opjump(
        "scan", "--beta", "0.5", "--xmin", "-4", "--xmax", "4",
        "--steps", "21", "--n", "2", "--out", str(d / "scan_beta05.csv"),
    )
    run_opjump(
        "taylor", "--beta", "1.5", "--xjump", "0.1", "--n", "30",
        "--out", str(d / "taylor_x010.csv"),
    )
    run_opjump(
        "taylor", "--beta", "1.5", "--xjump", "0.25", "--n", "30",
        "--out", str(d / "taylor_x025.csv"),
    )
    run_opjump(
        "asymptote", "--beta", "1.5", "--fit-lo", "1000", "--fit-hi", "3000",
        "--n", "30", "--out", str(d / "asym_beta15.csv"),
    )
    return d


@pytest.fixture(scope="session")
def tail_scan_csv(tmp_path_factory):
    """Scan whose far-tail grid points break down at 256 bits, leaving
    blank cells in the table -- the renderer has to skip those rows."""
    d = tmp_path_factory.mktemp("tail")
    path = d / "tail.csv"
    run_opjump(
        "scan", "--beta", "1.5", "--xmin", "9", "--xmax", "12",
        "--steps", "7", "--n", "50", "--out", str(path),
    )
    return path
