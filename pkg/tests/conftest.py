"""Session fixtures shared between the unit tests and the acceptance gate.

The expensive artifacts (the full verifier suite and the CLI experiment
runs) are produced once per session and consumed by several tests.
"""

from __future__ import annotations

import time
from types import SimpleNamespace

import pytest

import helpers
from hadarot import lemma_suite


@pytest.fixture(scope="session")
def suite_reports():
    """Full verifier suite at master seed 0, plus its wall time."""
    start = time.perf_counter()
    reports = lemma_suite.run_all(master_seed=0)
    wall = time.perf_counter() - start
    return SimpleNamespace(reports=reports, by_name={r.verifier: r for r in reports}, wall=wall)


def _run_pair(tmp_path_factory, label: str, argv_tail: list[str]):
    """Run one experiment command twice (1 and 2 workers) to frozen files."""
    base = tmp_path_factory.mktemp(label)
    raw = []
    walls = []
    for workers in ("1", "2"):
        out = base / f"workers{workers}.csv"
        start = time.perf_counter()
        code, _, _ = helpers.cli_run(
            argv_tail + ["--seed", "0", "--workers", workers, "--out", str(out)]
        )
        walls.append(time.perf_counter() - start)
        assert code == 0, f"{label} run with {workers} workers exited {code}"
        raw.append(out.read_bytes())
    metadata, header, rows = helpers.parse_report(raw[0].decode("utf-8"))
    return SimpleNamespace(
        raw=raw, metadata=metadata, header=header, rows=rows, wall_first=walls[0]
    )


@pytest.fixture(scope="session")
def e1_runs(tmp_path_factory):
    """Default e1 distance experiment (d=4096 and d=32768, n=100000)."""
    return _run_pair(tmp_path_factory, "e1", ["experiment", "e1"])


@pytest.fixture(scope="session")
def lower_bound_runs(tmp_path_factory):
    """Default lower-bound sweep over d = 2^3 .. 2^18."""
    return _run_pair(tmp_path_factory, "lower_bound", ["experiment", "lower-bound"])


@pytest.fixture(scope="session")
def marginal_trend(tmp_path_factory):
    """Marginal KS trend over one quadrupling ladder, 200 inputs per d."""
    out = tmp_path_factory.mktemp("marginal") / "trend.csv"
    start = time.perf_counter()
    code, _, _ = helpers.cli_run(
        [
            "experiment",
            "marginal",
            "--dims",
            "16,64,256,1024",
            "--n-inputs",
            "200",
            "--seed",
            "1",
            "--out",
            str(out),
        ]
    )
    wall = time.perf_counter() - start
    assert code == 0
    metadata, header, rows = helpers.parse_report(out.read_text("utf-8"))
    return SimpleNamespace(metadata=metadata, header=header, rows=rows, wall=wall)
