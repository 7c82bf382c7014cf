"""Shared plumbing for the test suite: CLI capture and report parsing."""

from __future__ import annotations

import contextlib
import io

from hadarot import cli


def cli_run(argv: list[str]) -> tuple[int, str, str]:
    """Run the CLI entry point in-process, capturing stdout and stderr."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = cli.main(argv)
    return code, out.getvalue(), err.getvalue()


def parse_report(text: str) -> tuple[dict, list[str], list[dict]]:
    """Split a CSV report into (metadata, header, rows).

    Metadata lines look like ``# key: value``; row cells are parsed as
    floats where possible and kept as strings otherwise.
    """
    metadata: dict[str, str] = {}
    body: list[str] = []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            metadata[key] = value
        elif line:
            body.append(line)
    header = body[0].split(",")
    rows = []
    for line in body[1:]:
        row: dict[str, float | str] = {}
        for key, cell in zip(header, line.split(",")):
            try:
                row[key] = float(cell)
            except ValueError:
                row[key] = cell
        rows.append(row)
    return metadata, header, rows


def rows_by_d(rows: list[dict]) -> dict[int, dict]:
    return {int(row["d"]): row for row in rows}
