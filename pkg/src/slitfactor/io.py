"""CSV and JSON emitters for curves and factor reports."""

from __future__ import annotations

import csv
import json
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import IO, Iterable, Sequence

from slitfactor.stats import FactorReport

PATTERN_COLUMNS = ("chi", "intensity")
SCAN_COLUMNS = ("n", "sigma")
SWEEP_COLUMNS = ("fill", "rescaled", "sigma_s")
CALIBRATE_COLUMNS = ("delta", "mean_intensity")


def format_value(value) -> str:
    """Integers verbatim, floats with 17 significant digits (exact round trip)."""
    if isinstance(value, bool):
        raise TypeError("booleans are not CSV values")
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".17g")


@contextmanager
def open_output(path: str | Path | None):
    if path is None or str(path) == "-":
        yield sys.stdout
        return
    with open(path, "w", newline="") as fh:
        yield fh


def write_csv(fh: IO[str], columns: Sequence[str], records: Iterable[Sequence]) -> None:
    width = len(columns)
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(columns)
    for record in records:
        if len(record) != width:
            raise ValueError(f"record {record!r} does not match columns {tuple(columns)}")
        writer.writerow([format_value(v) for v in record])


def emit_csv(path: str | Path | None, columns: Sequence[str], records: Iterable[Sequence]) -> None:
    """Write ``records`` under a header row; ``path`` of ``None`` or ``-`` means stdout."""
    with open_output(path) as fh:
        write_csv(fh, columns, records)


def read_csv(path: str | Path) -> tuple[list[str], list[list[float | int]]]:
    """Parse a file written by :func:`emit_csv` back into header and records."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]

    def parse(text):
        try:
            return int(text)
        except ValueError:
            return float(text)

    return header, [[parse(v) for v in row] for row in body]


def report_to_dict(report: FactorReport) -> dict:
    return {
        "input": report.input,
        "divisors": sorted(report.divisors),
        "sigma_table": [[n, sigma] for n, sigma in report.sigma_table],
        "threshold": report.threshold,
        "model": report.model.value,
        "oracle_agrees": report.oracle_agrees,
    }


def emit_factor_report(report: FactorReport, path: str | Path | None = None) -> str:
    """Serialize ``report`` as JSON to ``path`` (stdout for ``None``/``-``) and return the text."""
    text = json.dumps(report_to_dict(report), indent=2) + "\n"
    with open_output(path) as fh:
        fh.write(text)
    return text
