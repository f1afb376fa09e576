"""Byte-stable CSV and JSON output."""
from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from os import PathLike
from pathlib import Path


@dataclass
class Table:
    header: list[str]
    rows: list[list]
    meta: dict = field(default_factory=dict)

    def csv_header(self):
        return self.header

    def csv_rows(self):
        return self.rows

    def as_dict(self):
        return {**self.meta, "columns": self.header, "rows": self.rows}


def _plain(obj):
    if hasattr(obj, "as_dict"):
        return _plain(obj.as_dict())
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    return obj


def to_json(report, config=None) -> str:
    body = _plain(report)
    if config is not None:
        body = {"config": _plain(config), "result": body}
    return json.dumps(body, indent=2) + "\n"


def to_csv(report) -> str:
    if not hasattr(report, "csv_rows"):
        raise ValueError(f"{type(report).__name__} has no CSV form")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(report.csv_header())
    for row in report.csv_rows():
        writer.writerow(["" if v is None else v for v in row])
    return buf.getvalue()


def emit(report, fmt: str = "json", path: str | PathLike | None = None, config=None) -> None:
    """Write ``report`` as csv or json to ``path`` (stdout when None or '-')."""
    if fmt == "json":
        text = to_json(report, config)
    elif fmt == "csv":
        text = to_csv(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(path).write_bytes(text.encode("utf-8"))
