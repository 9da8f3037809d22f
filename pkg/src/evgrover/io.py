"""CSV / JSON serialization of search results and sweep tables."""
from __future__ import annotations

import csv
import json
from dataclasses import fields
from typing import IO, Iterable

from .drivers import SWEEP_COLUMNS, SearchResult, SweepRow


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    if v is None:
        return ""
    return str(v)


def write_sweep_csv(rows: Iterable[SweepRow], fh: IO[str]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([format_value(getattr(row, c)) for c in SWEEP_COLUMNS])


def read_sweep_csv(fh: IO[str]) -> list[dict[str, str]]:
    return list(csv.DictReader(fh))


def result_to_json(result: SearchResult) -> str:
    return json.dumps(result.to_dict(), indent=2)


def result_from_json(text: str) -> SearchResult:
    return SearchResult.from_dict(json.loads(text))


def write_result(result: SearchResult, fh: IO[str], fmt: str = "json") -> None:
    if fmt == "json":
        fh.write(result_to_json(result) + "\n")
    elif fmt == "csv":
        summary = result.summary()
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(summary))
        writer.writerow([format_value(v) for v in summary.values()])
    else:
        raise ValueError(f"unknown format {fmt!r}")


RESULT_FIELDS = tuple(f.name for f in fields(SearchResult))
