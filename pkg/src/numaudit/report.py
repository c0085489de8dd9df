"""Rendering and comparison of audit suite results.

A SuiteReport is a small immutable table: one row per executed case,
named columns, and a summary of counts and extrema. Rendering is pure
(same report, same bytes) in three formats: markdown and CSV carry the
display conventions (LRE truncated to one decimal, "0" below one digit,
"--" for relative error above 1, "Inf", "NA"; stability in parentheses
to two decimals, e.g. "Inf(0.99)"); json-lines carries full untruncated
raw values for machine consumers, with +/-infinity spelled "Inf"/"-Inf"
and unrepresentable values null, since JSON has no non-finite numbers.

diff() compares two reports case by case and prints one line per
changed cell; identical reports produce an empty string.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass

from .metric import LreScore

__all__ = [
    "FORMATS",
    "Cell",
    "SuiteReport",
    "diff",
    "float_cell",
    "lre_cell",
    "render",
    "report_filename",
    "stability_cell",
    "text_cell",
]

FORMATS = ("markdown", "csv", "json-lines")

_FORMAT_ALIASES = {
    "md": "markdown",
    "markdown": "markdown",
    "csv": "csv",
    "jsonl": "json-lines",
    "json-lines": "json-lines",
}

_EXTENSIONS = {"markdown": "md", "csv": "csv", "json-lines": "jsonl"}


@dataclass(frozen=True)
class Cell:
    """One table cell: display text plus an optional raw payload for jsonl."""

    text: str
    raw: object = None

    def payload(self):
        return self.text if self.raw is None else self.raw


def _json_safe(v: float | None):
    if v is None:
        return None
    if math.isnan(v):
        return None
    if v == math.inf:
        return "Inf"
    if v == -math.inf:
        return "-Inf"
    return v


def lre_cell(s: LreScore) -> Cell:
    """Cell for a plain LRE score."""
    return Cell(
        text=s.display.cell(),
        raw={
            "kind": s.display.kind,
            "raw": _json_safe(s.raw),
            "computed": _json_safe(s.computed),
            "certified": _json_safe(s.certified),
        },
    )


def stability_cell(s: LreScore, s_lre: float) -> Cell:
    """Cell showing a base LRE with its stability estimate in parentheses."""
    base = lre_cell(s)
    return Cell(
        text=f"{base.text}({s_lre:.2f})",
        raw={**base.raw, "s_lre": s_lre},
    )


def float_cell(v: float | None) -> Cell:
    """Full-precision numeric cell (shortest round-trip decimal)."""
    if v is None:
        return Cell("NA")
    return Cell(repr(float(v)), raw=_json_safe(float(v)))


def text_cell(s: str) -> Cell:
    return Cell(s)


@dataclass(frozen=True)
class SuiteReport:
    """Immutable result table for one suite run on one backend."""

    suite: str
    backend_id: str
    columns: tuple[str, ...]
    case_ids: tuple[str, ...]
    rows: tuple[tuple[Cell, ...], ...]
    summary: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        if len(self.case_ids) != len(self.rows):
            raise ValueError("one row per case id required")
        if len(set(self.case_ids)) != len(self.case_ids):
            raise ValueError("case ids must be unique")
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError("row width must match the column list")


def _canon_format(fmt: str) -> str:
    try:
        return _FORMAT_ALIASES[fmt]
    except KeyError:
        raise ValueError(f"unknown report format {fmt!r}") from None


def _render_markdown(r: SuiteReport) -> str:
    out = [f"## {r.suite} suite ({r.backend_id})", ""]
    header = ["case", *r.columns]
    out.append("| " + " | ".join(header) + " |")
    out.append("|" + "|".join([" --- "] * len(header)) + "|")
    for case_id, row in zip(r.case_ids, r.rows):
        out.append("| " + " | ".join([case_id, *(c.text for c in row)]) + " |")
    if r.summary:
        out.append("")
        for key, value in r.summary:
            out.append(f"- {key}: {value}")
    return "\n".join(out) + "\n"


def _render_csv(r: SuiteReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["case", *r.columns])
    for case_id, row in zip(r.case_ids, r.rows):
        w.writerow([case_id, *(c.text for c in row)])
    return buf.getvalue()


def _render_jsonl(r: SuiteReport) -> str:
    lines = [json.dumps(
        {"suite": r.suite, "backend": r.backend_id, "columns": list(r.columns)},
        allow_nan=False)]
    for case_id, row in zip(r.case_ids, r.rows):
        cells = {col: cell.payload() for col, cell in zip(r.columns, row)}
        lines.append(json.dumps({"case": case_id, "cells": cells}, allow_nan=False))
    if r.summary:
        lines.append(json.dumps({"summary": dict(r.summary)}, allow_nan=False))
    return "\n".join(lines) + "\n"


def render(report: SuiteReport, fmt: str = "markdown") -> str:
    """Render a report; byte-identical for equal inputs."""
    canon = _canon_format(fmt)
    if canon == "markdown":
        return _render_markdown(report)
    if canon == "csv":
        return _render_csv(report)
    return _render_jsonl(report)


def diff(a: SuiteReport, b: SuiteReport) -> str:
    """Per-case cell changes between two runs of the same suite.

    Returns one line per differing cell in a's case order; an empty
    string when nothing changed. Raises on mismatched suites, columns,
    or case sets.
    """
    if a.suite != b.suite:
        raise ValueError(f"different suites: {a.suite!r} vs {b.suite!r}")
    if a.columns != b.columns:
        raise ValueError("reports have different column sets")
    if set(a.case_ids) != set(b.case_ids):
        only_a = sorted(set(a.case_ids) - set(b.case_ids))
        only_b = sorted(set(b.case_ids) - set(a.case_ids))
        raise ValueError(f"mismatched case sets (only left: {only_a}, only right: {only_b})")
    b_rows = dict(zip(b.case_ids, b.rows))
    lines = []
    for case_id, row_a in zip(a.case_ids, a.rows):
        row_b = b_rows[case_id]
        for col, ca, cb in zip(a.columns, row_a, row_b):
            if ca.text != cb.text:
                lines.append(f"{case_id}: {col} {ca.text} -> {cb.text}")
    if not lines:
        return ""
    return "\n".join(lines) + "\n"


def _slug(s: str) -> str:
    out = re.sub(r"[^A-Za-z0-9]+", "-", s).strip("-")
    return out or "backend"


def report_filename(report: SuiteReport, fmt: str,
                    timestamp: str | None = None) -> str:
    """<suite>-<backend>-<timestamp>.<ext>; timestamp omitted when None."""
    canon = _canon_format(fmt)
    parts = [report.suite, _slug(report.backend_id)]
    if timestamp is not None:
        parts.append(timestamp)
    return "-".join(parts) + "." + _EXTENSIONS[canon]
