"""Readers for the rqcm CSV/JSON schemas.

Standalone on purpose: the renderer talks to the numerical component only
through its documented file formats, so these parsers implement the schema
contract independently instead of importing rqcm.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

SUPPORTED = {
    "histogram": "rqcm.histogram/1",
    "curve": "rqcm.curve/1",
    "table": "rqcm.table/1",
    "sweep": "rqcm.sweep/1",
    "extend": "rqcm.extend/1",
    "values": "rqcm.values/1",
}


class SchemaError(ValueError):
    """Input does not match the expected schema; carries the offending line."""

    def __init__(self, message, line=""):
        self.line = line
        super().__init__(f"{message}" + (f" (offending header: {line!r})" if line else ""))


def split_header(text: str) -> tuple[dict, list[str]]:
    meta: dict = {}
    rows: list[str] = []
    for line in text.splitlines():
        if line.startswith("#"):
            body = line[1:].strip()
            if ": " in body:
                key, value = body.split(": ", 1)
                meta[key] = value
        elif line.strip():
            rows.append(line)
    return meta, rows


def _require_schema(meta: dict, expected: str, source: str):
    got = meta.get("schema")
    if got != expected:
        raise SchemaError(f"{source}: expected schema {expected}, found {got}",
                          line=f"# schema: {got}" if got else "<missing schema header>")


@dataclass(frozen=True)
class HistogramData:
    bin_edges: np.ndarray
    counts: np.ndarray
    density: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def midpoints(self):
        return 0.5 * (self.bin_edges[1:] + self.bin_edges[:-1])

    @property
    def widths(self):
        return np.diff(self.bin_edges)


def read_histogram(path: str) -> HistogramData:
    with open(path) as fh:
        meta, rows = split_header(fh.read())
    _require_schema(meta, SUPPORTED["histogram"], path)
    if not rows or not rows[0].startswith("bin_left"):
        raise SchemaError(f"{path}: missing histogram column header",
                          line=rows[0] if rows else "<empty>")
    lefts, rights, counts, density = [], [], [], []
    for row in rows[1:]:
        a, b, c, d = row.split(",")
        lefts.append(float(a))
        rights.append(float(b))
        counts.append(int(c))
        density.append(float(d))
    edges = np.array(lefts + [rights[-1]])
    return HistogramData(edges, np.array(counts), np.array(density), meta)


@dataclass(frozen=True)
class CurveData:
    x: np.ndarray
    density: np.ndarray
    support: tuple
    meta: dict = field(default_factory=dict)


def read_curve(path: str) -> CurveData:
    with open(path) as fh:
        meta, rows = split_header(fh.read())
    _require_schema(meta, SUPPORTED["curve"], path)
    if not rows or rows[0].strip() != "x,density":
        raise SchemaError(f"{path}: missing curve column header",
                          line=rows[0] if rows else "<empty>")
    data = np.array([[float(v) for v in row.split(",")] for row in rows[1:]])
    support = tuple(tuple(iv) for iv in json.loads(meta.get("support", "[]")))
    return CurveData(data[:, 0], data[:, 1], support, meta)


@dataclass(frozen=True)
class TableData:
    columns: dict
    meta: dict = field(default_factory=dict)


def read_table(path: str) -> TableData:
    with open(path) as fh:
        meta, rows = split_header(fh.read())
    _require_schema(meta, SUPPORTED["table"], path)
    names = rows[0].split(",")
    columns: dict = {name: [] for name in names}
    for row in rows[1:]:
        for name, cell in zip(names, row.split(",")):
            columns[name].append(float(cell) if cell else None)
    return TableData(columns, meta)


def read_sweep(path: str) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("schema") != SUPPORTED["sweep"]:
        raise SchemaError(f"{path}: expected schema {SUPPORTED['sweep']}, "
                          f"found {doc.get('schema')}")
    return doc


def read_extend_log(path: str) -> list[dict]:
    records = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            doc = json.loads(line)
            if doc.get("schema") != SUPPORTED["extend"]:
                raise SchemaError(f"{path}: expected schema {SUPPORTED['extend']}, "
                                  f"found {doc.get('schema')}", line=line[:60])
            records.append(doc)
    return records
