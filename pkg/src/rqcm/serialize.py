"""Versioned CSV/JSON schemas for every artifact the library emits.

CSV files carry a block of ``# key: value`` header lines (always including
``schema``) followed by a column header row and data rows. JSON documents
carry the same ``schema`` key at top level. The plotting component parses
these files without importing this package, so changes here are breaking
schema changes and must bump the version suffix.
"""

from __future__ import annotations

import io
import json

import numpy as np

from .freeprob import DensityCurve
from .stats import Histogram, SweepConfig, SweepSummary

MATRIX_SCHEMA = "rqcm.matrix/1"
VALUES_SCHEMA = "rqcm.values/1"
CURVE_SCHEMA = "rqcm.curve/1"
HISTOGRAM_SCHEMA = "rqcm.histogram/1"
SWEEP_SCHEMA = "rqcm.sweep/1"
EXTEND_SCHEMA = "rqcm.extend/1"
TABLE_SCHEMA = "rqcm.table/1"


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _header_lines(schema: str, meta: dict) -> list[str]:
    lines = [f"# schema: {schema}"]
    for key, value in meta.items():
        if value is None:
            continue
        lines.append(f"# {key}: {_fmt(value)}")
    return lines


def read_csv_header(text: str) -> tuple[dict, list[str]]:
    """Split a CSV document into its header dict and remaining data lines."""
    meta: dict = {}
    rest: list[str] = []
    for line in text.splitlines():
        if line.startswith("#"):
            body = line[1:].strip()
            if ": " in body:
                key, value = body.split(": ", 1)
                meta[key] = value
        elif line.strip():
            rest.append(line)
    return meta, rest


# ---------------------------------------------------------------------------
# matrices

def matrix_to_csv(matrix, meta: dict | None = None) -> str:
    arr = np.asarray(matrix, dtype=float)
    out = io.StringIO()
    for line in _header_lines(MATRIX_SCHEMA, meta or {}):
        out.write(line + "\n")
    for row in arr:
        out.write(",".join(repr(float(v)) for v in row) + "\n")
    return out.getvalue()


def matrix_from_csv(text: str) -> tuple[np.ndarray, dict]:
    meta, rows = read_csv_header(text)
    data = np.array([[float(v) for v in row.split(",")] for row in rows])
    return data, meta


def matrix_to_json(matrix, meta: dict | None = None) -> str:
    doc = {"schema": MATRIX_SCHEMA}
    doc.update(meta or {})
    doc["data"] = np.asarray(matrix, dtype=float).tolist()
    return json.dumps(doc)


def matrix_from_json(text: str) -> tuple[np.ndarray, dict]:
    doc = json.loads(text)
    data = np.asarray(doc.pop("data"), dtype=float)
    return data, doc


# ---------------------------------------------------------------------------
# value lists (spectra, defects)

def values_to_csv(values, kind: str, meta: dict | None = None) -> str:
    out = io.StringIO()
    header = dict(meta or {})
    header["kind"] = kind
    for line in _header_lines(VALUES_SCHEMA, header):
        out.write(line + "\n")
    out.write("value\n")
    for v in np.asarray(values, dtype=float).ravel():
        out.write(repr(float(v)) + "\n")
    return out.getvalue()


def values_from_csv(text: str) -> tuple[np.ndarray, dict]:
    meta, rows = read_csv_header(text)
    if rows and rows[0].strip() == "value":
        rows = rows[1:]
    return np.array([float(r) for r in rows]), meta


def values_to_json(values, kind: str, meta: dict | None = None) -> str:
    doc = {"schema": VALUES_SCHEMA, "kind": kind}
    doc.update(meta or {})
    doc["values"] = [float(v) for v in np.asarray(values, dtype=float).ravel()]
    return json.dumps(doc)


# ---------------------------------------------------------------------------
# density curves

def curve_to_csv(curve: DensityCurve, meta: dict | None = None) -> str:
    header = dict(meta or {})
    header["kind"] = curve.kind
    header["sigma"] = curve.sigma
    header["support"] = json.dumps([list(iv) for iv in curve.support])
    header["total_mass"] = curve.total_mass
    for key, value in curve.meta.items():
        header.setdefault(key, value)
    out = io.StringIO()
    for line in _header_lines(CURVE_SCHEMA, header):
        out.write(line + "\n")
    out.write("x,density\n")
    for x, d in zip(curve.grid, curve.density):
        out.write(f"{float(x)!r},{float(d)!r}\n")
    return out.getvalue()


def curve_from_csv(text: str) -> tuple[DensityCurve, dict]:
    meta, rows = read_csv_header(text)
    if rows and rows[0].strip() == "x,density":
        rows = rows[1:]
    data = np.array([[float(v) for v in row.split(",")] for row in rows])
    support = tuple(tuple(iv) for iv in json.loads(meta.get("support", "[]")))
    curve = DensityCurve(data[:, 0], data[:, 1], support,
                         meta.get("kind", "mu"), float(meta.get("sigma", "1.0")))
    return curve, meta


def curve_to_json(curve: DensityCurve, meta: dict | None = None) -> str:
    doc = {"schema": CURVE_SCHEMA, "kind": curve.kind, "sigma": curve.sigma,
           "support": [list(iv) for iv in curve.support], "total_mass": curve.total_mass}
    doc.update(curve.meta)
    doc.update(meta or {})
    doc["x"] = curve.grid.tolist()
    doc["density"] = curve.density.tolist()
    return json.dumps(doc)


# ---------------------------------------------------------------------------
# histograms

def histogram_to_csv(hist: Histogram, meta: dict | None = None) -> str:
    out = io.StringIO()
    for line in _header_lines(HISTOGRAM_SCHEMA, meta or {}):
        out.write(line + "\n")
    out.write("bin_left,bin_right,count,density\n")
    for left, right, count, dens in zip(hist.bin_edges[:-1], hist.bin_edges[1:],
                                        hist.counts, hist.density):
        out.write(f"{float(left)!r},{float(right)!r},{int(count)},{float(dens)!r}\n")
    return out.getvalue()


def histogram_from_csv(text: str) -> tuple[Histogram, dict]:
    meta, rows = read_csv_header(text)
    if rows and rows[0].startswith("bin_left"):
        rows = rows[1:]
    lefts, rights, counts, density = [], [], [], []
    for row in rows:
        a, b, c, d = row.split(",")
        lefts.append(float(a))
        rights.append(float(b))
        counts.append(int(c))
        density.append(float(d))
    edges = np.array(lefts + [rights[-1]])
    hist = Histogram(edges, np.array(counts), np.array(density), int(sum(counts)))
    return hist, meta


def _histogram_doc(hist: Histogram) -> dict:
    return {
        "bin_edges": hist.bin_edges.tolist(),
        "counts": hist.counts.tolist(),
        "density": hist.density.tolist(),
        "total": hist.total,
    }


# ---------------------------------------------------------------------------
# sweeps and extendability reports

def sweep_config_doc(cfg: SweepConfig) -> dict:
    return {
        "n": cfg.n,
        "sigma": cfg.sigma,
        "normalized": cfg.normalized,
        "samples": cfg.samples,
        "seed": cfg.seed.seed,
        "stream_id": cfg.seed.stream_id,
        "partition": [cfg.partition.m, cfg.partition.l] if cfg.partition else None,
        "k_cap": cfg.k_cap,
        "bins": cfg.bins,
        "tol": cfg.tol,
        "what": sorted(cfg.what),
    }


def sweep_to_json(summary: SweepSummary, meta: dict | None = None) -> str:
    doc = {"schema": SWEEP_SCHEMA}
    doc.update(meta or {})
    doc["config"] = sweep_config_doc(summary.config)
    doc["fractions"] = {k: float(v) for k, v in summary.fractions.items()}
    doc["undecided"] = summary.undecided
    if summary.defect_stats is not None:
        doc["defect_stats"] = summary.defect_stats
    if summary.purity_stats is not None:
        doc["purity_stats"] = summary.purity_stats
    if summary.max_k_histogram is not None:
        doc["max_k_histogram"] = _histogram_doc(summary.max_k_histogram)
        doc["max_k_values"] = list(summary.max_k_values)
    if summary.spectra_histograms:
        doc["spectra_histograms"] = {
            kind: _histogram_doc(h) for kind, h in summary.spectra_histograms.items()
        }
    return json.dumps(doc)


def extend_report_line(report, sample_meta: dict) -> str:
    """One JSON line for the per-sample extendability log."""
    doc = {"schema": EXTEND_SCHEMA}
    doc.update(sample_meta)
    doc.update({
        "separable": report.separable,
        "ppt": report.ppt,
        "max_k": report.max_k_label,
        "per_k": [[k, status.value] for k, status in report.per_k],
        "residuals": {
            "separability": report.separability_residual,
            "ppt_defect": report.ppt_defect,
        },
        "undecided_ks": list(report.undecided_ks),
        "flags": list(report.flags),
    })
    return json.dumps(doc)


# ---------------------------------------------------------------------------
# scalar tables

def table_to_csv(columns: dict[str, list], meta: dict | None = None) -> str:
    """Small numeric table: named columns of equal length; blanks for None."""
    out = io.StringIO()
    for line in _header_lines(TABLE_SCHEMA, meta or {}):
        out.write(line + "\n")
    names = list(columns)
    out.write(",".join(names) + "\n")
    length = len(columns[names[0]])
    for i in range(length):
        cells = []
        for name in names:
            v = columns[name][i]
            cells.append("" if v is None else _fmt(v))
        out.write(",".join(cells) + "\n")
    return out.getvalue()
