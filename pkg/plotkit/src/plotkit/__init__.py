"""Batch figure renderer for rqcm CSV/JSON outputs."""

__version__ = "0.1.0"

from .figures import KINDS, FigureSpec, render
from .parsers import (
    CurveData,
    HistogramData,
    SchemaError,
    TableData,
    read_curve,
    read_extend_log,
    read_histogram,
    read_sweep,
    read_table,
)
