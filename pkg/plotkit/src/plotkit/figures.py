"""Figure rendering: publication-style overlays, support bands, fraction and max-k bars.

Rendering is deterministic: fixed style, a fixed SVG hash salt, and no
timestamps, so identical inputs produce byte-identical SVG output.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from . import parsers  # noqa: E402

KINDS = ("overlay", "support_band", "fraction_bars", "maxk_bars")

HIST_COLOR = "#f2c94c"
CURVE_COLOR = "#2d5fb8"
BAND_COLOR = "#9bb8e8"
BAR_COLORS = ("#2d5fb8", "#f2c94c", "#68a357", "#c0504d")

matplotlib.rcParams["svg.hashsalt"] = "plotkit"
matplotlib.rcParams["svg.fonttype"] = "path"


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: input files by role, the figure kind, and the output path."""

    kind: str
    output: str
    histograms: tuple[str, ...] = ()
    curves: tuple[str, ...] = ()
    summaries: tuple[str, ...] = ()
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")


def _new_axes(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=100)
    if spec.title:
        ax.set_title(spec.title)
    if spec.xlabel:
        ax.set_xlabel(spec.xlabel)
    if spec.ylabel:
        ax.set_ylabel(spec.ylabel)
    return fig, ax


def _save(fig, path: str):
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _render_overlay(spec: FigureSpec):
    if not spec.histograms or not spec.curves:
        raise ValueError("overlay needs one histogram input and one curve input")
    hist = parsers.read_histogram(spec.histograms[0])
    curve = parsers.read_curve(spec.curves[0])
    fig, ax = _new_axes(spec)
    ax.bar(hist.midpoints, hist.density, width=hist.widths, color=HIST_COLOR,
           edgecolor="none", label="empirical")
    ax.plot(curve.x, curve.density, color=CURVE_COLOR, linewidth=1.8, label="limit law")
    ax.legend(frameon=False)
    ax.set_xlim(min(hist.bin_edges[0], curve.x[0]), max(hist.bin_edges[-1], curve.x[-1]))
    _save(fig, spec.output)


def _render_support_band(spec: FigureSpec):
    if not spec.curves:
        raise ValueError("support_band needs an edges table input")
    table = parsers.read_table(spec.curves[0])
    if not {"sigma", "R", "L"} <= set(table.columns):
        raise parsers.SchemaError("support_band table must have sigma, R, L columns")
    sigma = np.array(table.columns["sigma"], dtype=float)
    big = np.array(table.columns["R"], dtype=float)
    small = np.array([v if v is not None else np.nan for v in table.columns["L"]])
    fig, ax = _new_axes(spec)
    inner = np.where(np.isnan(small), 0.0, small)
    ax.fill_between(sigma, inner, big, color=BAND_COLOR, label="support")
    ax.fill_between(sigma, -big, -inner, color=BAND_COLOR)
    ax.plot(sigma, big, color=CURVE_COLOR, linewidth=1.2)
    ax.plot(sigma, -big, color=CURVE_COLOR, linewidth=1.2)
    gap = ~np.isnan(small)
    if gap.any():
        ax.plot(sigma[gap], small[gap], color=CURVE_COLOR, linewidth=1.2)
        ax.plot(sigma[gap], -small[gap], color=CURVE_COLOR, linewidth=1.2)
    ax.axhline(0.0, color="#888888", linewidth=0.6)
    ax.set_xlim(sigma[0], sigma[-1])
    ax.legend(frameon=False)
    _save(fig, spec.output)


def _sweep_label(doc: dict) -> str:
    cfg = doc.get("config", {})
    return f"n={cfg.get('n')}, sigma={cfg.get('sigma')}"


def _render_fraction_bars(spec: FigureSpec):
    if not spec.summaries:
        raise ValueError("fraction_bars needs at least one sweep summary input")
    docs = [parsers.read_sweep(p) for p in spec.summaries]
    keys = ("separable", "entangled", "ppt", "non_ppt")
    fig, ax = _new_axes(spec)
    group_width = 0.8
    bar_width = group_width / len(keys)
    for g, doc in enumerate(docs):
        fractions = doc.get("fractions", {})
        for i, key in enumerate(keys):
            value = fractions.get(key)
            if value is None:
                continue
            ax.bar(g - group_width / 2 + (i + 0.5) * bar_width, value, width=bar_width,
                   color=BAR_COLORS[i], label=key if g == 0 else None)
    ax.set_xticks(range(len(docs)))
    ax.set_xticklabels([_sweep_label(d) for d in docs])
    ax.set_ylim(0, 1)
    ax.legend(frameon=False, ncol=2)
    _save(fig, spec.output)


def _maxk_counts(spec: FigureSpec) -> tuple[np.ndarray, np.ndarray]:
    if not spec.summaries:
        raise ValueError("maxk_bars needs a sweep summary or extend log input")
    source = spec.summaries[0]
    try:
        doc = parsers.read_sweep(source)
        values = doc.get("max_k_values")
        if values is None:
            raise parsers.SchemaError(f"{source}: sweep summary has no max_k data")
        values = np.asarray(values, dtype=int)
    except ValueError:
        # not a sweep summary (or lacks max_k data): treat as an extend JSON-lines log
        records = parsers.read_extend_log(source)
        values = np.array([int(r["max_k"]) for r in records
                           if not r["separable"] and not str(r["max_k"]).startswith(">=")],
                          dtype=int)
    if values.size == 0:
        return np.array([1]), np.array([0.0])
    ks = np.arange(1, values.max() + 1)
    counts = np.array([(values == k).sum() for k in ks], dtype=float)
    return ks, 100.0 * counts / values.size


def _render_maxk_bars(spec: FigureSpec):
    ks, percent = _maxk_counts(spec)
    fig, ax = _new_axes(spec)
    ax.bar(ks, percent, width=0.8, color=CURVE_COLOR)
    ax.set_xticks(ks)
    ax.set_xlabel(spec.xlabel or "max k")
    ax.set_ylabel(spec.ylabel or "% of entangled samples")
    _save(fig, spec.output)


def render(spec: FigureSpec) -> str:
    """Render the figure described by ``spec``; returns the output path."""
    if spec.kind == "overlay":
        _render_overlay(spec)
    elif spec.kind == "support_band":
        _render_support_band(spec)
    elif spec.kind == "fraction_bars":
        _render_fraction_bars(spec)
    else:
        _render_maxk_bars(spec)
    return spec.output
