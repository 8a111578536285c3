"""Histograms, empirical-vs-theoretical distances, and Monte Carlo sweeps."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

try:
    from threadpoolctl import threadpool_limits
except ImportError:  # pragma: no cover
    from contextlib import nullcontext

    def threadpool_limits(limits=None):
        return nullcontext()

from .ensemble import GoeSpec, ModeBipartition, RngSeed, sample_rqcm
from .extend import Status, is_separable, max_extendability
from .spectra import ppt_defect, purity_rate, spectrum, symplectic_spectrum

OBSERVABLES = ("spectrum", "symplectic", "ppt", "separability", "max_k", "purity")


@dataclass(frozen=True)
class Histogram:
    """Equal-width histogram with right-closed bins; density integrates to 1."""

    bin_edges: np.ndarray
    counts: np.ndarray
    density: np.ndarray
    total: int

    def __post_init__(self):
        edges = np.asarray(self.bin_edges, dtype=float)
        counts = np.asarray(self.counts, dtype=int)
        dens = np.asarray(self.density, dtype=float)
        if len(edges) != len(counts) + 1 or len(counts) != len(dens):
            raise ValueError("bin_edges must have one more entry than counts/density")
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "density", dens)

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[1:] + self.bin_edges[:-1])


def histogram(values, bins: int, range_: tuple[float, float] | None = None) -> Histogram:
    """Equal-width histogram over ``range_`` (default: data min/max).

    Bins are right-closed, (left, right], with the first bin also closed on
    the left; values outside the range are dropped. An empty input yields an
    all-zero histogram with total 0.
    """
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    vals = np.asarray(values, dtype=float).ravel()
    if range_ is None:
        if vals.size == 0:
            range_ = (0.0, 1.0)
        else:
            range_ = (float(vals.min()), float(vals.max()))
    lo, hi = float(range_[0]), float(range_[1])
    if hi < lo:
        raise ValueError(f"invalid range ({lo}, {hi})")
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5
    edges = np.linspace(lo, hi, bins + 1)
    if vals.size:
        inside = vals[(vals >= lo) & (vals <= hi)]
        idx = np.clip(np.searchsorted(edges, inside, side="left") - 1, 0, bins - 1)
        counts = np.bincount(idx, minlength=bins)
    else:
        counts = np.zeros(bins, dtype=int)
    total = int(counts.sum())
    widths = np.diff(edges)
    density = counts / (total * widths) if total else np.zeros(bins)
    return Histogram(edges, counts, density, total)


def l1_distance(hist: Histogram, density) -> float:
    """sum_i |hist density_i - f(mid_i)| * width_i against a callable or DensityCurve."""
    f = density if callable(density) else np.asarray(density, dtype=float)
    mids = hist.midpoints
    theory = np.asarray(f(mids), dtype=float) if callable(f) else f
    return float(np.sum(np.abs(hist.density - theory) * hist.widths))


@dataclass(frozen=True)
class SweepConfig:
    """One Monte Carlo experiment: ensemble parameters, sample count, observables."""

    n: int
    sigma: float
    samples: int
    seed: RngSeed
    partition: ModeBipartition | None = None
    normalized: bool = True
    k_cap: int = 64
    bins: int = 100
    tol: float = 1e-8
    what: frozenset = frozenset({"ppt"})

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        unknown = set(self.what) - set(OBSERVABLES)
        if unknown:
            raise ValueError(f"unknown observables {sorted(unknown)}; pick from {OBSERVABLES}")
        needs_partition = {"ppt", "separability", "max_k"} & set(self.what)
        if needs_partition:
            if self.partition is None:
                raise ValueError(f"observables {sorted(needs_partition)} need a partition")
            if self.partition.n != self.n:
                raise ValueError(
                    f"partition ({self.partition.m}, {self.partition.l}) inconsistent with n={self.n}")
        object.__setattr__(self, "what", frozenset(self.what))

    @property
    def goe_spec(self) -> GoeSpec:
        return GoeSpec(self.n, self.sigma, self.normalized)


@dataclass(frozen=True)
class SweepSummary:
    """Aggregated sweep results; fractions are over decided samples."""

    config: SweepConfig
    fractions: dict
    defect_stats: dict | None = None
    purity_stats: dict | None = None
    max_k_histogram: Histogram | None = None
    spectra_histograms: dict = field(default_factory=dict)
    undecided: int = 0
    max_k_values: tuple = ()


def _mean_var(values) -> dict:
    arr = np.asarray(values, dtype=float)
    out = {"mean": float(arr.mean()), "count": int(arr.size)}
    out["variance"] = float(arr.var(ddof=1)) if arr.size > 1 else 0.0
    return out


def _one_sample(cfg: SweepConfig, index: int) -> dict:
    qcm = sample_rqcm(cfg.goe_spec, cfg.seed.substream(index))
    rec: dict = {}
    if "spectrum" in cfg.what:
        rec["spectrum"] = spectrum(qcm).values
    if "symplectic" in cfg.what:
        rec["symplectic"] = symplectic_spectrum(qcm).values
    if "purity" in cfg.what:
        rec["purity"] = purity_rate(qcm)
    if "ppt" in cfg.what:
        rec["ppt_defect"] = ppt_defect(qcm, cfg.partition)
    if "max_k" in cfg.what:
        rec["report"] = max_extendability(qcm, cfg.partition, k_cap=cfg.k_cap, tol=cfg.tol)
    elif "separability" in cfg.what:
        rec["separability"] = is_separable(qcm, cfg.partition, tol=cfg.tol).status
    return rec


def worker_count() -> int:
    env = os.environ.get("RQCM_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


class SweepConsistencyError(RuntimeError):
    """A sample was labelled separable while violating PPT beyond tolerance."""


def check_sample_consistency(index: int, separable: bool, defect: float, tol: float):
    """Separability implies PPT; a contradiction beyond the band is a hard fault."""
    if separable and defect < -10.0 * tol:
        raise SweepConsistencyError(
            f"sample {index}: labelled separable but ppt_defect = {defect:.3e} "
            f"< {-10.0 * tol:.1e}")


def run_sweep(cfg: SweepConfig) -> SweepSummary:
    """Run the configured Monte Carlo experiment.

    Sample i draws from the stream (seed, stream_id + i), so the result is
    bit-identical for any worker count; aggregation happens in index order.
    Solver Undecided outcomes are excluded from fractions and counted
    separately rather than aborting the sweep.
    """
    workers = min(worker_count(), cfg.samples)
    with threadpool_limits(limits=1):
        if workers == 1:
            records = [_one_sample(cfg, i) for i in range(cfg.samples)]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                records = list(pool.map(lambda i: _one_sample(cfg, i), range(cfg.samples)))

    if "ppt" in cfg.what:
        for i, rec in enumerate(records):
            if "report" in rec:
                check_sample_consistency(i, rec["report"].separable, rec["ppt_defect"], cfg.tol)
            elif "separability" in rec:
                check_sample_consistency(i, rec["separability"] is Status.FEASIBLE,
                                         rec["ppt_defect"], cfg.tol)

    fractions: dict = {}
    defect_stats = None
    purity_stats = None
    max_k_hist = None
    spectra_hists: dict = {}
    undecided = 0
    max_k_values: list[int] = []

    if "ppt" in cfg.what:
        defects = [r["ppt_defect"] for r in records]
        defect_stats = _mean_var(defects)
        n_ppt = sum(1 for d in defects if d >= -cfg.tol)
        fractions["ppt"] = n_ppt / cfg.samples
        fractions["non_ppt"] = 1.0 - fractions["ppt"]

    sep_states: list[Status | None] = []
    if "max_k" in cfg.what:
        for r in records:
            rep = r["report"]
            if "separability-undecided" in rep.flags:
                sep_states.append(Status.UNDECIDED)
            else:
                sep_states.append(Status.FEASIBLE if rep.separable else Status.INFEASIBLE)
            if not rep.separable and "separability-undecided" not in rep.flags:
                max_k_values.append(rep.max_k)
    elif "separability" in cfg.what:
        sep_states = [r["separability"] for r in records]

    if sep_states:
        decided = [s for s in sep_states if s is not Status.UNDECIDED]
        undecided = len(sep_states) - len(decided)
        if decided:
            n_sep = sum(1 for s in decided if s is Status.FEASIBLE)
            fractions["separable"] = n_sep / len(decided)
            fractions["entangled"] = 1.0 - fractions["separable"]

    if max_k_values:
        max_k_hist = histogram(max_k_values, bins=cfg.k_cap, range_=(0.5, cfg.k_cap + 0.5))

    for kind in ("spectrum", "symplectic"):
        if kind in cfg.what:
            pooled = np.concatenate([r[kind] for r in records])
            spectra_hists[kind] = histogram(pooled, bins=cfg.bins)

    if "purity" in cfg.what:
        purity_stats = _mean_var([r["purity"] for r in records])

    return SweepSummary(
        config=cfg,
        fractions=fractions,
        defect_stats=defect_stats,
        purity_stats=purity_stats,
        max_k_histogram=max_k_hist,
        spectra_histograms=spectra_hists,
        undecided=undecided,
        max_k_values=tuple(max_k_values),
    )
