"""Batch command-line front end.

Emits CSV/JSON per the schemas in :mod:`rqcm.serialize`; every file embeds
the exact invocation, seed, and version in its header, so re-running the
printed invocation reproduces the file byte for byte. Exit codes: 0 success,
1 numerical failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import shlex
import sys

import numpy as np

from . import __version__, freeprob, serialize
from .ensemble import GoeSpec, ModeBipartition, RngSeed, sample_rqcm
from .extend import max_extendability
from .linalg import NotPDError, NotPSDError
from .spectra import ppt_defect, spectrum, symplectic_spectrum
from .stats import SweepConfig, histogram, run_sweep

CURVES = ("mu", "eigen", "symplectic", "marginal")
TABLES = ("edges", "ld", "energy")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rqcm",
        description="Sample random quantum covariance matrices, compute their "
                    "spectra and entanglement properties, and evaluate the "
                    "theoretical limit laws.")
    parser.add_argument("--version", action="version", version=f"rqcm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, partition=False, samples=False, bins=False, kcap=False):
        p.add_argument("--modes", type=int, required=True, help="number of modes n (matrix is 2n x 2n)")
        p.add_argument("--sigma", type=float, default=1.0, help="GOE entry std dev (default 1.0)")
        p.add_argument("--normalized", action="store_true",
                       help="use effective sigma/sqrt(2n) (the limit-law scaling)")
        p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
        p.add_argument("--stream", type=int, default=0, help="RNG stream id (default 0)")
        if partition:
            p.add_argument("--partition", type=_partition, required=True,
                           help="mode split m:l with m+l = n")
        if samples:
            p.add_argument("--samples", type=int, default=1, help="number of samples (default 1)")
        if bins:
            p.add_argument("--bins", type=int, default=100, help="histogram bins (default 100)")
        if kcap:
            p.add_argument("--k-cap", type=int, default=64, help="extendability search cap (default 64)")
        p.add_argument("--tol", type=float, default=1e-8, help="decision tolerance (default 1e-8)")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("sample", help="draw one covariance matrix")
    common(p)

    p = sub.add_parser("spectrum", help="ordinary spectrum of sampled matrices")
    common(p, samples=True, bins=True)
    p.add_argument("--hist", action="store_true", help="emit a histogram instead of raw values")

    p = sub.add_parser("symplectic", help="symplectic spectrum of sampled matrices")
    common(p, samples=True, bins=True)
    p.add_argument("--hist", action="store_true", help="emit a histogram instead of raw values")

    p = sub.add_parser("ppt", help="PPT defects across samples")
    common(p, partition=True, samples=True, bins=True)
    p.add_argument("--hist", action="store_true", help="emit a histogram instead of raw values")

    p = sub.add_parser("extend", help="separability, PPT, and max-k per sample (JSON lines)")
    common(p, partition=True, samples=True, kcap=True)

    p = sub.add_parser("sweep", help="Monte Carlo sweep with aggregated summary (JSON)")
    common(p, partition=True, samples=True, bins=True, kcap=True)
    p.add_argument("--what", type=_observables, default=frozenset({"ppt"}),
                   help="comma-separated observables: spectrum,symplectic,ppt,separability,max_k,purity")
    p.add_argument("--log-samples", help="also write a per-sample JSON-lines log to this path")

    p = sub.add_parser("theory", help="theoretical curves and scalar tables")
    p.add_argument("--curve", required=True, choices=CURVES + TABLES)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--t", type=float, default=0.25, help="marginal fraction t (marginal curve only)")
    p.add_argument("--points", type=int, default=801, help="curve grid size (default 801)")
    p.add_argument("--sigma-min", type=float, help="table over a sigma range: lower end")
    p.add_argument("--sigma-max", type=float, help="table over a sigma range: upper end")
    p.add_argument("--sigma-steps", type=int, default=50, help="table rows over the range (default 50)")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def _partition(text: str) -> ModeBipartition:
    try:
        m, l = text.split(":")
        return ModeBipartition(int(m), int(l))
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"expected m:l with integers, got {text!r}") from exc


def _observables(text: str) -> frozenset:
    from .stats import OBSERVABLES

    names = frozenset(w.strip() for w in text.split(",") if w.strip())
    unknown = names - set(OBSERVABLES)
    if unknown:
        raise argparse.ArgumentTypeError(
            f"unknown observables {sorted(unknown)}; pick from {','.join(OBSERVABLES)}")
    return names


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _meta(args, argv, **extra) -> dict:
    meta = {"invocation": "rqcm " + " ".join(shlex.quote(a) for a in argv),
            "version": __version__}
    for key in ("modes", "sigma", "normalized", "samples"):
        if hasattr(args, key):
            meta[key if key != "modes" else "n"] = getattr(args, key)
    if getattr(args, "seed", None) is not None and hasattr(args, "stream"):
        meta["seed"] = f"{args.seed}:{args.stream}"
    if getattr(args, "partition", None) is not None:
        meta["partition"] = f"{args.partition.m}:{args.partition.l}"
    meta.update(extra)
    return meta


def _spec(args) -> GoeSpec:
    return GoeSpec(args.modes, args.sigma, args.normalized)


def _seed(args, offset: int = 0) -> RngSeed:
    return RngSeed(args.seed, args.stream + offset)


def _cmd_sample(args, argv):
    qcm = sample_rqcm(_spec(args), _seed(args))
    meta = _meta(args, argv, shift=qcm.shift, qcm_defect=qcm.qcm_defect)
    if args.format == "json":
        _emit(serialize.matrix_to_json(qcm.matrix, meta), args.out)
    else:
        _emit(serialize.matrix_to_csv(qcm.matrix, meta), args.out)


def _values_command(args, argv, compute, kind):
    pooled = []
    for i in range(args.samples):
        qcm = sample_rqcm(_spec(args), _seed(args, i))
        pooled.append(compute(qcm))
    values = np.concatenate([np.atleast_1d(v) for v in pooled])
    meta = _meta(args, argv)
    if getattr(args, "hist", False):
        hist = histogram(values, bins=args.bins)
        meta["kind"] = kind
        _emit(serialize.histogram_to_csv(hist, meta), args.out)
    elif args.format == "json":
        _emit(serialize.values_to_json(values, kind, meta), args.out)
    else:
        _emit(serialize.values_to_csv(values, kind, meta), args.out)


def _cmd_extend(args, argv):
    lines = []
    for i in range(args.samples):
        qcm = sample_rqcm(_spec(args), _seed(args, i))
        report = max_extendability(qcm, args.partition, k_cap=args.k_cap, tol=args.tol)
        lines.append(serialize.extend_report_line(report, {
            "seed": args.seed, "stream": args.stream + i, "n": args.modes,
            "partition": [args.partition.m, args.partition.l],
            "sigma": args.sigma, "normalized": args.normalized,
        }))
    _emit("\n".join(lines) + "\n", args.out)


def _cmd_sweep(args, argv):
    what = args.what
    cfg = SweepConfig(n=args.modes, sigma=args.sigma, samples=args.samples,
                      seed=_seed(args), partition=args.partition,
                      normalized=args.normalized, k_cap=args.k_cap,
                      bins=args.bins, tol=args.tol, what=what)
    summary = run_sweep(cfg)
    if args.log_samples and ("max_k" in what):
        lines = []
        for i in range(args.samples):
            qcm = sample_rqcm(cfg.goe_spec, cfg.seed.substream(i))
            report = max_extendability(qcm, cfg.partition, k_cap=cfg.k_cap, tol=cfg.tol)
            lines.append(serialize.extend_report_line(report, {
                "seed": args.seed, "stream": args.stream + i, "n": args.modes,
                "partition": [args.partition.m, args.partition.l], "sigma": args.sigma,
                "normalized": args.normalized,
            }))
        with open(args.log_samples, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    _emit(serialize.sweep_to_json(summary, _meta(args, argv)), args.out)


def _theory_table(args, argv):
    if args.sigma_min is not None and args.sigma_max is not None:
        sigmas = np.linspace(args.sigma_min, args.sigma_max, args.sigma_steps).tolist()
    else:
        sigmas = [args.sigma]
    cols: dict = {"sigma": sigmas}
    if args.curve == "edges":
        cols["R"] = [freeprob.edge_R(s) for s in sigmas]
        cols["L"] = [freeprob.edge_L(s) if s < 1 else None for s in sigmas]
        cols["sqrtF"] = [freeprob.edge_sqrtF(s) for s in sigmas]
    elif args.curve == "ld":
        cols["ld"] = [freeprob.purity_rate_LD(s) for s in sigmas]
    else:
        cols["energy"] = [freeprob.energy_per_mode(s) for s in sigmas]
    meta = {"invocation": "rqcm " + " ".join(shlex.quote(a) for a in argv),
            "version": __version__, "kind": args.curve}
    _emit(serialize.table_to_csv(cols, meta), args.out)


def _cmd_theory(args, argv):
    if args.curve in TABLES:
        _theory_table(args, argv)
        return
    if args.curve == "mu":
        curve = freeprob.mu_sigma_curve(args.sigma, points=args.points)
    elif args.curve == "eigen":
        curve = freeprob.eigenvalue_limit_curve(args.sigma, points=args.points)
    elif args.curve == "symplectic":
        curve = freeprob.symplectic_limit_curve(args.sigma, points=args.points)
    else:
        curve = freeprob.marginal_limit_curve(args.sigma, args.t, points=args.points)
    meta = {"invocation": "rqcm " + " ".join(shlex.quote(a) for a in argv),
            "version": __version__}
    if args.format == "json":
        _emit(serialize.curve_to_json(curve, meta), args.out)
    else:
        _emit(serialize.curve_to_csv(curve, meta), args.out)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "sample":
            _cmd_sample(args, argv)
        elif args.command == "spectrum":
            _values_command(args, argv, lambda q: spectrum(q).values, "ordinary")
        elif args.command == "symplectic":
            _values_command(args, argv, lambda q: symplectic_spectrum(q).values, "symplectic")
        elif args.command == "ppt":
            _values_command(args, argv, lambda q: ppt_defect(q, args.partition), "ppt_defect")
        elif args.command == "extend":
            _cmd_extend(args, argv)
        elif args.command == "sweep":
            _cmd_sweep(args, argv)
        elif args.command == "theory":
            _cmd_theory(args, argv)
    except (NotPSDError, NotPDError, freeprob.DomainError, freeprob.BranchError,
            ValueError) as exc:
        print(f"rqcm: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
