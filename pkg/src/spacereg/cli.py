"""Command-line interface.

Subcommands: ``fit`` (smooth one CSV sample), ``cv`` (inspect the
cross-validation scores), ``simulate`` (run a seeded replication study),
``meanfn`` / ``covfn`` (mean curve and covariance surface of a trajectory
batch).  Every command echoes its fully resolved configuration next to its
outputs, and every seeded command is byte-reproducible.

Exit codes: 0 success, 2 user/configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bandwidth import CvPlan, cross_validate, default_h_grid, default_span_grid, log_grid
from .design import prepare_sample
from .estimators import fit_loess1, fit_nw, fit_ulc, fit_ull
from .exceptions import (
    CsvFormatError,
    DegenerateGridError,
    InvalidArgumentError,
    SpaceregError,
)
from .functional import covariance_surface, mean_function
from .io import read_batch_csv, read_sample_csv
from .kernels import KERNEL_IDS, get_kernel
from .simharness import BUILTIN_SCENARIOS, Scenario, builtin_scenario, run_study

USER_ERRORS = (InvalidArgumentError, CsvFormatError, DegenerateGridError, FileNotFoundError)


def _parse_domain(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("domain must be 'a,b'")
    return (float(parts[0]), float(parts[1]))


def _parse_grid(text):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must be 'lo,hi,count'")
    return (float(parts[0]), float(parts[1]), int(parts[2]))


def _parse_list(text):
    return tuple(s.strip() for s in text.split(",") if s.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spacereg",
        description="Spacing-weighted kernel regression and its simulation harness.",
    )
    parser.add_argument("--version", action="version", version=f"spacereg {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--kernel", choices=KERNEL_IDS, default=None,
                       help="kernel density (default tricube)")
        p.add_argument("--seed", type=int, default=None, help="base seed (default 0)")
        p.add_argument("--out", default=None, help="output directory (default '.')")
        p.add_argument("--config", default=None,
                       help="JSON config file; explicit flags override its fields")

    p_fit = sub.add_parser("fit", help="fit one estimator to a z,x CSV sample")
    p_fit.add_argument("--input", required=True, help="CSV file with columns z,x")
    p_fit.add_argument("--domain", type=_parse_domain, default=None,
                       help="domain 'a,b' (default: design range)")
    p_fit.add_argument("--estimator", choices=("ull", "ulc", "nw", "loess1"), default=None)
    p_fit.add_argument("--h", default=None,
                       help="bandwidth value, or 'cv' to cross-validate (default cv)")
    p_fit.add_argument("--span", default=None,
                       help="loess span value, or 'cv' (loess1 only)")
    p_fit.add_argument("--spacing", choices=("plain", "voronoi"), default=None,
                       help="spacing weights for ull/ulc (default voronoi)")
    p_fit.add_argument("--indicator", action="store_true", default=None,
                       help="gate the ull fit on the max-spacing threshold")
    p_fit.add_argument("--no-dedup", action="store_true", default=None,
                       help="keep duplicate design points (nw/loess1 only)")
    p_fit.add_argument("--grid", type=_parse_grid, default=None,
                       help="CV candidate grid 'lo,hi,count' (absolute values)")
    p_fit.add_argument("--folds", type=int, default=None, help="CV folds (default 10)")
    p_fit.add_argument("--eval-points", type=int, default=None,
                       help="size of the uniform evaluation grid (default 1001)")
    add_common(p_fit)

    p_cv = sub.add_parser("cv", help="cross-validate the bandwidth or span")
    p_cv.add_argument("--input", required=True)
    p_cv.add_argument("--domain", type=_parse_domain, default=None)
    p_cv.add_argument("--estimator", choices=("ull", "ulc", "nw", "loess1"), default=None)
    p_cv.add_argument("--spacing", choices=("plain", "voronoi"), default=None)
    p_cv.add_argument("--grid", type=_parse_grid, default=None)
    p_cv.add_argument("--folds", type=int, default=None)
    add_common(p_cv)

    p_sim = sub.add_parser("simulate", help="run a seeded replication study")
    p_sim.add_argument("--scenario", required=True,
                       help=f"built-in scenario ({', '.join(sorted(BUILTIN_SCENARIOS))}) "
                            "or a scenario JSON file")
    p_sim.add_argument("--estimators", type=_parse_list, default=None,
                       help="comma list of ull,ulc,nw,loess1 (default ull,ulc,nw,loess1)")
    p_sim.add_argument("--replications", type=int, default=None, help="default 100")
    p_sim.add_argument("--metrics", type=_parse_list, default=None,
                       help="comma list of max_error,mse (default both)")
    p_sim.add_argument("--spacing", choices=("plain", "voronoi"), default=None)
    p_sim.add_argument("--folds", type=int, default=None)
    p_sim.add_argument("--threads", type=int, default=None,
                       help="worker threads over replications (default 1)")
    add_common(p_sim)

    p_mean = sub.add_parser("meanfn", help="mean curve of a copy_id,z,x batch")
    p_mean.add_argument("--input", required=True)
    p_mean.add_argument("--domain", type=_parse_domain, default=None)
    p_mean.add_argument("--h", type=float, required=True)
    p_mean.add_argument("--estimator", choices=("ull", "ulc"), default=None)
    p_mean.add_argument("--spacing", choices=("plain", "voronoi"), default=None)
    p_mean.add_argument("--eval-points", type=int, default=None)
    add_common(p_mean)

    p_cov = sub.add_parser("covfn", help="covariance surface of a copy_id,z,x batch")
    p_cov.add_argument("--input", required=True)
    p_cov.add_argument("--domain", type=_parse_domain, default=None)
    p_cov.add_argument("--h", type=float, required=True)
    p_cov.add_argument("--estimator", choices=("ull", "ulc"), default=None)
    p_cov.add_argument("--spacing", choices=("plain", "voronoi"), default=None)
    p_cov.add_argument("--eval-points", type=int, default=None)
    add_common(p_cov)

    return parser


_DEFAULTS = {
    "kernel": "tricube",
    "seed": 0,
    "out": ".",
    "estimator": "ull",
    "h": "cv",
    "span": None,
    "spacing": "voronoi",
    "indicator": False,
    "no_dedup": False,
    "grid": None,
    "folds": 10,
    "eval_points": 1001,
    "estimators": ("ull", "ulc", "nw", "loess1"),
    "replications": 100,
    "metrics": ("max_error", "mse"),
    "threads": 1,
    "domain": None,
}


def _resolve(args: argparse.Namespace) -> dict:
    """Merge CLI flags over the optional JSON config over the defaults."""
    cfg = {}
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise InvalidArgumentError("config file must hold a JSON object")
        cfg.update({k.replace("-", "_"): v for k, v in loaded.items()})
    resolved = {}
    for key, value in vars(args).items():
        if key == "config":
            continue
        if value is None and key in cfg:
            value = cfg[key]
        if value is None and key in _DEFAULTS:
            value = _DEFAULTS[key]
        resolved[key] = value
    if isinstance(resolved.get("domain"), (list, tuple)):
        resolved["domain"] = tuple(float(v) for v in resolved["domain"])
    for key in ("estimators", "metrics"):
        if isinstance(resolved.get(key), (list, tuple)):
            resolved[key] = tuple(resolved[key])
        elif isinstance(resolved.get(key), str):
            resolved[key] = _parse_list(resolved[key])
    return resolved


def _echo_config(cfg: dict, outdir: Path) -> None:
    payload = {k: (list(v) if isinstance(v, tuple) else v) for k, v in sorted(cfg.items())}
    (outdir / "config.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _outdir(cfg: dict) -> Path:
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _candidates(cfg: dict, sample, kind: str):
    if cfg.get("grid") is not None:
        lo, hi, count = cfg["grid"]
        return log_grid(lo, hi, count)
    return default_span_grid() if kind == "loess1" else default_h_grid(sample)


def _load_sample(cfg: dict):
    raw = read_sample_csv(cfg["input"], domain=cfg.get("domain"))
    dedup = not cfg.get("no_dedup", False)
    if not dedup and cfg["estimator"] in ("ull", "ulc"):
        raise InvalidArgumentError("--no-dedup applies only to nw/loess1")
    return prepare_sample(raw, dedup=dedup)


def _cmd_fit(cfg: dict) -> int:
    outdir = _outdir(cfg)
    sample = _load_sample(cfg)
    kernel = get_kernel(cfg["kernel"])
    kind = cfg["estimator"]
    smooth = cfg["span"] if (kind == "loess1" and cfg["span"] is not None) else cfg["h"]
    if isinstance(smooth, str) and smooth != "cv":
        smooth = float(smooth)
    if smooth == "cv":
        plan = CvPlan(grid=_candidates(cfg, sample, kind), folds=cfg["folds"])
        smooth, _ = cross_validate(sample, kernel, kind, plan, seed=cfg["seed"],
                                   spacing=cfg["spacing"])
        chosen = "cross-validated"
    else:
        smooth = float(smooth)
        chosen = "fixed"
    a, b = sample.domain
    grid = np.linspace(a, b, cfg["eval_points"])
    if kind == "ull":
        curve = fit_ull(sample, kernel, smooth, grid, spacing=cfg["spacing"],
                        indicator=cfg["indicator"])
    elif kind == "ulc":
        curve = fit_ulc(sample, kernel, smooth, grid, spacing=cfg["spacing"])
    elif kind == "nw":
        curve = fit_nw(sample, kernel, smooth, grid)
    else:
        curve = fit_loess1(sample, kernel, grid, span=smooth)
    curve.to_csv(outdir / "curve.csv")
    _echo_config(cfg, outdir)
    label = "span" if kind == "loess1" else "h"
    print(f"{label} = {smooth!r} ({chosen}); {curve.n_invalid} of {grid.size} grid points invalid")
    return 0


def _cmd_cv(cfg: dict) -> int:
    outdir = _outdir(cfg)
    sample = _load_sample(cfg)
    kernel = get_kernel(cfg["kernel"])
    kind = cfg["estimator"]
    grid = _candidates(cfg, sample, kind)
    plan = CvPlan(grid=grid, folds=cfg["folds"])
    best, scores = cross_validate(sample, kernel, kind, plan, seed=cfg["seed"],
                                  spacing=cfg["spacing"])
    with open(outdir / "cv_scores.csv", "w", encoding="utf-8") as fh:
        fh.write("candidate,cv_mse\n")
        for cand, score in zip(grid, scores):
            fh.write(f"{cand!r},{score!r}\n")
    _echo_config(cfg, outdir)
    print(f"best = {best!r}")
    return 0


def _cmd_simulate(cfg: dict) -> int:
    outdir = _outdir(cfg)
    name = cfg["scenario"]
    if name in BUILTIN_SCENARIOS:
        scenario = builtin_scenario(name)
    elif Path(name).exists():
        scenario = Scenario.from_json(name)
    else:
        raise InvalidArgumentError(f"scenario {name!r} is neither built-in nor a file")
    if cfg["replications"] < 1:
        raise InvalidArgumentError("need at least one replication")
    report = run_study(
        scenario,
        cfg["estimators"],
        cfg["replications"],
        cfg["seed"],
        kernel=cfg["kernel"],
        folds=cfg["folds"],
        metrics=cfg["metrics"],
        spacing=cfg["spacing"],
        threads=cfg["threads"],
    )
    report.to_csv(outdir / "replications.csv")
    (outdir / "summary.json").write_text(report.summary_json() + "\n", encoding="utf-8")
    _echo_config(cfg, outdir)
    for metric, per_est in report.summary().items():
        for est, s in per_est.items():
            print(f"{metric} {est}: median={s['median']:.6g} "
                  f"(q1={s['q1']:.6g}, q3={s['q3']:.6g})")
    return 0


def _load_batch(cfg: dict):
    return read_batch_csv(cfg["input"], domain=cfg.get("domain"))


def _cmd_meanfn(cfg: dict) -> int:
    outdir = _outdir(cfg)
    batch = _load_batch(cfg)
    kernel = get_kernel(cfg["kernel"])
    eval_points = cfg["eval_points"] if cfg["eval_points"] is not None else 201
    grid = np.linspace(batch.domain[0], batch.domain[1], eval_points)
    curve = mean_function(batch, kernel, cfg["h"], grid,
                          estimator_kind=cfg["estimator"], spacing=cfg["spacing"])
    with open(outdir / "mean.csv", "w", encoding="utf-8") as fh:
        fh.write("t,value,count\n")
        for t, v, c in zip(curve.grid, curve.values, curve.counts):
            fh.write(f"{t!r},{v!r},{int(c)}\n")
    _echo_config(cfg, outdir)
    print(f"averaged {batch.n_copies} copies at {grid.size} points")
    return 0


def _cmd_covfn(cfg: dict) -> int:
    outdir = _outdir(cfg)
    batch = _load_batch(cfg)
    kernel = get_kernel(cfg["kernel"])
    eval_points = cfg["eval_points"] if cfg["eval_points"] is not None else 101
    grid = np.linspace(batch.domain[0], batch.domain[1], eval_points)
    cov = covariance_surface(batch, kernel, cfg["h"], grid,
                             estimator_kind=cfg["estimator"], spacing=cfg["spacing"])
    curve = mean_function(batch, kernel, cfg["h"], grid,
                          estimator_kind=cfg["estimator"], spacing=cfg["spacing"])
    with open(outdir / "covariance.csv", "w", encoding="utf-8") as fh:
        fh.write("t1,t2,value\n")
        for i, t1 in enumerate(grid):
            for j, t2 in enumerate(grid):
                fh.write(f"{t1!r},{t2!r},{cov[i, j]!r}\n")
    with open(outdir / "mean.csv", "w", encoding="utf-8") as fh:
        fh.write("t,value,count\n")
        for t, v, c in zip(curve.grid, curve.values, curve.counts):
            fh.write(f"{t!r},{v!r},{int(c)}\n")
    _echo_config(cfg, outdir)
    print(f"covariance on a {grid.size} x {grid.size} grid")
    return 0


_COMMANDS = {
    "fit": _cmd_fit,
    "cv": _cmd_cv,
    "simulate": _cmd_simulate,
    "meanfn": _cmd_meanfn,
    "covfn": _cmd_covfn,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args)
        return _COMMANDS[args.command](cfg)
    except USER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SpaceregError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
