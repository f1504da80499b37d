"""Command-line driver.

    ltaqfi single --config run.cfg
    ltaqfi sweep --config sweep.cfg --jobs 4 --out sweep.csv
    ltaqfi figure 3b --out fig3b.csv
    ltaqfi error-scaling --N 100 150 200 250 300 350 400
    ltaqfi semiclassical --config sweep.cfg
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from contextlib import contextmanager

import numpy as np

from . import figures
from .config import ConfigError, RunConfig, load_config
from .dynamics import TimeGrid
from .experiments import COLUMNS, StageError, run_error_scaling, run_single, run_sweep
from .numerics import ConvergenceError

SCHEMA_VERSION = 1
EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3

log = logging.getLogger("ltaqfi")


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "nan" if math.isnan(value) else repr(float(value))
    return str(value)


@contextmanager
def _open_out(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def write_table(rows, columns, path=None, kind="sweep") -> None:
    with _open_out(path) as fh:
        fh.write(f"# schema: ltaqfi.{kind} v{SCHEMA_VERSION}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(fmt(row[c]) for c in columns) + "\n")


def write_records(records, path=None, timing=False) -> None:
    columns = COLUMNS + (["wall_time"] if timing else [])
    write_table([r.row() for r in records], columns, path)
    with_pbar = [r for r in records if r.pbar is not None]
    if with_pbar and path not in (None, "-"):
        rows = []
        for r in with_pbar:
            for i, p in enumerate(r.pbar):
                rows.append({"value": r.value, "index": i, "pbar": p})
        write_table(rows, ["value", "index", "pbar"], str(path) + ".pbar.csv", kind="pbar")


def _grid_overrides(args, cfg: RunConfig, validate: bool = True) -> RunConfig:
    kw = {}
    if getattr(args, "steps", None) is not None:
        kw["steps"] = args.steps
    if getattr(args, "dt", None) is not None:
        kw["dt"] = args.dt
    if getattr(args, "estimator", None) is not None:
        kw["estimator"] = args.estimator
    if getattr(args, "points", None) is not None:
        kw["sweep_points"] = args.points
    if not kw:
        return cfg
    cfg = cfg.with_(**kw)
    return cfg.validate() if validate else cfg


def _config(args) -> RunConfig:
    if not args.config:
        raise ConfigError("--config is required")
    return _grid_overrides(args, load_config(args.config))


def cmd_single(args) -> int:
    cfg = _config(args)
    if cfg.sweep is not None:
        cfg = cfg.with_(sweep_points=1)
        rec = run_single(cfg, cfg.sweep_values()[0])
    else:
        rec = run_single(cfg)
    write_records([rec], args.out or cfg.out, args.timing)
    return EXIT_OK


def _finish(records) -> int:
    failed = [r for r in records if r.status.startswith("error")]
    for r in failed:
        log.error("row %s = %s failed: %s", r.parameter, r.value, r.status)
    return EXIT_NUMERICAL if failed else EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _config(args)
    if cfg.sweep is None:
        raise ConfigError("sweep needs a sweep axis in the config")
    records = run_sweep(cfg, jobs=args.jobs)
    write_records(records, args.out or cfg.out, args.timing)
    return _finish(records)


def cmd_semiclassical(args) -> int:
    cfg = _config(args)
    records = run_sweep(cfg, jobs=1, quantum=False)
    cols = ["model", "parameter", "value", "control", "m", "q_over_qc", "phase",
            "fq_semiclassical_scaled", "fq_semiclassical_x0_scaled", "status"]
    write_table([r.row() for r in records], cols, args.out or cfg.out, kind="semiclassical")
    return _finish(records)


def cmd_error_scaling(args) -> int:
    Ns = args.N
    if len(Ns) < 3:
        raise ConfigError("error-scaling needs at least three N values")
    grid = TimeGrid(args.dt if args.dt is not None else 1.0, args.steps or 20_000)
    result = run_error_scaling(sorted(Ns), chi=args.chi, z0=args.z0, grid=grid)
    _emit_scaling(result, args.out)
    return EXIT_OK


def _emit_scaling(result, out) -> None:
    rows = [
        {"N": n, "eps_ave": e, "excluded": x, "residual": r}
        for n, e, x, r in zip(result.N, result.eps_ave, result.excluded, result.residuals)
    ]
    write_table(rows, ["N", "eps_ave", "excluded", "residual"], out, kind="error-scaling")
    summary = {
        "slope": result.slope,
        "intercept": result.intercept,
        "slope_without_largest_N": result.slope_without_largest,
        "slope_shift": result.slope_without_largest - result.slope,
        "diagonal_mean_largest_N": result.diagonal_mean,
        "offdiagonal_mean_largest_N": result.offdiagonal_mean,
    }
    print(json.dumps(summary, indent=2), file=sys.stderr if out in (None, "-") else sys.stdout)
    if out not in (None, "-") and result.matrix is not None:
        labels = result.labels
        mrows = [
            {"n": labels[i], "nprime": labels[j], "eps": result.matrix[i, j]}
            for i in range(len(labels))
            for j in range(len(labels))
        ]
        write_table(mrows, ["n", "nprime", "eps"], str(out) + ".matrix.csv", kind="eps-matrix")


def cmd_figure(args) -> int:
    which = args.which
    if which in ("1", "2"):
        base = figures.FIG1 if which == "1" else figures.FIG2
        # the panel fills in q or eta, so validation happens per panel
        base = _grid_overrides(args, base, validate=False)
        rows = figures.figure_distributions(which, base)
        cols = ["panel", "ratio_to_critical", "phase", "label", "rho0", "x", "pbar",
                "semiclassical", "potential"]
        write_table(rows, cols, args.out, kind=f"figure{which}")
        return EXIT_OK
    if which == "3a":
        records = figures.figure_3a(_grid_overrides(args, figures.FIG3A), jobs=args.jobs)
    elif which == "3b":
        records = figures.figure_3b(
            _grid_overrides(args, figures.FIG3B_DRIVEN),
            _grid_overrides(args, figures.FIG3B_LMG),
            jobs=args.jobs,
        )
    else:
        grid = TimeGrid(args.dt or figures.FIG4_GRID.dt, args.steps or figures.FIG4_GRID.steps)
        _emit_scaling(figures.figure_4(grid=grid), args.out)
        return EXIT_OK
    write_records(records, args.out, args.timing)
    return _finish(records)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ltaqfi", description=__doc__.splitlines()[0] or None)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config=True):
        if config:
            sp.add_argument("--config", metavar="PATH")
        sp.add_argument("--out", metavar="PATH")
        sp.add_argument("--jobs", type=int, default=1, metavar="K")
        sp.add_argument("--estimator", choices=("time", "diagonal"))
        sp.add_argument("--steps", type=int)
        sp.add_argument("--dt", type=float)
        sp.add_argument("--timing", action="store_true", help="add a wall_time column")

    sp = sub.add_parser("single", help="one quantum run plus its semiclassical prediction")
    common(sp)
    sp.set_defaults(func=cmd_single)

    sp = sub.add_parser("sweep", help="run every point of the config's sweep axis")
    common(sp)
    sp.add_argument("--points", type=int)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("semiclassical", help="analytic curve only, no quantum run")
    common(sp)
    sp.add_argument("--points", type=int)
    sp.set_defaults(func=cmd_semiclassical)

    sp = sub.add_parser("figure", help="data for one of the standard figures")
    sp.add_argument("which", choices=("1", "2", "3a", "3b", "4"))
    common(sp, config=False)
    sp.add_argument("--points", type=int)
    sp.set_defaults(func=cmd_figure)

    sp = sub.add_parser("error-scaling", help="factorization error vs N for the LMG model")
    common(sp, config=False)
    sp.add_argument("--N", type=int, nargs="+", default=list(figures.FIG4_N))
    sp.add_argument("--chi", type=float, default=5.0)
    sp.add_argument("--z0", type=float, default=0.6)
    sp.set_defaults(func=cmd_error_scaling)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except StageError as exc:
        log.error("stage failed: %s", exc)
        return EXIT_NUMERICAL if isinstance(exc.cause, ArithmeticError) else EXIT_CONFIG
    except (ConvergenceError, ArithmeticError) as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL
    except ValueError as exc:
        log.error("invalid input: %s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
