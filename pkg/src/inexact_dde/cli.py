"""Command line interface: ``solve``, ``converge``, ``propagate`` and ``envelope``."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import replace

from . import __version__
from .bounds import EnvelopeSpec, Regime, envelope, grid_error_envelope
from .core import build_grid
from .harness.config import ConfigError, parse_config
from .harness.experiment import run_convergence
from .harness.output import (CsvTable, convergence_csv, emit_csv, fit_csv, propagation_csv,
                             render_csv, summary_csv)
from .harness.plots import emit_all_plots
from .noise import GENERATOR_ID, NoiseSpec
from .rhs import make_test_problem
from .solver import SolveRequest, euler_solve

log = logging.getLogger("inexact_dde")


def _sweep_parent():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--profile", choices=("desk", "paper"), default="paper")
    p.add_argument("--seed", type=int, help="master seed (overrides noise.seed)")
    p.add_argument("--out", help="output directory (overrides output.dir)")
    p.add_argument("--plots", choices=("on", "off"), default="on")
    p.add_argument("--envelope", choices=("on", "off"), default="on", help="overlay fitted bounds")
    p.add_argument("--workers", type=int, default=1)
    return p


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="inexact-dde", description=__doc__)
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="single Euler trajectory as CSV")
    s.add_argument("--problem", default="f1")
    s.add_argument("--gamma", type=float, default=1.0)
    s.add_argument("--tau", type=float, default=20.0)
    s.add_argument("--n", type=int, default=9)
    s.add_argument("--N", type=int, default=100)
    s.add_argument("--delta", type=float, default=0.0)
    s.add_argument("--mode", default="zero", choices=("zero", "uniform", "worst"))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trial", type=int, default=0)
    s.add_argument("--eta", type=float, nargs="+", help="history value (lip benchmark only)")
    s.add_argument("--output", "-o", default="-", help="CSV path, '-' for stdout")

    parent = _sweep_parent()
    sub.add_parser("converge", parents=[parent], help="step-size convergence sweep")
    sub.add_parser("propagate", parents=[parent], help="error propagation across delay intervals")

    e = sub.add_parser("envelope", help="evaluate bound shapes")
    e.add_argument("--kind", choices=("bound", "grid"), default="bound")
    e.add_argument("--regime", choices=[r.value for r in Regime], default="lipschitz")
    e.add_argument("--alpha", type=float, default=1.0)
    e.add_argument("--beta1", type=float, default=1.0)
    e.add_argument("--beta2", type=float, default=1.0)
    e.add_argument("--gamma", type=float, default=1.0)
    e.add_argument("--j", type=int, default=0)
    e.add_argument("--h", type=float, nargs="+", required=True)
    e.add_argument("--delta", type=float, default=0.0)
    return ap


def _cmd_solve(args) -> int:
    problem = make_test_problem(args.problem, args.gamma, eta=args.eta)
    grid = build_grid(args.tau, args.n, args.N)
    spec = NoiseSpec(args.delta, args.mode, args.seed)
    traj = euler_solve(SolveRequest(problem, grid, spec, args.trial))
    cols = ["j", "k", "t"] + [f"y{i}" for i in range(traj.d)]
    rows = [(j, k, grid.node_time(j, k), *traj.node(j, k))
            for j in range(-1, grid.n + 1) for k in range(grid.N + 1)]
    meta = {"artifact": f"inexact_dde {__version__}", "generator": GENERATOR_ID,
            "problem": problem.key, "gamma": repr(problem.gamma), "tau": repr(grid.tau), "n": grid.n,
            "N": grid.N, "h": repr(grid.h), "delta": repr(spec.delta), "mode": spec.mode.value,
            "seed": spec.seed, "trial": args.trial, "eta": " ".join(repr(float(x)) for x in problem.eta)}
    table = CsvTable("trajectory", cols, rows, meta, key_len=2)
    if args.output == "-":
        sys.stdout.write(render_csv(table))
    else:
        emit_csv(table, args.output)
    return 0


def _load_config(args):
    cfg = parse_config(args.config, args.profile)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.out is not None:
        cfg = replace(cfg, out_dir=args.out)
    return cfg


def _cmd_sweep(args) -> int:
    cfg = _load_config(args)
    if args.workers < 1:
        raise ConfigError("workers", "must be positive")
    result = run_convergence(cfg, workers=args.workers)
    out = cfg.out_dir
    os.makedirs(out, exist_ok=True)
    if args.command == "converge":
        written = [emit_csv(convergence_csv(result), os.path.join(out, "convergence.csv")),
                   emit_csv(summary_csv(result), os.path.join(out, "convergence_summary.csv")),
                   emit_csv(fit_csv(result), os.path.join(out, "convergence_fit.csv"))]
        kind = "convergence"
    else:
        written = [emit_csv(propagation_csv(result), os.path.join(out, "propagation.csv"))]
        kind = "cumulative"
    if args.plots == "on":
        written += emit_all_plots(result, out, kind, overlay=args.envelope == "on")
    # wall-clock lives outside the CSVs so that those stay byte-reproducible
    with open(os.path.join(out, f"timings_{args.command}.json"), "w", encoding="utf-8") as fh:
        json.dump({"seconds_per_cell": result.timings, "failed_trajectories": result.failed_count}, fh, indent=1)
    for path in written:
        print(path)
    return 0


def _cmd_envelope(args) -> int:
    for h in args.h:
        if args.kind == "grid":
            val = grid_error_envelope(args.gamma, args.j, h, args.delta)
        else:
            spec = EnvelopeSpec(Regime(args.regime), args.alpha, args.beta1, args.beta2, args.gamma, args.j)
            val = envelope(spec, h, args.delta)
        print(f"{h:.17g},{args.delta:.17g},{val:.17g}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handlers = {"solve": _cmd_solve, "converge": _cmd_sweep, "propagate": _cmd_sweep,
                "envelope": _cmd_envelope}
    try:
        return handlers[args.command](args)
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
