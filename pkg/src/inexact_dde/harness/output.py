"""CSV emission for sweep results."""
from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .. import __version__
from ..noise import GENERATOR_ID
from .experiment import ConvergenceTable


@dataclass
class CsvTable:
    name: str
    columns: list[str]
    rows: list[tuple]
    metadata: dict = field(default_factory=dict)
    key_len: int = 1


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        return f"{v:.17g}"
    return str(v)


def _sort_key(row, key_len):
    return tuple((0, x) if not isinstance(x, str) else (1, x) for x in row[:key_len])


def render_csv(table: CsvTable) -> str:
    if not table.rows:
        raise ValueError(f"refusing to write empty table {table.name!r}")
    buf = io.StringIO()
    buf.write(f"# table: {table.name}\n")
    for k, v in table.metadata.items():
        buf.write(f"# {k}: {v}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in sorted(table.rows, key=lambda r: _sort_key(r, table.key_len)):
        w.writerow([format_value(v) for v in row])
    return buf.getvalue()


def emit_csv(table: CsvTable, path) -> str:
    text = render_csv(table)
    os.makedirs(os.path.dirname(os.fspath(path)) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return os.fspath(path)


def _metadata(result: ConvergenceTable) -> dict:
    meta = {"artifact": f"inexact_dde {__version__}", "generator": GENERATOR_ID}
    meta.update({f"config.{k}": v for k, v in result.config.echo().items()})
    meta["failed_trajectories"] = str(result.failed_count)
    return meta


def _layer_cols(prefix, n):
    return [f"{prefix}_{j}" for j in range(n + 1)]


def convergence_csv(result: ConvergenceTable) -> CsvTable:
    n, mode = result.config.n, result.config.mode.value
    cols = (["problem", "gamma", "delta", "N", "h", "trial", "mode", "status", "global_error"]
            + _layer_cols("E_loc", n) + _layer_cols("E_cum", n) + ["failure"])
    rows = []
    for r in result.rows:
        if r.ok:
            vals = [r.profile.global_error, *r.profile.E_loc, *r.profile.E_cum]
        else:
            vals = [None] * (2 * n + 3)
        rows.append((r.problem.value, r.gamma, r.delta, r.N, r.h, r.trial, mode,
                     "ok" if r.ok else "failed", *vals, r.failure or None))
    return CsvTable("convergence", cols, rows, _metadata(result), key_len=6)


def summary_csv(result: ConvergenceTable) -> CsvTable:
    n = result.config.n
    cols = (["problem", "gamma", "delta", "N", "h", "trials_ok", "trials_failed",
             "mean_global", "max_global", "std_global"]
            + _layer_cols("mean_E_cum", n) + _layer_cols("max_E_cum", n) + _layer_cols("std_E_cum", n))
    rows = [(s.problem.value, s.gamma, s.delta, s.N, s.h, s.n_ok, s.n_failed, s.mean, s.max, s.std,
             *s.E_cum_mean, *s.E_cum_max, *s.E_cum_std) for s in result.summary()]
    return CsvTable("convergence_summary", cols, rows, _metadata(result), key_len=4)


def fit_csv(result: ConvergenceTable) -> CsvTable:
    cfg = result.config
    cols = ["problem", "gamma", "delta", "order_slope", "plateau", "plateau_level", "plateau_slope",
            "tail_std", "envelope_regime", "envelope_C"]
    rows = [(f.problem.value, f.gamma, f.delta, f.order_slope, f.plateau, f.plateau_level,
             f.plateau_slope, f.tail_std, f.regime.value, f.envelope_C) for f in result.fits()]
    meta = _metadata(result)
    meta["order_window"] = str(cfg.order_window)
    meta["plateau_tail"] = str(cfg.plateau_tail)
    meta["plateau_slope_tol"] = repr(cfg.plateau_slope_tol)
    return CsvTable("convergence_fit", cols, rows, meta, key_len=3)


def propagation_csv(result: ConvergenceTable) -> CsvTable:
    n = result.config.n
    cols = ["problem", "gamma", "delta", "N", "h", "trials_ok"] + _layer_cols("E_cum", n)
    rows = [(s.problem.value, s.gamma, s.delta, s.N, s.h, s.n_ok, *s.E_cum_mean)
            for s in result.summary() if s.n_ok]
    meta = _metadata(result)
    meta["values"] = "mean over successful trials of the cumulative sup error E_cum_j"
    return CsvTable("propagation", cols, rows, meta, key_len=4)
