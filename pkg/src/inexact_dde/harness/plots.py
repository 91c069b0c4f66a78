"""Convergence and cumulative-error figures built from a :class:`ConvergenceTable`."""
from __future__ import annotations

import os

from .experiment import ConvergenceTable
from .svgplot import PALETTE, Plot, Series, render

KINDS = ("convergence", "cumulative")


def _combos(result: ConvergenceTable):
    return list(dict.fromkeys((r.problem, r.gamma) for r in result.rows))


def plot_filename(problem, gamma: float, kind: str) -> str:
    stem = f"{problem.value}_{gamma:g}"
    return f"{stem}.svg" if kind == "convergence" else f"{stem}_cumulative.svg"


def build_plot(result: ConvergenceTable, kind: str, problem=None, gamma=None, overlay: bool = False) -> Plot:
    if kind not in KINDS:
        raise ValueError(f"unknown plot kind {kind!r}")
    combos = _combos(result)
    if not combos:
        raise ValueError("cannot plot an empty table")
    if problem is None:
        if len(combos) > 1:
            raise ValueError("table holds several problems; pass problem and gamma")
        problem, gamma = combos[0]
    summary = [s for s in result.summary() if s.problem is problem and s.gamma == gamma and s.n_ok]
    deltas = sorted({s.delta for s in summary})
    fits = {f.delta: f for f in result.fits() if f.problem is problem and f.gamma == gamma}
    n = result.config.n
    if kind == "convergence":
        plot = Plot(f"{problem.value}, gamma = {gamma:g}: error vs step size", "h",
                    "mean sup error over [0, (n+1) tau]", logx=True, logy=True)
    else:
        N = max(s.N for s in summary) if summary else 0
        plot = Plot(f"{problem.value}, gamma = {gamma:g}: cumulative sup error (N = {N})",
                    "delay interval j", "mean E_cum_j", logy=True)
    for i, d in enumerate(deltas):
        color = PALETTE[i % len(PALETTE)]
        rows = sorted((s for s in summary if s.delta == d), key=lambda s: s.h)
        if kind == "convergence":
            hs = [s.h for s in rows]
            plot.series.append(Series(f"delta = {d:g}", hs, [s.mean for s in rows], color))
            if overlay and d in fits:
                env = result.envelope_curve(problem, gamma, d, fits[d].envelope_C, hs)
                plot.series.append(Series(f"bound, delta = {d:g}", hs, env, color, dashed=True, in_legend=False))
        else:
            s = next(s for s in rows if s.N == N)
            plot.series.append(Series(f"delta = {d:g}", list(range(n + 1)), list(s.E_cum_mean), color))
    if overlay and kind == "convergence":
        plot.notes.append("dashed: fitted constant times the theoretical bound shape")
    return plot


def emit_plot(result: ConvergenceTable, path, kind: str, problem=None, gamma=None, overlay: bool = False) -> str:
    svg = render(build_plot(result, kind, problem, gamma, overlay))
    os.makedirs(os.path.dirname(os.fspath(path)) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(svg)
    return os.fspath(path)


def emit_all_plots(result: ConvergenceTable, out_dir, kind: str, overlay: bool = True) -> list[str]:
    return [emit_plot(result, os.path.join(out_dir, plot_filename(p, g, kind)), kind, p, g, overlay)
            for p, g in _combos(result)]
