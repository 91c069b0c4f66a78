"""Minimal deterministic SVG line plots (no plotting library, no timestamps)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")

WIDTH, HEIGHT = 680, 440
LEFT, RIGHT, TOP, BOTTOM = 80, 180, 40, 60


@dataclass
class Series:
    label: str
    xs: list
    ys: list
    color: str = "#000000"
    dashed: bool = False
    in_legend: bool = True


@dataclass
class Plot:
    title: str
    xlabel: str
    ylabel: str
    logx: bool = False
    logy: bool = False
    series: list[Series] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


def _f(x: float) -> str:
    return f"{x:.2f}"


def _usable(plot: Plot, s: Series):
    pts = []
    for x, y in zip(s.xs, s.ys):
        if x is None or y is None or not (math.isfinite(x) and math.isfinite(y)):
            continue
        if (plot.logx and x <= 0) or (plot.logy and y <= 0):
            continue
        pts.append((float(x), float(y)))
    return pts


def _ticks(lo: float, hi: float, log: bool):
    if log:
        a, b = math.floor(math.log10(lo)), math.ceil(math.log10(hi))
        if a == b:
            b += 1
        return 10.0 ** a, 10.0 ** b, [(10.0 ** e, f"1e{e}") for e in range(a, b + 1)]
    if lo == hi:
        lo, hi = lo - 1, hi + 1
    span = hi - lo
    step = 10 ** math.floor(math.log10(span / 5))
    for m in (1, 2, 5, 10):
        if span / (step * m) <= 8:
            step *= m
            break
    start = math.floor(lo / step) * step
    stop = math.ceil(hi / step) * step
    ticks, v = [], start
    while v <= stop + step / 2:
        ticks.append((v, f"{v:g}"))
        v += step
    return start, stop, ticks


def render(plot: Plot) -> str:
    kept, notes = [], list(plot.notes)
    for s in plot.series:
        pts = _usable(plot, s)
        if not pts:
            notes.append(f"series '{s.label}' dropped: no positive finite values")
            continue
        if len(pts) < len(s.xs):
            notes.append(f"series '{s.label}': {len(s.xs) - len(pts)} non-plottable points omitted")
        kept.append((s, pts))

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">']
    out.append(f"<title>{escape(plot.title)}</title>")
    if notes:
        out.append(f"<desc>{escape('; '.join(notes))}</desc>")
    out.append(f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>')
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM
    out.append(f'<text x="{_f(LEFT + pw / 2)}" y="24" text-anchor="middle" font-size="14">{escape(plot.title)}</text>')
    out.append(f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')

    if kept:
        xs = [p[0] for _, pts in kept for p in pts]
        ys = [p[1] for _, pts in kept for p in pts]
        x0, x1, xt = _ticks(min(xs), max(xs), plot.logx)
        y0, y1, yt = _ticks(min(ys), max(ys), plot.logy)
        tx = (lambda v: math.log10(v)) if plot.logx else (lambda v: v)
        ty = (lambda v: math.log10(v)) if plot.logy else (lambda v: v)
        X = lambda v: LEFT + (tx(v) - tx(x0)) / (tx(x1) - tx(x0)) * pw
        Y = lambda v: TOP + ph - (ty(v) - ty(y0)) / (ty(y1) - ty(y0)) * ph
        for v, lab in xt:
            x = X(v)
            out.append(f'<line x1="{_f(x)}" y1="{TOP + ph}" x2="{_f(x)}" y2="{TOP + ph + 5}" stroke="black"/>')
            out.append(f'<text x="{_f(x)}" y="{TOP + ph + 18}" text-anchor="middle">{lab}</text>')
        for v, lab in yt:
            y = Y(v)
            out.append(f'<line x1="{LEFT - 5}" y1="{_f(y)}" x2="{LEFT}" y2="{_f(y)}" stroke="black"/>')
            out.append(f'<text x="{LEFT - 8}" y="{_f(y + 4)}" text-anchor="end">{lab}</text>')
        for s, pts in kept:
            coords = " ".join(f"{_f(X(x))},{_f(Y(y))}" for x, y in pts)
            dash = ' stroke-dasharray="5,4"' if s.dashed else ""
            out.append(f'<polyline fill="none" stroke="{s.color}" stroke-width="1.5"{dash} points="{coords}"/>')
            if not s.dashed:
                for x, y in pts:
                    out.append(f'<circle cx="{_f(X(x))}" cy="{_f(Y(y))}" r="2.5" fill="{s.color}"/>')

    out.append(f'<text x="{_f(LEFT + pw / 2)}" y="{HEIGHT - 18}" text-anchor="middle">{escape(plot.xlabel)}</text>')
    out.append(f'<text transform="translate(20,{_f(TOP + ph / 2)}) rotate(-90)" text-anchor="middle">'
               f'{escape(plot.ylabel)}</text>')
    ly = TOP + 10
    for s, _ in kept:
        if not s.in_legend:
            continue
        lx = WIDTH - RIGHT + 15
        dash = ' stroke-dasharray="5,4"' if s.dashed else ""
        out.append(f'<g class="legend-entry"><line x1="{lx}" y1="{ly}" x2="{lx + 24}" y2="{ly}" '
                   f'stroke="{s.color}" stroke-width="2"{dash}/>'
                   f'<text x="{lx + 30}" y="{ly + 4}">{escape(s.label)}</text></g>')
        ly += 18
    out.append("</svg>")
    return "\n".join(out) + "\n"
