"""Minimal deterministic SVG line charts.

Output depends only on the data passed in: fixed canvas, fixed number
formatting, no timestamps or random ids.
"""

from __future__ import annotations

import math
from html import escape
from typing import Sequence, Tuple

WIDTH, HEIGHT = 800, 520
LEFT, RIGHT, TOP, BOTTOM = 72, 170, 40, 56


def _fmt(v: float) -> str:
    s = f"{v:.2f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def nice_ticks(lo: float, hi: float, target: int = 6) -> list:
    """Round tick positions (steps of 1, 2 or 5 times a power of ten) covering ``[lo, hi]``."""
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(target - 1, 1)
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 5, 10) if m * mag >= raw)
    start = math.floor(lo / step) * step
    ticks = []
    k = 0
    while True:
        t = start + k * step
        if t > hi + 1e-9 * step:
            break
        if t >= lo - 1e-9 * step:
            ticks.append(round(t, 12))
        k += 1
    return ticks


def _label(t: float) -> str:
    return f"{t:g}"


def line_chart(xs: Sequence[float], series: Sequence[Tuple[str, Sequence[float], str]],
               title: str = "", x_label: str = "x", y_label: str = "") -> str:
    """Render ``series`` (label, ys, colour) sharing ``xs`` as a standalone SVG document."""
    xs = [float(v) for v in xs]
    all_y = [float(y) for _, ys, _ in series for y in ys if math.isfinite(y)]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(all_y), max(all_y)
    pad = 0.05 * (y_hi - y_lo or 1.0)
    y_ticks = nice_ticks(y_lo - pad, y_hi + pad)
    x_ticks = nice_ticks(x_lo, x_hi)
    y_lo, y_hi = min(y_ticks[0], y_lo - pad), max(y_ticks[-1], y_hi + pad)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    pw = WIDTH - LEFT - RIGHT
    ph = HEIGHT - TOP - BOTTOM

    def px(x):
        return LEFT + (x - x_lo) / (x_hi - x_lo) * pw

    def py(y):
        return TOP + (y_hi - y) / (y_hi - y_lo) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2:.0f}" y="22" text-anchor="middle" font-size="15">'
                   f'{escape(title)}</text>')
    # axes
    out.append(f'<g class="axes" stroke="black" stroke-width="1">'
               f'<line x1="{LEFT}" y1="{TOP + ph}" x2="{LEFT + pw}" y2="{TOP + ph}"/>'
               f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{TOP + ph}"/></g>')
    out.append('<g class="ticks">')
    for t in x_ticks:
        X = _fmt(px(t))
        out.append(f'<line x1="{X}" y1="{TOP + ph}" x2="{X}" y2="{TOP + ph + 5}" stroke="black"/>'
                   f'<text x="{X}" y="{TOP + ph + 19}" text-anchor="middle">{_label(t)}</text>')
    for t in y_ticks:
        Y = _fmt(py(t))
        out.append(f'<line x1="{LEFT - 5}" y1="{Y}" x2="{LEFT}" y2="{Y}" stroke="black"/>'
                   f'<line x1="{LEFT}" y1="{Y}" x2="{LEFT + pw}" y2="{Y}" stroke="#dddddd"/>'
                   f'<text x="{LEFT - 8}" y="{Y}" text-anchor="end" dominant-baseline="middle">'
                   f'{_label(t)}</text>')
    out.append('</g>')
    out.append(f'<text x="{LEFT + pw / 2:.0f}" y="{HEIGHT - 14}" text-anchor="middle">'
               f'{escape(x_label)}</text>')
    if y_label:
        out.append(f'<text x="18" y="{TOP + ph / 2:.0f}" text-anchor="middle" '
                   f'transform="rotate(-90 18 {TOP + ph / 2:.0f})">{escape(y_label)}</text>')
    for label, ys, colour in series:
        pts = " ".join(f"{_fmt(px(x))},{_fmt(py(float(y)))}" for x, y in zip(xs, ys)
                       if math.isfinite(float(y)))
        out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.6" '
                   f'points="{pts}"><title>{escape(label)}</title></polyline>')
    # legend
    lx = LEFT + pw + 18
    out.append('<g class="legend">')
    for i, (label, _, colour) in enumerate(series):
        ly = TOP + 10 + 20 * i
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 26}" y2="{ly}" stroke="{colour}" '
                   f'stroke-width="2.5"/><text x="{lx + 32}" y="{ly}" dominant-baseline="middle">'
                   f'{escape(label)}</text>')
    out.append('</g>')
    out.append('</svg>')
    return "\n".join(out) + "\n"
