"""Minimal multi-series SVG line charts.

Output is a pure function of the inputs so repeated runs give identical bytes.
"""

from __future__ import annotations

import math
from html import escape
from pathlib import Path
from typing import Sequence

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79",
)

WIDTH, HEIGHT = 800, 500
LEFT, RIGHT, TOP, BOTTOM = 80, 160, 50, 60


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    step = (hi - lo) / count
    magnitude = 10 ** math.floor(math.log10(step))
    for m in (1, 2, 5, 10):
        if m * magnitude >= step:
            step = m * magnitude
            break
    first = math.ceil(lo / step)
    n = math.floor(hi / step + 1e-9) - first + 1
    return [(first + k) * step for k in range(max(0, min(n, 4 * count)))]


def _padded(lo: float, hi: float) -> tuple[float, float]:
    # ranges below display resolution would give sub-ulp tick steps
    scale = max(abs(lo), abs(hi))
    if hi - lo <= 1e-9 * scale or hi == lo:
        half = 0.5 * scale if scale > 0 else 0.5
        return lo - half, hi + half
    return lo, hi


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def line_chart(
    series: Sequence[tuple[str, Sequence[float], Sequence[float]]],
    title: str,
    x_label: str,
    y_label: str,
    log_y: bool = False,
) -> str:
    """Render ``(name, xs, ys)`` series as an SVG document.

    Non-finite and (on a log axis) non-positive points break the line.
    """
    pts = []
    for name, xs, ys in series:
        keep = [
            (x, y) for x, y in zip(xs, ys)
            if math.isfinite(x) and math.isfinite(y) and (y > 0 or not log_y)
        ]
        pts.append((name, xs, ys, keep))
    all_x = [x for *_, keep in pts for x, _ in keep]
    all_y = [y for *_, keep in pts for _, y in keep]
    if not all_x:
        raise ValueError("no finite points to plot")

    tf = (lambda y: math.log10(y)) if log_y else (lambda y: y)
    x0, x1 = min(all_x), max(all_x)
    y0, y1 = tf(min(all_y)), tf(max(all_y))
    x0, x1 = _padded(x0, x1)
    if log_y and y1 - y0 <= 1e-9 * max(abs(y0), abs(y1)):
        y0, y1 = y0 - 0.5, y1 + 0.5
    else:
        y0, y1 = _padded(y0, y1)
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def sx(x: float) -> float:
        return LEFT + (x - x0) / (x1 - x0) * pw

    def sy(y: float) -> float:
        return TOP + ph - (tf(y) - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="25" text-anchor="middle" font-size="15">{escape(title)}</text>',
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>',
    ]
    for xt in _ticks(x0, x1):
        X = sx(xt)
        out.append(f'<line x1="{X:.2f}" y1="{TOP + ph}" x2="{X:.2f}" y2="{TOP + ph + 5}" stroke="#333"/>')
        out.append(f'<text x="{X:.2f}" y="{TOP + ph + 18}" text-anchor="middle">{_fmt(xt)}</text>')
    if log_y:
        y_ticks = [10.0 ** e for e in range(math.ceil(y0), math.floor(y1) + 1)]
        step = max(1, len(y_ticks) // 8)
        y_ticks = y_ticks[::step]
    else:
        y_ticks = _ticks(y0, y1)
    for yt in y_ticks:
        Y = sy(yt)
        out.append(f'<line x1="{LEFT - 5}" y1="{Y:.2f}" x2="{LEFT}" y2="{Y:.2f}" stroke="#333"/>')
        label = f"1e{round(math.log10(yt))}" if log_y else _fmt(yt)
        out.append(f'<text x="{LEFT - 8}" y="{Y + 4:.2f}" text-anchor="end">{label}</text>')
    out.append(f'<text x="{LEFT + pw / 2:.1f}" y="{HEIGHT - 15}" text-anchor="middle">{escape(x_label)}</text>')
    out.append(
        f'<text x="20" y="{TOP + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 20 {TOP + ph / 2:.1f})">{escape(y_label)}</text>'
    )

    for k, (name, xs, ys, _) in enumerate(pts):
        color = PALETTE[k % len(PALETTE)]
        segments, current = [], []
        for x, y in zip(xs, ys):
            if math.isfinite(x) and math.isfinite(y) and (y > 0 or not log_y):
                current.append(f"{sx(x):.2f},{sy(y):.2f}")
            elif current:
                segments.append(current)
                current = []
        if current:
            segments.append(current)
        for seg in segments:
            out.append(f'<polyline points="{" ".join(seg)}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = TOP + 10 + 18 * k
        out.append(f'<line x1="{WIDTH - RIGHT + 10}" y1="{ly}" x2="{WIDTH - RIGHT + 30}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{WIDTH - RIGHT + 35}" y="{ly + 4}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_line_chart(path: str | Path, *args, **kwargs) -> None:
    Path(path).write_text(line_chart(*args, **kwargs), encoding="utf-8")
