"""Minimal SVG line charts: fixed viewBox, linear axes, one polyline per series."""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

__all__ = ["Series", "DASH_STYLES", "line_chart"]

WIDTH, HEIGHT = 640, 420
MARGIN = (60, 20, 30, 50)  # left, right, top, bottom
DASH_STYLES = {"solid": None, "dashed": "8,5", "dotted": "1.5,4"}
COLORS = ("#1f4e79", "#b22222", "#2e7d32", "#6a1b9a", "#ef6c00", "#00838f", "#5d4037")


@dataclass(frozen=True)
class Series:
    x: tuple
    y: tuple
    label: str = ""
    dash: str = "solid"
    color: str | None = None
    width: float = 1.2


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((s * mag for s in (1, 2, 5, 10) if s * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    return [start + i * step for i in range(int((hi - start) / step + 1e-9) + 1)]


def line_chart(series, title: str = "", xlabel: str = "", ylabel: str = "", vlines=()) -> str:
    """Render ``series`` (finite points only) as an SVG document string.

    ``vlines`` are x positions drawn as thin grey markers, e.g. period ends.
    """
    xs = [x for s in series for x, y in zip(s.x, s.y) if math.isfinite(x) and math.isfinite(y)]
    ys = [y for s in series for x, y in zip(s.x, s.y) if math.isfinite(x) and math.isfinite(y)]
    if not xs:
        raise ValueError("nothing to plot")
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    pad = 0.04 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    left, right, top, bottom = MARGIN
    pw, ph = WIDTH - left - right, HEIGHT - top - bottom

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + (y1 - y) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" '
        f'width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="#000"/>',
    ]
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{px(t):.2f}" y1="{top + ph}" x2="{px(t):.2f}" y2="{top + ph + 4}" stroke="#000"/>')
        out.append(f'<text x="{px(t):.2f}" y="{top + ph + 16}" text-anchor="middle">{t:.4g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<line x1="{left - 4}" y1="{py(t):.2f}" x2="{left}" y2="{py(t):.2f}" stroke="#000"/>')
        out.append(f'<text x="{left - 6}" y="{py(t) + 4:.2f}" text-anchor="end">{t:.4g}</text>')
    for v in vlines:
        if x0 <= v <= x1:
            out.append(
                f'<line x1="{px(v):.2f}" y1="{top}" x2="{px(v):.2f}" y2="{top + ph}" stroke="#999" stroke-width="0.8"/>'
            )
    for i, s in enumerate(series):
        pts = " ".join(
            f"{px(x):.2f},{py(y):.2f}" for x, y in zip(s.x, s.y) if math.isfinite(x) and math.isfinite(y)
        )
        color = s.color or COLORS[i % len(COLORS)]
        dash = DASH_STYLES[s.dash]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="{s.width}"{dash_attr} points="{pts}">'
            f"<title>{escape(s.label)}</title></polyline>"
        )
    if title:
        out.append(f'<text x="{WIDTH / 2}" y="{top - 8}" text-anchor="middle">{escape(title)}</text>')
    if xlabel:
        out.append(f'<text x="{left + pw / 2}" y="{HEIGHT - 10}" text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        out.append(
            f'<text x="14" y="{top + ph / 2}" text-anchor="middle" '
            f'transform="rotate(-90 14 {top + ph / 2})">{escape(ylabel)}</text>'
        )
    labelled = [(j, s) for j, s in enumerate(series) if s.label]
    for i, (j, s) in enumerate(labelled[:12]):
        y = top + 14 + 14 * i
        color = s.color or COLORS[j % len(COLORS)]
        dash = DASH_STYLES[s.dash]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(
            f'<line x1="{left + pw - 110}" y1="{y - 4}" x2="{left + pw - 85}" y2="{y - 4}" '
            f'stroke="{color}"{dash_attr}/>'
        )
        out.append(f'<text x="{left + pw - 80}" y="{y}">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
