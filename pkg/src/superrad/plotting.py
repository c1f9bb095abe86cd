"""Minimal SVG line plots, enough to eyeball a sweep without a plotting stack."""
from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
DASHES = ("", "6,3", "2,3", "8,3,2,3")


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    return list(np.linspace(lo, hi, n))


def write_svg(path, curves, xlabel="", ylabel="", title="", width=640, height=420) -> None:
    """Render ``curves`` (list of ``(label, x, y)``) as polylines into an SVG file."""
    left, right, top, bottom = 80, 160, 40, 60
    pw, ph = width - left - right, height - top - bottom

    xs = np.concatenate([np.asarray(c[1], float) for c in curves]) if curves else np.zeros(1)
    ys = np.concatenate([np.asarray(c[2], float) for c in curves]) if curves else np.zeros(1)
    xlo, xhi = float(xs.min()), float(xs.max())
    ylo, yhi = float(min(ys.min(), 0.0)), float(ys.max())
    if xhi == xlo:
        xhi = xlo + 1.0
    if yhi == ylo:
        yhi = ylo + 1.0

    def sx(x):
        return left + (x - xlo) / (xhi - xlo) * pw

    def sy(y):
        return top + ph - (y - ylo) / (yhi - ylo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'font-family="sans-serif" font-size="11">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
        f'<text x="{left + pw / 2}" y="{top - 14}" text-anchor="middle" font-size="13">{escape(title)}</text>',
        f'<text x="{left + pw / 2}" y="{height - 16}" text-anchor="middle">{escape(xlabel)}</text>',
        f'<text x="18" y="{top + ph / 2}" text-anchor="middle" '
        f'transform="rotate(-90 18 {top + ph / 2})">{escape(ylabel)}</text>',
    ]
    for t in _ticks(xlo, xhi):
        out.append(f'<text x="{sx(t):.1f}" y="{top + ph + 16}" text-anchor="middle">{t:.3g}</text>')
    for t in _ticks(ylo, yhi):
        out.append(f'<text x="{left - 6}" y="{sy(t) + 4:.1f}" text-anchor="end">{t:.3g}</text>')

    for i, (label, x, y) in enumerate(curves):
        color = COLORS[i % len(COLORS)]
        dash = DASHES[(i // len(COLORS)) % len(DASHES)]
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(np.asarray(x, float), np.asarray(y, float)))
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"{dash_attr}/>')
        ly = top + 14 + 16 * i
        out.append(
            f'<line x1="{left + pw + 10}" y1="{ly}" x2="{left + pw + 30}" y2="{ly}" stroke="{color}" stroke-width="2"/>'
        )
        out.append(f'<text x="{left + pw + 34}" y="{ly + 4}">{escape(label)}</text>')
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")
