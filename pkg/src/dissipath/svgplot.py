"""Tiny SVG line-plot writer: axes, ticks, one polyline per series, legend."""

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

__all__ = ["Series", "LinePlot", "nice_ticks", "log_ticks"]

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b")
_DASHES = {"solid": None, "dashed": "6,4", "dotted": "2,3"}


def _fmt(x):
    return f"{x:.6g}"


def nice_ticks(lo, hi, target=6):
    """Round tick positions covering ``[lo, hi]`` on a linear axis."""
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / max(target - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step - 1e-9)
    last = math.floor(hi / step + 1e-9)
    return [k * step for k in range(first, last + 1)]


def log_ticks(lo, hi):
    """Powers of ten covering ``[lo, hi]``, thinned to at most ten."""
    a = math.floor(math.log10(lo) + 1e-9)
    b = math.ceil(math.log10(hi) - 1e-9)
    stride = max(1, math.ceil((b - a + 1) / 10))
    return [10.0 ** k for k in range(a, b + 1, stride)]


@dataclass
class Series:
    label: str
    x: list
    y: list
    style: str = "solid"

    def points(self):
        return [(float(a), float(b)) for a, b in zip(self.x, self.y)
                if math.isfinite(a) and math.isfinite(b)]


@dataclass
class LinePlot:
    """Collects series and renders them as a standalone SVG document.

    ``ylim`` clips the data range, which keeps a divergence from
    flattening every other feature of the curve.
    """

    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    logx: bool = False
    ylim: tuple = None
    legend: str = "upper right"
    width: int = 640
    height: int = 440
    series: list = field(default_factory=list)

    def add(self, label, x, y, style="solid"):
        self.series.append(Series(label, list(x), list(y), style))

    def _ranges(self):
        pts = [pt for s in self.series for pt in s.points()]
        if self.logx:
            pts = [pt for pt in pts if pt[0] > 0.0]
        if not pts:
            return (1.0, 10.0) if self.logx else (0.0, 1.0), (0.0, 1.0)
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        if self.ylim is not None:
            ys = [min(max(y, self.ylim[0]), self.ylim[1]) for y in ys]
        y0, y1 = min(ys), max(ys)
        if y1 - y0 < 1e-12:
            y0, y1 = y0 - 0.5, y1 + 0.5
        pad = 0.05 * (y1 - y0)
        return (min(xs), max(xs)), (y0 - pad, y1 + pad)

    def render(self):
        (x0, x1), (y0, y1) = self._ranges()
        if x1 <= x0:
            x1 = x0 * 10.0 if self.logx else x0 + 1.0
        left, right, top, bottom = 70, 20, 40, 55
        pw = self.width - left - right
        ph = self.height - top - bottom

        if self.logx:
            lx0, lx1 = math.log10(x0), math.log10(x1)

            def sx(x):
                return left + (math.log10(x) - lx0) / (lx1 - lx0) * pw
        else:
            def sx(x):
                return left + (x - x0) / (x1 - x0) * pw

        def sy(y):
            y = min(max(y, y0), y1)
            return top + (y1 - y) / (y1 - y0) * ph

        out = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" '
            f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">',
            f'<rect x="0" y="0" width="{self.width}" height="{self.height}" fill="white"/>',
            f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
        ]
        xt = log_ticks(x0, x1) if self.logx else nice_ticks(x0, x1)
        for t in xt:
            if not (x0 * (1 - 1e-9) <= t <= x1 * (1 + 1e-9)) and self.logx:
                continue
            if not self.logx and not (x0 - 1e-12 <= t <= x1 + 1e-12):
                continue
            px = sx(t)
            out.append(f'<line class="xtick" x1="{px:.2f}" y1="{top + ph}" '
                       f'x2="{px:.2f}" y2="{top + ph + 5}" stroke="black"/>')
            out.append(f'<text x="{px:.2f}" y="{top + ph + 18}" font-size="11" '
                       f'text-anchor="middle">{escape(_fmt(t))}</text>')
        for t in nice_ticks(y0, y1):
            py = sy(t)
            out.append(f'<line class="ytick" x1="{left - 5}" y1="{py:.2f}" '
                       f'x2="{left}" y2="{py:.2f}" stroke="black"/>')
            out.append(f'<text x="{left - 8}" y="{py + 4:.2f}" font-size="11" '
                       f'text-anchor="end">{escape(_fmt(t))}</text>')
        if y0 < 0.0 < y1:
            out.append(f'<line x1="{left}" y1="{sy(0.0):.2f}" x2="{left + pw}" '
                       f'y2="{sy(0.0):.2f}" stroke="#bbbbbb" stroke-dasharray="3,3"/>')
        out.append(f'<text x="{left + pw / 2}" y="{self.height - 12}" font-size="13" '
                   f'text-anchor="middle">{escape(self.xlabel)}</text>')
        out.append(f'<text x="16" y="{top + ph / 2}" font-size="13" text-anchor="middle" '
                   f'transform="rotate(-90 16 {top + ph / 2})">{escape(self.ylabel)}</text>')
        if self.title:
            out.append(f'<text x="{self.width / 2}" y="22" font-size="14" '
                       f'text-anchor="middle">{escape(self.title)}</text>')

        for i, s in enumerate(self.series):
            color = _COLORS[i % len(_COLORS)]
            pts = [(a, b) for a, b in s.points() if a > 0.0 or not self.logx]
            coords = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in pts)
            dash = _DASHES.get(s.style)
            dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5"'
                       f'{dash_attr} points="{coords}"/>')
            if self.legend == "lower right":
                ly = top + ph - 10 - 16 * (len(self.series) - 1 - i)
            else:
                ly = top + 14 + 16 * i
            lx = left + pw - 150
            out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 24}" y2="{ly - 4}" '
                       f'stroke="{color}" stroke-width="1.5"{dash_attr}/>')
            out.append(f'<text x="{lx + 30}" y="{ly}" font-size="11">{escape(s.label)}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.render())
