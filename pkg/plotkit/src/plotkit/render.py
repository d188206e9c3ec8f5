"""Rendering: lay figure models out on an SVG canvas and write the file.

The data layer (:mod:`plotkit.model`) is exact; everything presentational
lives here — scales, axes, the palette, and the point where display
offsets actually move pixels.  The output file is written only after the
whole document has been generated, so a failing render never leaves a
partial file behind.
"""

from __future__ import annotations

from pathlib import Path

from .model import CurveFigure, GridFigure, PlotSpec, build_figure
from .svg import Canvas

WIDTH = 640
HEIGHT = 440
MARGIN_LEFT = 70
MARGIN_RIGHT = 20
MARGIN_TOP = 34
MARGIN_BOTTOM = 50

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")
AXIS_COLOR = "#444444"
MARK_COLOR = "#d62728"
N_TICKS = 5


class _Scale:
    """Linear map from a data interval onto a pixel interval."""

    def __init__(self, lo: float, hi: float, p0: float, p1: float):
        self.lo = lo
        self.hi = hi
        self.p0 = p0
        self.p1 = p1

    def __call__(self, value: float) -> float:
        if self.hi == self.lo:
            return (self.p0 + self.p1) / 2
        return self.p0 + (value - self.lo) * (self.p1 - self.p0) / (self.hi -
                                                                    self.lo)


def _limits(values) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if hi == lo:
        pad = 1.0 if hi == 0 else abs(hi) * 0.05
    else:
        pad = (hi - lo) * 0.05
    return lo - pad, hi + pad


def _ticks(lo: float, hi: float):
    step = (hi - lo) / (N_TICKS - 1)
    return [lo + i * step for i in range(N_TICKS)]


def _draw_frame(canvas: Canvas, xscale: _Scale, yscale: _Scale,
                title: str, x_label: str, y_label: str) -> None:
    left, right = xscale.p0, xscale.p1
    bottom, top = yscale.p0, yscale.p1
    canvas.rect(left, top, right - left, bottom - top, "none", AXIS_COLOR)
    for value in _ticks(xscale.lo, xscale.hi):
        x = xscale(value)
        canvas.line(x, bottom, x, bottom + 4, AXIS_COLOR)
        canvas.text(x, bottom + 16, format(value, ".6g"), anchor="middle")
    for value in _ticks(yscale.lo, yscale.hi):
        y = yscale(value)
        canvas.line(left - 4, y, left, y, AXIS_COLOR)
        canvas.text(left - 7, y + 4, format(value, ".6g"), anchor="end")
    canvas.text(canvas.width / 2, 18, title, size=13.0, anchor="middle")
    canvas.text((left + right) / 2, canvas.height - 10, x_label,
                anchor="middle")
    canvas.text(14, top - 8, y_label)


def _series_label(series) -> str:
    if series.offset == 0:
        return series.name
    sign = "+" if series.offset > 0 else ""
    return f"{series.name} ({sign}{series.offset})"


def _render_curve(figure: CurveFigure) -> str:
    canvas = Canvas(WIDTH, HEIGHT)
    xs = [x for series in figure.series for x in series.x]
    ys = [float(value) for series in figure.series
          for value in series.plotted()]
    for x, y in figure.marked:
        ys.append(y + float(figure.series[0].offset))
    x_lo, x_hi = _limits(xs)
    y_lo, y_hi = _limits(ys)
    xscale = _Scale(x_lo, x_hi, MARGIN_LEFT, WIDTH - MARGIN_RIGHT)
    yscale = _Scale(y_lo, y_hi, HEIGHT - MARGIN_BOTTOM, MARGIN_TOP)
    _draw_frame(canvas, xscale, yscale, figure.title, figure.x_label,
                figure.y_label)
    for i, series in enumerate(figure.series):
        color = PALETTE[i % len(PALETTE)]
        points = sorted(zip(series.x, (float(v) for v in series.plotted())),
                        key=lambda point: point[0])
        canvas.polyline([(xscale(x), yscale(y)) for x, y in points], color)
    offset0 = float(figure.series[0].offset)
    for x, y in figure.marked:
        canvas.circle(xscale(x), yscale(y + offset0), 4.0, MARK_COLOR)
    legend_x = WIDTH - MARGIN_RIGHT - 170
    for i, series in enumerate(figure.series):
        y = MARGIN_TOP + 12 + 16 * i
        canvas.line(legend_x, y - 4, legend_x + 18, y - 4,
                    PALETTE[i % len(PALETTE)], width=2.0)
        canvas.text(legend_x + 24, y, _series_label(series))
    return canvas.render()


def _cell_color(t: float) -> str:
    low, high = (19, 48, 109), (245, 227, 92)
    channels = (round(a + t * (b - a)) for a, b in zip(low, high))
    return "#%02x%02x%02x" % tuple(channels)


def _render_grid(figure: GridFigure) -> str:
    canvas = Canvas(WIDTH, HEIGHT)
    v_lo = min(min(row) for row in figure.values)
    v_hi = max(max(row) for row in figure.values)
    span = v_hi - v_lo
    n_cols, n_rows = len(figure.xs), len(figure.ys)
    left, right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    bottom, top = HEIGHT - MARGIN_BOTTOM, MARGIN_TOP
    cell_w = (right - left) / n_cols
    cell_h = (bottom - top) / n_rows
    for j in range(n_rows):
        for i in range(n_cols):
            value = figure.values[j][i]
            t = (value - v_lo) / span if span > 0 else 0.5
            canvas.rect(left + i * cell_w, bottom - (j + 1) * cell_h,
                        cell_w, cell_h, _cell_color(t), css_class="cell")
    xscale = _Scale(figure.xs[0], figure.xs[-1], left + cell_w / 2,
                    right - cell_w / 2)
    yscale = _Scale(figure.ys[0], figure.ys[-1], bottom - cell_h / 2,
                    top + cell_h / 2)
    _draw_frame(canvas, xscale, yscale, figure.title, figure.x_label,
                figure.y_label)
    caption = (f"{figure.value_label}: min {v_lo:.6g}, max {v_hi:.6g}")
    canvas.text(right, top - 8, caption, anchor="end")
    return canvas.render()


def render_figure(figure) -> str:
    """Serialize a figure model to SVG text."""
    if isinstance(figure, CurveFigure):
        return _render_curve(figure)
    if isinstance(figure, GridFigure):
        return _render_grid(figure)
    raise TypeError(f"not a figure model: {figure!r}")


def output_path(spec: PlotSpec) -> Path:
    if spec.out_path is not None:
        return Path(spec.out_path)
    source = Path(spec.csv_path)
    return source.with_name(f"{source.stem}_{spec.kind}.svg")


def render(spec: PlotSpec) -> Path:
    """Build the figure for ``spec``, render it, and write the SVG file."""
    figure = build_figure(spec)
    text = render_figure(figure)
    out = output_path(spec)
    out.write_bytes(text.encode("utf-8"))
    return out
