"""Figure models: the exact data layer between CSV inputs and SVG layout.

A figure model stores series values exactly as written in the CSV
(:class:`decimal.Decimal`, which round-trips decimal text losslessly)
together with a per-series display offset.  Offsets enter only through
:meth:`Series.plotted`; the stored base values are never modified, and
because the shift is computed in decimal arithmetic the identity
``plotted[i] - offset == base[i]`` holds exactly, not merely to float
rounding.  X positions are plain floats: offsets never touch them, so
they are pure layout.

The models do no science — every number is either copied from the CSV
or a nearest-neighbor rearrangement of CSV values for display.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from pathlib import Path

from .csvdata import Table
from .errors import DataError, OptionError

#: Display raster for the acquisition contour, cells per axis.
CONTOUR_MESH = 100

#: Columns each figure kind requires in its input CSV.
REQUIRED_COLUMNS = {
    "count": ("k", "expected_wakeups"),
    "surface": ("k", "spacing_m", "expected_wakeups"),
    "contour": ("k", "spacing_m", "acquisition"),
    "delay": ("strategy", "subnet", "time", "delay"),
    "convergence": ("index", "ei_best_rate", "aei_best_rate",
                    "aei_mlp_best_rate"),
}

KINDS = tuple(sorted(REQUIRED_COLUMNS))

_CONVERGENCE_SERIES = (("ei", "ei_best_rate"), ("aei", "aei_best_rate"),
                       ("aei_mlp", "aei_mlp_best_rate"))


@dataclass(frozen=True)
class PlotSpec:
    """What to draw: figure kind, input CSV, output path, display offsets.

    ``offsets`` are per-series vertical shifts applied at rendering time
    only; they are parsed as exact decimals, so strings like ``"0.05"``
    carry no float noise into the data layer.
    """

    kind: str
    csv_path: str | Path
    out_path: str | Path | None = None
    offsets: tuple = ()


@dataclass(frozen=True)
class Series:
    """One curve: float x positions, exact base y values, display offset."""

    name: str
    x: tuple[float, ...]
    base: tuple[Decimal, ...]
    offset: Decimal = Decimal(0)

    def plotted(self) -> tuple[Decimal, ...]:
        """Base values shifted by the display offset (exact decimal sums)."""
        return tuple(value + self.offset for value in self.base)


@dataclass(frozen=True)
class CurveFigure:
    """A line figure: one or more series over a shared pair of axes.

    ``marked`` holds (x, y) base coordinates to highlight; they belong to
    the first series and are shifted by its offset when drawn.
    """

    kind: str
    title: str
    x_label: str
    y_label: str
    series: tuple[Series, ...]
    marked: tuple[tuple[float, float], ...] = ()


@dataclass(frozen=True)
class GridFigure:
    """A filled-cell figure over a rectangular mesh.

    ``values[j][i]`` is the cell value at x position ``xs[i]`` and y
    position ``ys[j]``.
    """

    kind: str
    title: str
    x_label: str
    y_label: str
    value_label: str
    xs: tuple[float, ...]
    ys: tuple[float, ...]
    values: tuple[tuple[float, ...], ...]


def _offset_decimals(offsets) -> tuple[Decimal, ...]:
    parsed = []
    for value in offsets:
        try:
            parsed.append(Decimal(str(value)))
        except InvalidOperation as exc:
            raise OptionError(f"offset {value!r} is not numeric") from exc
    return tuple(parsed)


def _series_offsets(offsets, n_series: int, kind: str) -> tuple[Decimal, ...]:
    if not offsets:
        return (Decimal(0),) * n_series
    if len(offsets) != n_series:
        raise OptionError(f"{kind} figure has {n_series} series but "
                          f"{len(offsets)} offsets were given")
    return offsets


def _count_figure(table: Table, offsets) -> CurveFigure:
    offs = _series_offsets(offsets, 1, "count")
    xs = tuple(table.floats("k"))
    series = Series("expected_wakeups", xs,
                    tuple(table.decimals("expected_wakeups")), offs[0])
    marked = ()
    if "selected" in table.header:
        ys = table.floats("expected_wakeups")
        marked = tuple((x, y) for x, y, sel
                       in zip(xs, ys, table.floats("selected")) if sel == 1.0)
    return CurveFigure("count", "expected wake-ups by sensor count",
                       "sensor count k", "E(X)", (series,), marked)


def _delay_figure(table: Table, offsets) -> CurveFigure:
    names = table.column("strategy")
    strategies = []
    for name in names:
        if name not in strategies:
            strategies.append(name)
    offs = _series_offsets(offsets, len(strategies), "delay")
    xs = table.floats("time")
    base = table.decimals("delay")
    series = []
    for j, strategy in enumerate(strategies):
        rows = [i for i, name in enumerate(names) if name == strategy]
        series.append(Series(strategy, tuple(xs[i] for i in rows),
                             tuple(base[i] for i in rows), offs[j]))
    return CurveFigure("delay", "end-to-end delay by strategy", "time (s)",
                       "delay (s)", tuple(series))


def _convergence_figure(table: Table, offsets) -> CurveFigure:
    offs = _series_offsets(offsets, len(_CONVERGENCE_SERIES), "convergence")
    xs = tuple(table.floats("index"))
    series = tuple(Series(name, xs, tuple(table.decimals(column)), offs[j])
                   for j, (name, column) in enumerate(_CONVERGENCE_SERIES))
    return CurveFigure("convergence", "best rate by evaluation",
                       "evaluation", "best rate", series)


def _grid_values(table: Table, value_column: str):
    """Arrange a (k, spacing_m) product grid as sorted axes plus a matrix."""
    ks = table.floats("k")
    ds = table.floats("spacing_m")
    values = table.floats(value_column)
    lookup = dict(zip(zip(ks, ds), values))
    xs = sorted(set(ks))
    ys = sorted(set(ds))
    matrix = []
    for d in ys:
        row = []
        for k in xs:
            if (k, d) not in lookup:
                raise DataError(f"{table.path} is not a complete "
                                f"(k, spacing_m) grid: missing ({k:g}, {d:g})")
            row.append(lookup[(k, d)])
        matrix.append(tuple(row))
    return tuple(xs), tuple(ys), tuple(matrix)


def _surface_figure(table: Table, offsets) -> GridFigure:
    if offsets:
        raise OptionError("offsets are not supported for surface figures")
    xs, ys, values = _grid_values(table, "expected_wakeups")
    return GridFigure("surface", "expected wake-ups over (k, spacing)",
                      "sensor count k", "spacing (m)", "E(X)", xs, ys, values)


def _nearest(sorted_values, query: float) -> int:
    """Index of the value in ``sorted_values`` closest to ``query``."""
    i = bisect_left(sorted_values, query)
    if i == 0:
        return 0
    if i == len(sorted_values):
        return len(sorted_values) - 1
    before, after = sorted_values[i - 1], sorted_values[i]
    return i - 1 if query - before <= after - query else i


def _contour_figure(table: Table, offsets) -> GridFigure:
    if offsets:
        raise OptionError("offsets are not supported for contour figures")
    native_xs, native_ys, native = _grid_values(table, "acquisition")
    x_lo, x_hi = native_xs[0], native_xs[-1]
    y_lo, y_hi = native_ys[0], native_ys[-1]
    xs = tuple(x_lo + (i + 0.5) * (x_hi - x_lo) / CONTOUR_MESH
               for i in range(CONTOUR_MESH))
    ys = tuple(y_lo + (j + 0.5) * (y_hi - y_lo) / CONTOUR_MESH
               for j in range(CONTOUR_MESH))
    cols = [_nearest(native_xs, x) for x in xs]
    values = tuple(tuple(native[_nearest(native_ys, y)][i] for i in cols)
                   for y in ys)
    return GridFigure("contour", "acquisition over (k, spacing)",
                      "sensor count k", "spacing (m)", "acquisition",
                      xs, ys, values)


_BUILDERS = {
    "count": _count_figure,
    "surface": _surface_figure,
    "contour": _contour_figure,
    "delay": _delay_figure,
    "convergence": _convergence_figure,
}


def build_figure(spec: PlotSpec):
    """Parse and validate the input CSV and construct the figure model."""
    if spec.kind not in _BUILDERS:
        raise OptionError(f"unknown figure kind {spec.kind!r}; choose from "
                          + ", ".join(KINDS))
    table = Table.read(spec.csv_path)
    table.require(REQUIRED_COLUMNS[spec.kind], spec.kind)
    return _BUILDERS[spec.kind](table, _offset_decimals(spec.offsets))
