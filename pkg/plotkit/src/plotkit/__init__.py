"""Deterministic SVG figures rendered from aquaplan result CSVs.

plotkit is a strictly read-only consumer of the CSV files the
``aquaplan`` command writes: it parses them (skipping ``#`` provenance
comments), validates the columns each figure kind needs, and lays the
values out as self-contained SVG documents.  It adds no analysis of its
own, and rendering the same input twice produces identical bytes.

Display offsets — used to separate overlapping curves — are a property
of the rendering, never of the data: the figure model keeps the CSV
values exactly as written, so ``plotted - offset`` recovers them
without rounding error.
"""

from .csvdata import Table
from .errors import DataError, OptionError, PlotkitError, SchemaError
from .model import (CONTOUR_MESH, KINDS, REQUIRED_COLUMNS, CurveFigure,
                    GridFigure, PlotSpec, Series, build_figure)
from .render import output_path, render, render_figure

__version__ = "0.1.0"

__all__ = [
    "CONTOUR_MESH",
    "CurveFigure",
    "DataError",
    "GridFigure",
    "KINDS",
    "OptionError",
    "PlotSpec",
    "PlotkitError",
    "REQUIRED_COLUMNS",
    "SchemaError",
    "Series",
    "Table",
    "build_figure",
    "output_path",
    "render",
    "render_figure",
]
