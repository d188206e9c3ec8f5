"""Minimal deterministic SVG writing.

Coordinates are formatted at fixed precision and elements are emitted in
construction order, so identical figure models always serialize to
identical bytes — no system fonts, locales, or library versions leak
into the output.
"""

from __future__ import annotations


def fmt(value: float) -> str:
    """Fixed-precision coordinate text; normalizes the negative-zero case."""
    text = format(value, ".3f")
    return "0.000" if text == "-0.000" else text


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;"))


class Canvas:
    """An append-only SVG document of a fixed pixel size."""

    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self._parts: list[str] = []

    def line(self, x1, y1, x2, y2, stroke: str, width: float = 1.0) -> None:
        self._parts.append(
            f'<line x1="{fmt(x1)}" y1="{fmt(y1)}" x2="{fmt(x2)}" '
            f'y2="{fmt(y2)}" stroke="{stroke}" stroke-width="{fmt(width)}"/>')

    def polyline(self, points, stroke: str, width: float = 1.5) -> None:
        coords = " ".join(f"{fmt(x)},{fmt(y)}" for x, y in points)
        self._parts.append(
            f'<polyline fill="none" stroke="{stroke}" '
            f'stroke-width="{fmt(width)}" points="{coords}"/>')

    def rect(self, x, y, w, h, fill: str, stroke: str | None = None,
             css_class: str | None = None) -> None:
        cls = f' class="{css_class}"' if css_class else ""
        edge = f' stroke="{stroke}"' if stroke else ""
        self._parts.append(
            f'<rect{cls} x="{fmt(x)}" y="{fmt(y)}" width="{fmt(w)}" '
            f'height="{fmt(h)}" fill="{fill}"{edge}/>')

    def circle(self, cx, cy, r, fill: str) -> None:
        self._parts.append(f'<circle cx="{fmt(cx)}" cy="{fmt(cy)}" '
                           f'r="{fmt(r)}" fill="{fill}"/>')

    def text(self, x, y, content: str, size: float = 11.0,
             anchor: str = "start", fill: str = "#222222") -> None:
        self._parts.append(
            f'<text x="{fmt(x)}" y="{fmt(y)}" font-family="monospace" '
            f'font-size="{fmt(size)}" text-anchor="{anchor}" '
            f'fill="{fill}">{_escape(content)}</text>')

    def render(self) -> str:
        head = ('<?xml version="1.0" encoding="UTF-8"?>\n'
                f'<svg xmlns="http://www.w3.org/2000/svg" '
                f'width="{self.width}" height="{self.height}" '
                f'viewBox="0 0 {self.width} {self.height}">')
        body = "\n".join(self._parts)
        return f"{head}\n{body}\n</svg>\n"
