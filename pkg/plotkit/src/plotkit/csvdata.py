"""CSV input layer: comment-aware parsing and typed column access.

Input files follow the producing tool's convention: lines starting with
``#`` are provenance comments, the first non-comment line is the header,
and every value is plain decimal text.  Cells are kept verbatim; numeric
columns are exposed both as floats (for layout work) and as
:class:`decimal.Decimal` (the exact values written in the file).
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from pathlib import Path

from .errors import DataError, SchemaError


@dataclass(frozen=True)
class Table:
    """An immutable parsed CSV: header names plus rows of text cells."""

    path: Path
    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    @classmethod
    def read(cls, path) -> "Table":
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise DataError(f"input {path} is not readable: {exc}") from exc
        header = None
        rows = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            cells = tuple(cell.strip() for cell in line.split(","))
            if header is None:
                header = cells
            elif len(cells) != len(header):
                raise DataError(f"{path}:{lineno}: expected {len(header)} "
                                f"cells, got {len(cells)}")
            else:
                rows.append(cells)
        if header is None:
            raise DataError(f"input {path} has no header row")
        return cls(path=path, header=header, rows=tuple(rows))

    def require(self, columns, kind: str) -> None:
        """Check the schema for ``kind``: all ``columns`` present, data nonempty."""
        missing = [name for name in columns if name not in self.header]
        if missing:
            raise SchemaError(f"{kind} input {self.path} is missing columns: "
                              + ", ".join(missing))
        if not self.rows:
            raise DataError(f"input {self.path} has no data rows")

    def column(self, name: str) -> list[str]:
        if name not in self.header:
            raise SchemaError(f"input {self.path} has no column {name!r}")
        i = self.header.index(name)
        return [row[i] for row in self.rows]

    def floats(self, name: str) -> list[float]:
        try:
            return [float(cell) for cell in self.column(name)]
        except ValueError as exc:
            raise DataError(f"column {name!r} in {self.path} is not numeric: "
                            f"{exc}") from exc

    def decimals(self, name: str) -> list[Decimal]:
        try:
            return [Decimal(cell) for cell in self.column(name)]
        except InvalidOperation as exc:
            raise DataError(f"column {name!r} in {self.path} is not "
                            "numeric") from exc
