"""CSV input layer: comment handling, typed columns, schema validation."""

from decimal import Decimal
from pathlib import Path

import pytest

from plotkit import REQUIRED_COLUMNS, DataError, SchemaError, Table

DATA = Path(__file__).resolve().parent / "data"


def _write(tmp_path, text, name="t.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestRead:
    def test_comments_and_blanks_are_skipped(self, tmp_path):
        """Lines starting with '#' and empty lines never become data."""
        path = _write(tmp_path, "# provenance\n\n# opt = 1\na,b\n1,2\n\n3,4\n")
        table = Table.read(path)
        assert table.header == ("a", "b")
        assert table.rows == (("1", "2"), ("3", "4"))

    def test_cells_are_kept_verbatim(self, tmp_path):
        """Whitespace is trimmed but cell text is otherwise untouched."""
        path = _write(tmp_path, "a,b\n 0.50 ,1e-3\n")
        assert Table.read(path).rows == (("0.50", "1e-3"),)

    def test_missing_file_raises(self, tmp_path):
        with pytest.raises(DataError, match="not readable"):
            Table.read(tmp_path / "absent.csv")

    def test_ragged_row_raises(self, tmp_path):
        path = _write(tmp_path, "a,b\n1,2,3\n")
        with pytest.raises(DataError, match="expected 2 cells"):
            Table.read(path)

    def test_file_with_only_comments_raises(self, tmp_path):
        path = _write(tmp_path, "# nothing\n# here\n")
        with pytest.raises(DataError, match="no header"):
            Table.read(path)

    def test_header_only_file_has_zero_rows(self, tmp_path):
        """A header-only file parses; emptiness is a schema-stage error."""
        path = _write(tmp_path, "a,b\n")
        assert Table.read(path).rows == ()


class TestColumns:
    def test_floats_and_decimals(self, tmp_path):
        path = _write(tmp_path, "x,y\n1.5,0.25\n-2,1e-3\n")
        table = Table.read(path)
        assert table.floats("x") == [1.5, -2.0]
        assert table.decimals("y") == [Decimal("0.25"), Decimal("1e-3")]

    def test_decimals_are_exact_text_values(self, tmp_path):
        """Decimal parsing preserves the written value where float rounds."""
        path = _write(tmp_path, "v\n0.1\n")
        table = Table.read(path)
        assert table.decimals("v")[0] == Decimal("0.1")
        assert Decimal(table.floats("v")[0]) != Decimal("0.1")

    def test_unknown_column_raises(self, tmp_path):
        path = _write(tmp_path, "a\n1\n")
        with pytest.raises(SchemaError, match="no column 'b'"):
            Table.read(path).column("b")

    def test_non_numeric_column_raises(self, tmp_path):
        path = _write(tmp_path, "a\nhello\n")
        table = Table.read(path)
        with pytest.raises(DataError, match="not numeric"):
            table.floats("a")
        with pytest.raises(DataError, match="not numeric"):
            table.decimals("a")


class TestRequire:
    def test_missing_columns_are_listed_in_schema_order(self, tmp_path):
        path = _write(tmp_path, "k\n1\n")
        with pytest.raises(SchemaError) as err:
            Table.read(path).require(("k", "spacing_m", "acquisition"),
                                     "contour")
        assert "missing columns: spacing_m, acquisition" in str(err.value)

    def test_header_only_input_raises_after_schema_passes(self, tmp_path):
        path = _write(tmp_path, "k,expected_wakeups\n")
        with pytest.raises(DataError, match="no data rows"):
            Table.read(path).require(("k", "expected_wakeups"), "count")

    def test_fixtures_satisfy_their_schemas(self):
        """The bundled result files match the documented column layouts."""
        for kind, name in [("count", "sense.csv"),
                           ("surface", "place_grid.csv"),
                           ("contour", "place_grid.csv"),
                           ("delay", "simulate.csv"),
                           ("convergence", "compare_curves.csv")]:
            Table.read(DATA / name).require(REQUIRED_COLUMNS[kind], kind)
