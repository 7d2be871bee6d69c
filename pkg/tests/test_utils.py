"""
Unit tests for src/utils.py
"""

import numpy as np
import orjson
import pandas as pd
import pytest

from src.example2x2 import SweepRecord
from src.linalg import ValidationError
from src.utils import (
    DocumentError,
    decode_complex_array,
    dumps_json,
    encode_complex_array,
    load_matrix,
    load_vector,
    matrix_document,
    parse_matrix_document,
    records_to_csv,
    records_to_frame,
    records_to_json,
    write_output,
)


@pytest.fixture
def records():
    """Two sweep points."""
    return [
        SweepRecord(r=2.0, fidelity=0.9994748013, probability=0.3232233047),
        SweepRecord(r=4.0, fidelity=0.99999813068, probability=0.0238337967714),
    ]


@pytest.fixture
def matrix_file(tmp_path):
    """The example matrix written as a MatrixFile."""
    path = tmp_path / "A.json"
    path.write_bytes(orjson.dumps({
        "rows": 2,
        "cols": 2,
        "entries": [[1.5, 0], [0.5, 0], [0.5, 0], [1.5, 0]],
    }))
    return path


class TestComplexArrays:
    """Test encode_complex_array and decode_complex_array."""

    def test_encode(self):
        """Test [re, im] pairs."""
        assert encode_complex_array([1 + 2j, 3]) == [[1.0, 2.0], [3.0, 0.0]]

    def test_decode_accepts_reals(self):
        """Test that bare numbers decode as real entries."""
        np.testing.assert_array_equal(decode_complex_array([1, [0, 2]]), [1, 2j])

    @pytest.mark.parametrize("bad", [[[1, 2, 3]], [["a", 0]], [True], "entries"])
    def test_decode_rejects(self, bad):
        """Test malformed entries."""
        with pytest.raises(DocumentError):
            decode_complex_array(bad)


class TestMatrixDocument:
    """Test parse_matrix_document and matrix_document."""

    def test_parse(self):
        """Test row-major parsing."""
        M = parse_matrix_document({"rows": 2, "cols": 1, "entries": [[1, 0], [0, 1]]})
        np.testing.assert_array_equal(M, [[1], [1j]])

    def test_missing_fields(self):
        """Test that all missing fields are named."""
        with pytest.raises(DocumentError) as exc_info:
            parse_matrix_document({"rows": 2})
        assert "cols" in str(exc_info.value)
        assert "entries" in str(exc_info.value)

    def test_wrong_count(self):
        """Test that rows * cols entries are required."""
        with pytest.raises(DocumentError) as exc_info:
            parse_matrix_document({"rows": 2, "cols": 2, "entries": [[1, 0]]})
        assert "expected 4 entries" in str(exc_info.value)

    def test_bad_shape(self):
        """Test that rows and cols must be positive integers."""
        with pytest.raises(DocumentError):
            parse_matrix_document({"rows": 0, "cols": 2, "entries": []})

    def test_not_an_object(self):
        """Test that a bare array is rejected."""
        with pytest.raises(DocumentError):
            parse_matrix_document([1, 2])

    def test_document_round_trip(self):
        """Test that matrix_document parses back to the same matrix."""
        M = np.array([[1 + 1j, 2], [3, -4j]])
        np.testing.assert_array_equal(parse_matrix_document(matrix_document(M)), M)

    def test_is_validation_error(self):
        """Test that document errors map to the validation exit code."""
        assert issubclass(DocumentError, ValidationError)
        assert issubclass(DocumentError, ValueError)


class TestLoad:
    """Test load_matrix and load_vector."""

    def test_load_matrix(self, matrix_file):
        """Test reading a MatrixFile from disk."""
        np.testing.assert_array_equal(load_matrix(matrix_file), [[1.5, 0.5], [0.5, 1.5]])

    def test_load_column_vector(self, tmp_path):
        """Test reading a single-column file as a vector."""
        path = tmp_path / "b.json"
        path.write_bytes(orjson.dumps({"rows": 2, "cols": 1, "entries": [[1, 0], [0, 0]]}))
        np.testing.assert_array_equal(load_vector(path), [1, 0])

    def test_load_vector_rejects_matrix(self, matrix_file):
        """Test that a 2x2 file is not a vector."""
        with pytest.raises(DocumentError) as exc_info:
            load_vector(matrix_file)
        assert "expected a vector" in str(exc_info.value)

    def test_missing_file(self, tmp_path):
        """Test that an unreadable path raises DocumentError."""
        with pytest.raises(DocumentError) as exc_info:
            load_matrix(tmp_path / "nope.json")
        assert "cannot read" in str(exc_info.value)

    def test_invalid_json(self, tmp_path):
        """Test that malformed JSON raises DocumentError."""
        path = tmp_path / "bad.json"
        path.write_text("{rows: 2")
        with pytest.raises(DocumentError) as exc_info:
            load_matrix(path)
        assert "not valid JSON" in str(exc_info.value)


class TestDumpsJson:
    """Test dumps_json function."""

    def test_sorted_indented_newline(self):
        """Test deterministic layout."""
        out = dumps_json({"b": 1, "a": [1.5]})
        assert out == b'{\n  "a": [\n    1.5\n  ],\n  "b": 1\n}\n'

    def test_lossless_floats(self):
        """Test that floats survive a round trip exactly."""
        value = 0.1 + 0.2
        assert orjson.loads(dumps_json({"x": value}))["x"] == value

    def test_numpy_scalars(self):
        """Test that numpy floats serialize."""
        assert orjson.loads(dumps_json({"x": np.float64(0.25)}))["x"] == 0.25


class TestSweepTables:
    """Test records_to_frame, records_to_csv and records_to_json."""

    def test_frame_columns(self, records):
        """Test the column order."""
        assert list(records_to_frame(records).columns) == ["r", "fidelity", "probability"]

    def test_csv(self, records):
        """Test nine significant digits and LF endings."""
        assert records_to_csv(records) == (
            "r,fidelity,probability\n"
            "2,0.999474801,0.323223305\n"
            "4,0.999998131,0.0238337968\n"
        )

    def test_csv_reparses(self, records, tmp_path):
        """Test that pandas reads the table back with the same header."""
        path = tmp_path / "sweep.csv"
        path.write_text(records_to_csv(records))
        frame = pd.read_csv(path)
        assert list(frame.columns) == ["r", "fidelity", "probability"]
        assert len(frame) == 2

    def test_json(self, records):
        """Test the JSON table as a list of row objects."""
        rows = orjson.loads(records_to_json(records))
        assert rows[0] == {"r": 2.0, "fidelity": 0.9994748013, "probability": 0.3232233047}

    def test_empty(self):
        """Test that no records still produce a header."""
        assert records_to_csv([]) == "r,fidelity,probability\n"


class TestWriteOutput:
    """Test write_output function."""

    def test_stdout(self, capsys):
        """Test that - writes to stdout."""
        write_output(b"hello\n", "-")
        assert capsys.readouterr().out == "hello\n"

    def test_file(self, tmp_path):
        """Test writing text to a file."""
        path = tmp_path / "out.txt"
        write_output("line\n", str(path))
        assert path.read_bytes() == b"line\n"
