"""
Shared utility functions for HHLCircuits.

Reading MatrixFile documents, writing result documents and sweep tables.
"""

import sys
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import numpy as np
import orjson
import pandas as pd

from .linalg import ComplexMatrix, ComplexVector, ValidationError

SWEEP_COLUMNS = ["r", "fidelity", "probability"]
CSV_FLOAT_FORMAT = "%.9g"


class DocumentError(ValidationError):
    """Raised when an input document is malformed."""
    pass


def encode_complex_array(values: Sequence[complex]) -> List[List[float]]:
    """
    Flatten complex numbers into [re, im] pairs.

    Example:
        >>> encode_complex_array([1 + 2j, 3])
        [[1.0, 2.0], [3.0, 0.0]]
    """
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=np.complex128).reshape(-1)]


def decode_complex_array(pairs: Any) -> np.ndarray:
    """Inverse of encode_complex_array; accepts bare reals as well as [re, im] pairs."""
    if not isinstance(pairs, list):
        raise DocumentError(f"entries must be an array, got {type(pairs).__name__}")
    values = []
    for i, item in enumerate(pairs):
        if isinstance(item, (int, float)) and not isinstance(item, bool):
            values.append(complex(item, 0.0))
        elif (
            isinstance(item, list)
            and len(item) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in item)
        ):
            values.append(complex(item[0], item[1]))
        else:
            raise DocumentError(f"entry {i} must be [re, im], got {item!r}")
    return np.array(values, dtype=np.complex128)


def parse_matrix_document(document: Any) -> ComplexMatrix:
    """
    Turn a {"rows", "cols", "entries"} document into a matrix.

    Raises:
        DocumentError: If a field is missing or the entry count is wrong.
    """
    if not isinstance(document, dict):
        raise DocumentError("matrix document must be a JSON object")
    missing = [key for key in ("rows", "cols", "entries") if key not in document]
    if missing:
        raise DocumentError(f"matrix document is missing: {', '.join(missing)}")
    rows, cols = document["rows"], document["cols"]
    if not all(isinstance(x, int) and not isinstance(x, bool) and x > 0 for x in (rows, cols)):
        raise DocumentError(f"rows and cols must be positive integers, got {rows!r} x {cols!r}")
    entries = decode_complex_array(document["entries"])
    if entries.shape[0] != rows * cols:
        raise DocumentError(
            f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {entries.shape[0]}"
        )
    return entries.reshape(rows, cols)


def matrix_document(M: ComplexMatrix) -> Dict[str, Any]:
    M = np.asarray(M, dtype=np.complex128)
    return {"rows": M.shape[0], "cols": M.shape[1], "entries": encode_complex_array(M)}


def _read_json(path: Union[str, Path]) -> Any:
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise DocumentError(f"cannot read {path}: {e}")
    try:
        return orjson.loads(data)
    except orjson.JSONDecodeError as e:
        raise DocumentError(f"{path} is not valid JSON: {e}")


def load_matrix(path: Union[str, Path]) -> ComplexMatrix:
    """Read a MatrixFile."""
    return parse_matrix_document(_read_json(path))


def load_vector(path: Union[str, Path]) -> ComplexVector:
    """Read a MatrixFile holding a single column (or row)."""
    M = load_matrix(path)
    if 1 not in M.shape:
        raise DocumentError(f"{path} holds a {M.shape[0]}x{M.shape[1]} matrix, expected a vector")
    return M.reshape(-1)


def dumps_json(document: Any) -> bytes:
    """Deterministic JSON: sorted keys, 2-space indent, trailing newline, lossless floats."""
    return orjson.dumps(
        document,
        option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_APPEND_NEWLINE | orjson.OPT_SERIALIZE_NUMPY,
    )


def records_to_frame(records: Sequence[Any]) -> pd.DataFrame:
    """SweepRecord-like objects to a DataFrame with columns r, fidelity, probability."""
    return pd.DataFrame(
        [[float(getattr(rec, col)) for col in SWEEP_COLUMNS] for rec in records],
        columns=SWEEP_COLUMNS,
        dtype=float,
    )


def records_to_csv(records: Sequence[Any]) -> str:
    """CSV with header r,fidelity,probability, 9 significant digits, LF endings."""
    return records_to_frame(records).to_csv(
        index=False,
        float_format=CSV_FLOAT_FORMAT,
        lineterminator="\n",
    )


def records_to_json(records: Sequence[Any]) -> bytes:
    return dumps_json(records_to_frame(records).to_dict(orient="records"))


def write_output(payload: Union[str, bytes], destination: str) -> None:
    """
    Write to a file, or to stdout when destination is "-".

    Args:
        payload: Text or UTF-8 bytes.
        destination: File path or "-".
    """
    data = payload.encode("utf-8") if isinstance(payload, str) else payload
    if destination == "-":
        sys.stdout.write(data.decode("utf-8"))
        sys.stdout.flush()
    else:
        Path(destination).write_bytes(data)
