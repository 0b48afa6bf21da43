"""Reading and writing dense matrices (Matrix Market and CSV).

Values are written with 17 significant digits, which is enough for an exact
binary64 round trip.
"""
from pathlib import Path

import numpy as np
import scipy.io

from .core import DimensionError, as_square_2n

__all__ = ["read_matrix", "write_matrix", "FORMATS"]

FORMATS = ("mm", "csv")
_PRECISION = 17


def _guess_format(path, fmt):
    if fmt is not None:
        if fmt not in FORMATS:
            raise ValueError(f"unknown format {fmt!r}; choose from {FORMATS}")
        return fmt
    suffix = Path(path).suffix.lower()
    if suffix in (".mm", ".mtx"):
        return "mm"
    if suffix in (".csv", ".txt"):
        return "csv"
    raise ValueError(f"cannot infer the format of {path!s}; pass fmt='mm' or 'csv'")


def _read_mm(path):
    # scipy's reader drops the sign of -0.0, so reading is done here
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ValueError(f"{path!s} is empty")
    banner = lines[0].split()
    if len(banner) != 5 or banner[0].lower() != "%%matrixmarket" or banner[1].lower() != "matrix":
        raise ValueError(f"{path!s} lacks a Matrix Market banner")
    layout, field, symmetry = (t.lower() for t in banner[2:])
    if layout not in ("array", "coordinate"):
        raise ValueError(f"unsupported Matrix Market layout {layout!r}")
    if field not in ("real", "integer", "double"):
        raise ValueError(f"unsupported Matrix Market field {field!r}")
    if symmetry not in ("general", "symmetric", "skew-symmetric"):
        raise ValueError(f"unsupported Matrix Market symmetry {symmetry!r}")
    body = [ln for ln in lines[1:] if ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise ValueError(f"{path!s} has no size line")
    size = [int(t) for t in body[0].split()]
    rows, cols = size[0], size[1]
    entries = size[2] if layout == "coordinate" else None
    body = body[1:]
    values = [tok for ln in body for tok in ln.split()]
    A = np.zeros((rows, cols))
    sign = -1.0 if symmetry == "skew-symmetric" else 1.0
    if layout == "array":
        if symmetry == "general":
            idx = [(i, j) for j in range(cols) for i in range(rows)]
        else:
            lo = 1 if symmetry == "skew-symmetric" else 0
            idx = [(i, j) for j in range(cols) for i in range(j + lo, rows)]
        if len(values) != len(idx):
            raise ValueError(f"expected {len(idx)} values, found {len(values)}")
        for (i, j), v in zip(idx, values):
            A[i, j] = float(v)
            if symmetry != "general" and i != j:
                A[j, i] = sign * A[i, j]
    else:
        if len(values) != 3 * entries:
            raise ValueError(f"expected {entries} coordinate entries")
        for k in range(entries):
            i, j = int(values[3 * k]) - 1, int(values[3 * k + 1]) - 1
            A[i, j] = float(values[3 * k + 2])
            if symmetry != "general" and i != j:
                A[j, i] = sign * A[i, j]
    return A


def read_matrix(path, fmt=None):
    """Read a real square matrix of even order.

    Matrix Market files may use the array or the coordinate layout (real or
    integer, general or symmetric). CSV files hold one row per line.

    Raises
    ------
    OSError
        if the file cannot be read.
    DimensionError
        if the matrix is not square of even order.
    ValueError
        on malformed content.
    """
    fmt = _guess_format(path, fmt)
    if fmt == "mm":
        A = _read_mm(path)
    else:
        A = np.loadtxt(path, delimiter=",", dtype=float, ndmin=2)
    return as_square_2n(A.astype(float, copy=False))


def write_matrix(path, A, fmt=None):
    """Write ``A`` so that :func:`read_matrix` returns it bit for bit."""
    fmt = _guess_format(path, fmt)
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise DimensionError("expected a 2-d array")
    if fmt == "mm":
        # a file handle stops scipy from appending ".mtx" to the name
        with open(path, "wb") as fh:
            scipy.io.mmwrite(fh, A, field="real", precision=_PRECISION)
    else:
        np.savetxt(path, A, delimiter=",", fmt=f"%.{_PRECISION - 1}e")
