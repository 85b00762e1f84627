"""Reading and writing matrices, subspaces, weights and reports.

Matrix JSON::

    {"rows": 2, "cols": 1, "entries": [[1, 0], [1, 0]]}

``entries`` is row-major; each entry is ``[re, im]`` or a bare number. An
optional ``"kind"`` (``"matrix"``, ``"subspace"``, ``"weight"``) selects how
:func:`validate_input` interprets the file. Weight files may carry ``"mu"``.
CSV files hold real matrices, one row per line, no header.

Reports are flat JSON objects written with sorted keys. Non-finite floats
are written as the strings ``"inf"``, ``"-inf"`` and ``"nan"``.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from pathlib import Path

import numpy as np

from .exceptions import InvalidInput, InvalidWeight, ParseError
from .linalg import DEFAULT_TOL, Subspace, orthonormal_range
from .oblique import DiagonalWeight

__all__ = [
    "ORTHONORMAL_WARN",
    "read_matrix",
    "read_subspace",
    "read_weight",
    "read_json",
    "validate_input",
    "matrix_to_json",
    "write_matrix",
    "dumps_report",
    "write_report",
    "write_csv",
]

log = logging.getLogger(__name__)

ORTHONORMAL_WARN = 1e-8


def read_json(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not UTF-8: {exc}", path=path) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, path=path, line=exc.lineno) from None


def _number(value, path, field):
    if isinstance(value, bool):
        raise ParseError("booleans are not numbers", path=path, field=field)
    if isinstance(value, (int, float)):
        z = complex(value)
    elif isinstance(value, list) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        z = complex(value[0], value[1])
    else:
        raise ParseError(f"expected a number or [re, im], got {value!r}", path=path, field=field)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ParseError("non-finite entry", path=path, field=field)
    return z


def _count(obj, key, path):
    v = obj.get(key)
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise ParseError(f"{key!r} must be a non-negative integer", path=path, field=key)
    return v


def _matrix_from_json(obj, path):
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object", path=path)
    rows, cols = _count(obj, "rows", path), _count(obj, "cols", path)
    entries = obj.get("entries")
    if not isinstance(entries, list):
        raise ParseError("'entries' must be a list", path=path, field="entries")
    if len(entries) != rows * cols:
        raise ParseError(
            f"expected {rows * cols} entries, found {len(entries)}", path=path, field="entries"
        )
    flat = [_number(e, path, f"entries[{i}]") for i, e in enumerate(entries)]
    return np.array(flat, dtype=np.complex128).reshape(rows, cols)


def _matrix_from_csv(path):
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            vals = []
            for j, cell in enumerate(row):
                try:
                    x = float(cell)
                except ValueError:
                    raise ParseError(
                        f"not a real number: {cell!r}", path=path, line=lineno, field=f"col {j}"
                    ) from None
                if not math.isfinite(x):
                    raise ParseError("non-finite entry", path=path, line=lineno, field=f"col {j}")
                vals.append(x)
            if rows and len(vals) != len(rows[0]):
                raise ParseError(
                    f"row has {len(vals)} columns, expected {len(rows[0])}", path=path, line=lineno
                )
            rows.append(vals)
    if not rows:
        raise ParseError("empty CSV", path=path)
    return np.array(rows, dtype=np.complex128)


def _load(path):
    path = Path(path)
    if not path.is_file():
        raise InvalidInput(f"no such file: {path}")
    if path.suffix.lower() == ".csv":
        return _matrix_from_csv(path), {}
    obj = read_json(path)
    return _matrix_from_json(obj, path), obj


def read_matrix(path):
    """Complex matrix from a JSON or CSV file."""
    return _load(path)[0]


def _as_subspace(M, path, tol):
    n, k = M.shape
    if k == 0:
        return Subspace.zero(n, tol)
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    if s[0] == 0 or s[-1] <= tol.rel_rank * s[0]:
        log.warning("%s: basis columns are dependent; using their span", path)
        return orthonormal_range(M, tol)
    polar = U @ Vh
    correction = float(np.max(np.abs(polar - M)))
    if correction > ORTHONORMAL_WARN:
        log.warning("%s: basis re-orthonormalized (correction %.3e)", path, correction)
    return Subspace(polar, tol)


def read_subspace(path, tol=DEFAULT_TOL):
    """Subspace spanned by the columns of a matrix file.

    Columns that are not orthonormal are replaced by the nearest orthonormal
    set (polar factor), with a warning when the change exceeds
    ``ORTHONORMAL_WARN``.
    """
    return _as_subspace(read_matrix(path), path, tol)


def _weight_from(M, obj, path):
    if 1 not in M.shape:
        raise ParseError("a weight must be a single row or column", path=path, field="entries")
    d = M.ravel()
    try:
        if "mu" in obj:
            mu = obj["mu"]
            if isinstance(mu, bool) or not isinstance(mu, (int, float)):
                raise ParseError("'mu' must be a number", path=path, field="mu")
            return DiagonalWeight.mu_cone(d, float(mu))
        if np.any(d.imag != 0):
            raise ParseError("complex weights need 'mu'", path=path, field="entries")
        if np.all(d.real > 0):
            return DiagonalWeight.positive_definite(d.real)
        return DiagonalWeight.semidefinite(d.real)
    except ParseError:
        raise
    except (InvalidInput, InvalidWeight) as exc:
        raise ParseError(str(exc), path=path, field="entries") from None


def read_weight(path):
    """Diagonal weight from a one-row or one-column matrix file."""
    M, obj = _load(path)
    return _weight_from(M, obj, path)


def validate_input(path, tol=DEFAULT_TOL):
    """Parse a file and check the invariants of the object it declares.

    Returns a matrix, a :class:`Subspace` or a :class:`DiagonalWeight`
    according to the ``"kind"`` field (matrix when absent or for CSV).
    """
    M, obj = _load(path)
    kind = obj.get("kind", "matrix") if isinstance(obj, dict) else "matrix"
    if kind == "matrix":
        return M
    if kind == "subspace":
        return _as_subspace(M, path, tol)
    if kind == "weight":
        return _weight_from(M, obj, path)
    raise ParseError(f"unknown kind {kind!r}", path=path, field="kind")


def matrix_to_json(M, kind=None):
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim == 1:
        M = M[:, None]
    out = {
        "rows": int(M.shape[0]),
        "cols": int(M.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in M.ravel()],
    }
    if kind is not None:
        out["kind"] = kind
    return out


def write_matrix(M, path, kind=None):
    Path(path).write_text(json.dumps(matrix_to_json(M, kind)) + "\n", encoding="utf-8")


def _plain(value):
    if isinstance(value, (np.floating, float)):
        x = float(value)
        return x if math.isfinite(x) else repr(x)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    return value


def dumps_report(report):
    """Deterministic one-line JSON for a flat report, newline-terminated."""
    flat = {}
    for key, value in report.items():
        if isinstance(value, dict):
            raise InvalidInput(f"report field {key!r} is nested")
        flat[str(key)] = _plain(value)
    return json.dumps(flat, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n"


def write_report(report, path=None, stream=None):
    text = dumps_report(report)
    if path is None:
        stream.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")
    return text


def write_csv(header, rows, path=None, stream=None):
    """CSV with ``repr`` floats so values round-trip exactly."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(float(v)) if isinstance(v, float) else str(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path is None:
        stream.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")
    return text
