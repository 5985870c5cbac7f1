"""Deterministic text output: CSV and JSON with 17 significant digits, Matrix Market."""
from __future__ import annotations

import io
import math

import numpy as np
import scipy.io
import scipy.sparse


def fmt_float(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_float(v)
    return str(v)


def to_csv(columns, rows) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_cell(row[c]) for c in columns))
    return "\n".join(lines) + "\n"


def _json(v, indent, level) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{pad}{_json(str(k), indent, 0)}: {_json(x, indent, level + 1)}" for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(v, (list, tuple, np.ndarray)):
        if not len(v):
            return "[]"
        if all(not isinstance(x, (dict, list, tuple, np.ndarray)) for x in v):
            return "[" + ", ".join(_json(x, indent, level + 1) for x in v) + "]"
        items = [pad + _json(x, indent, level + 1) for x in v]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if v is None:
        return "null"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        if math.isnan(v):
            return "null"
        txt = fmt_float(v)
        return txt if any(c in txt for c in ".eni") else txt + ".0"
    s = str(v).replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{s}"'


def to_json(obj, indent: int = 2) -> str:
    """Serialize dicts/lists/scalars; floats keep 17 digits, NaN becomes null."""
    return _json(obj, indent, 0) + "\n"


def matrix_market_text(a, comment: str = "") -> str:
    """Coordinate Matrix Market text for a dense array (symmetric tag when it applies)."""
    a = np.asarray(a, dtype=float)
    symmetric = a.shape[0] == a.shape[1] and np.array_equal(a, a.T)
    buf = io.BytesIO()
    scipy.io.mmwrite(buf, scipy.sparse.coo_matrix(a), comment=comment, field="real",
                     precision=17, symmetry="symmetric" if symmetric else "general")
    return buf.getvalue().decode("ascii")


def write_matrix_market(path, a, comment: str = "") -> None:
    with open(path, "w") as fh:
        fh.write(matrix_market_text(a, comment))


def read_matrix_market(path) -> np.ndarray:
    m = scipy.io.mmread(path)
    return m.toarray() if scipy.sparse.issparse(m) else np.asarray(m)
