"""JSON encoding of matrices: ``{"rows": n, "cols": m, "re": [...], "im": [...]}``, row-major."""

from __future__ import annotations

import math

import numpy as np

from .errors import ParseError


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=np.complex128)
    rows, cols = m.shape
    flat = m.reshape(-1)
    return {
        "rows": int(rows),
        "cols": int(cols),
        "re": [float(z.real) for z in flat],
        "im": [float(z.imag) for z in flat],
    }


def matrix_from_json(d) -> np.ndarray:
    try:
        rows, cols = int(d["rows"]), int(d["cols"])
        re, im = d["re"], d.get("im")
        if im is None:
            im = [0.0] * len(re)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed matrix object: {exc}") from None
    if rows < 1 or cols < 1 or len(re) != rows * cols or len(im) != rows * cols:
        raise ParseError(f"matrix entries do not match {rows}x{cols}")
    try:
        vals = [complex(float(r), float(i)) for r, i in zip(re, im)]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"non-numeric matrix entry: {exc}") from None
    if not all(math.isfinite(v.real) and math.isfinite(v.imag) for v in vals):
        raise ParseError("matrix has non-finite entries")
    return np.array(vals, dtype=np.complex128).reshape(rows, cols)
