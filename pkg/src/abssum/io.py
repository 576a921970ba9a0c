"""Matrix files.

One matrix per file, stored as a JSON object::

    {"rows": 2, "cols": 2, "data": [[re, im], [re, im], ...]}

``data`` is row-major.  Numbers are written with 17 significant digits, which
round-trips every double exactly.
"""

from __future__ import annotations

import json
import math
import os
from pathlib import Path

import numpy as np

from .errors import NonFinite
from .matlin import as_matrix


class MatrixFileError(ValueError):
    pass


def _num(x: float) -> str:
    return format(float(x), ".17g")


def dumps_matrix(a) -> str:
    a = as_matrix(a)
    rows, cols = a.shape
    pairs = ", ".join(f"[{_num(z.real)}, {_num(z.imag)}]" for z in a.reshape(-1))
    return f'{{"rows": {rows}, "cols": {cols}, "data": [{pairs}]}}\n'


def loads_matrix(text: str) -> np.ndarray:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"not a valid matrix file: {exc}") from None
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError, ValueError):
        raise MatrixFileError("matrix file needs integer 'rows', 'cols' and a 'data' list") from None
    if rows < 1 or cols < 1:
        raise MatrixFileError(f"invalid dimensions {rows}x{cols}")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise MatrixFileError(f"declared {rows}x{cols} but found {len(data) if isinstance(data, list) else '?'} entries")
    out = np.empty(rows * cols, dtype=np.complex128)
    for i, pair in enumerate(data):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise MatrixFileError(f"entry {i} is not an [re, im] pair")
        re, im = float(pair[0]), float(pair[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise NonFinite(f"entry {i} is not finite")
        out[i] = complex(re, im)
    return out.reshape(rows, cols)


def write_matrix(path: str | os.PathLike, a) -> Path:
    path = Path(path)
    path.write_text(dumps_matrix(a))
    return path


def read_matrix(path: str | os.PathLike) -> np.ndarray:
    return loads_matrix(Path(path).read_text())


def write_tuple(directory: str | os.PathLike, stack, prefix: str = "A") -> list[str]:
    """Write each member to ``<directory>/<prefix>NN.json``; returns the ordered paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    width = max(2, len(str(len(stack))))
    paths = []
    for k, a in enumerate(stack, start=1):
        paths.append(str(write_matrix(directory / f"{prefix}{k:0{width}d}.json", a)))
    return paths


def read_tuple(paths) -> list[np.ndarray]:
    return [read_matrix(p) for p in paths]
