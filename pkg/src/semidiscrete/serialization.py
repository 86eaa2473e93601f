"""JSON and CSV helpers; rationals travel as ``"p/q"`` strings."""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .order import Stencil


def _default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(payload) -> str:
    return json.dumps(payload, default=_default, sort_keys=True, indent=2) + "\n"


def load_stencil(path) -> Stencil:
    return Stencil.from_dict(json.loads(Path(path).read_text()))


def save_stencil(stencil: Stencil, path) -> None:
    Path(path).write_text(dumps(stencil.to_dict()))


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()
