"""Fixed-column CSV and JSON formats for signals, fields, point sets and density tables.

Floats are written with ``repr`` so files round-trip exactly and are
byte-identical across runs.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .pointset import DensityReport, PointSet
from .report import _clean
from .signal import SampledSignal, TimeGrid
from .stft import PhaseGrid, STFTField

SIGNAL_COLUMNS = ("t", "re", "im")
FIELD_COLUMNS = ("x", "y", "re", "im", "modulus")
POINT_COLUMNS = ("x", "y")
DENSITY_COLUMNS = ("R", "max_count", "min_count", "norm_max", "norm_min")


def _table(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _read_table(path, header):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(c.strip() for c in rows[0]) != tuple(header):
        raise ValueError(f"{path}: expected header {','.join(header)}")
    try:
        return np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=float).reshape(-1, len(header))
    except ValueError as exc:
        raise ValueError(f"{path}: non-numeric entry ({exc})") from None


def signal_csv(sig: SampledSignal) -> str:
    return _table(SIGNAL_COLUMNS, zip(sig.t, sig.values.real, sig.values.imag))


def read_signal_csv(path, label: str = "") -> SampledSignal:
    data = _read_table(path, SIGNAL_COLUMNS)
    t = data[:, 0]
    if len(t) < 2:
        raise ValueError(f"{path}: need at least two samples")
    step = float(t[1] - t[0])
    grid = TimeGrid(float(-t[0]), step)
    if grid.count != len(t) or not np.allclose(grid.nodes, t, atol=1e-9 * max(1.0, abs(t[0]))):
        raise ValueError(f"{path}: samples are not on a symmetric uniform grid")
    return SampledSignal(grid, data[:, 1] + 1j * data[:, 2], label=label or Path(path).stem)


def field_csv(fld: STFTField) -> str:
    X, Y = np.meshgrid(fld.xs, fld.ys, indexing="ij")
    v = fld.values.ravel()
    return _table(FIELD_COLUMNS, zip(X.ravel(), Y.ravel(), v.real, v.imag, np.abs(v)))


def field_to_dict(fld: STFTField) -> dict:
    return _clean({
        "source": fld.source,
        "signal_norm": fld.signal_norm,
        "x_range": list(fld.grid.x_range),
        "y_range": list(fld.grid.y_range),
        "shape": list(fld.values.shape),
        "re": fld.values.real.ravel(),
        "im": fld.values.imag.ravel(),
    })


def field_json(fld: STFTField) -> str:
    return json.dumps(field_to_dict(fld), sort_keys=True) + "\n"


def field_from_dict(d: dict) -> STFTField:
    grid = PhaseGrid(d["x_range"], d["y_range"])
    shape = tuple(d["shape"])
    if shape != grid.shape:
        raise ValueError("field shape does not match its grid")
    values = (np.asarray(d["re"], float) + 1j * np.asarray(d["im"], float)).reshape(shape)
    norm = d.get("signal_norm", "nan")
    return STFTField(grid, values, d.get("source", ""), float(norm))


def points_csv(ps) -> str:
    pts = ps.points if isinstance(ps, PointSet) else np.asarray(ps, float).reshape(-1, 2)
    return _table(POINT_COLUMNS, pts)


def read_points_csv(path, declared_separation=None) -> PointSet:
    return PointSet(_read_table(path, POINT_COLUMNS), declared_separation)


def density_csv(rep: DensityReport) -> str:
    return _table(DENSITY_COLUMNS, rep.rows())


def density_json(rep: DensityReport) -> str:
    return json.dumps(_clean(rep.to_dict()), sort_keys=True, indent=2) + "\n"


def write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


__all__ = [
    "SIGNAL_COLUMNS", "FIELD_COLUMNS", "POINT_COLUMNS", "DENSITY_COLUMNS",
    "signal_csv", "read_signal_csv", "field_csv", "field_to_dict", "field_json",
    "field_from_dict", "points_csv", "read_points_csv", "density_csv", "density_json",
    "write_text",
]
