"""Text formats: fields, intensities, retrieved phases and generic CSV tables.

All floats are written with 17 significant digits so 64-bit values survive a
round trip.  Files are written to a temporary sibling and renamed into place.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .wavefield import Grid, SampledField

FLOAT_FMT = "%.17g"
SPACING_RTOL = 1e-9


class FieldFormatError(ValueError):
    """A data file does not follow the expected layout."""


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return FLOAT_FMT % float(value)


def atomic_write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_csv(path, header, rows) -> Path:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return atomic_write_text(path, buf.getvalue())


def write_json(path, record) -> Path:
    return atomic_write_text(path, json.dumps(record, indent=2, sort_keys=True) + "\n")


def read_csv(path, header) -> np.ndarray:
    """Numeric table with the given header; errors cite the 1-based file line."""
    header = list(header)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            first = next(reader)
        except StopIteration:
            raise FieldFormatError(f"{path}: empty file") from None
        if [h.strip() for h in first] != header:
            raise FieldFormatError(f"{path}: header must be {','.join(header)}, got {','.join(first)}")
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise FieldFormatError(
                    f"{path}: row {line_no} has {len(row)} columns, expected {len(header)}"
                )
            try:
                rows.append([float(cell) for cell in row])
            except ValueError:
                raise FieldFormatError(f"{path}: row {line_no} has a non-numeric cell: {row}") from None
    if not rows:
        raise FieldFormatError(f"{path}: no data rows")
    data = np.array(rows, dtype=float)
    if not np.all(np.isfinite(data)):
        bad = int(np.flatnonzero(~np.all(np.isfinite(data), axis=1))[0]) + 2
        raise FieldFormatError(f"{path}: row {bad} is not finite")
    return data


def _infer_grid(x: np.ndarray, path) -> Grid:
    n = x.size
    if n < 2:
        raise FieldFormatError(f"{path}: need at least two samples")
    steps = np.diff(x)
    mean_dx = (x[-1] - x[0]) / (n - 1)
    if mean_dx <= 0:
        raise FieldFormatError(f"{path}: x must increase")
    deviation = float(np.max(np.abs(steps - mean_dx)))
    if deviation > SPACING_RTOL * mean_dx:
        raise FieldFormatError(
            f"{path}: nonuniform grid, spacing deviates by {deviation:.3g} "
            f"({deviation / mean_dx:.3g} relative, tolerance {SPACING_RTOL:g})"
        )
    k = np.arange(n)
    # prefer a spacing that regenerates the stored abscissae exactly
    for dx in (float(x[1] - x[0]), float(mean_dx)):
        if np.array_equal(x[0] + k * dx, x):
            break
    else:
        dx = float(mean_dx)
    try:
        return Grid(float(x[0]), dx, n)
    except ValueError as exc:
        raise FieldFormatError(f"{path}: {exc}") from None


def save_field(field: SampledField, path) -> Path:
    v = field.values
    return write_csv(path, ["x", "re", "im"], zip(field.x, v.real, v.imag))


def load_field(path) -> SampledField:
    data = read_csv(path, ["x", "re", "im"])
    grid = _infer_grid(data[:, 0], path)
    return SampledField(grid, data[:, 1] + 1j * data[:, 2])


def save_intensity(p, intensity, path) -> Path:
    return write_csv(path, ["p", "intensity"], zip(p, intensity))


def load_intensity(path) -> tuple[np.ndarray, np.ndarray]:
    data = read_csv(path, ["p", "intensity"])
    if np.any(data[:, 1] < 0):
        raise FieldFormatError(f"{path}: negative intensity")
    return data[:, 0], data[:, 1]


def save_phase(pr, path) -> tuple[Path, Path]:
    """``p,phase,valid`` rows plus a JSON sidecar (same stem, ``.json``) with tilt and diagnostics."""
    path = Path(path)
    csv_path = write_csv(path, ["p", "phase", "valid"], zip(pr.p, pr.phase, pr.valid_mask))
    meta = {"tilt": pr.tilt}
    for key, val in pr.diagnostics.items():
        meta[key] = _jsonable(val)
    return csv_path, write_json(path.with_suffix(".json"), meta)


def _jsonable(val):
    if isinstance(val, (complex, np.complexfloating)):
        return [float(val.real), float(val.imag)]
    if isinstance(val, (np.bool_, bool)):
        return bool(val)
    if isinstance(val, (np.integer,)):
        return int(val)
    if isinstance(val, (np.floating,)):
        return float(val)
    return val
