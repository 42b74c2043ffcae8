"""
Reading and writing the plain-text files the command line consumes.

Point files hold one point per line, either `x y z` or `theta phi`, detected
from the column count of the first data line. Weight files hold one value
per line. Enclosure files are read through a registry of layout adapters;
`rect` is the whitespace rectangle layout `theta_lo theta_hi phi_lo phi_hi`
and `cap` is `x y z gamma`. Blank lines and lines starting with `#` are
skipped everywhere. Values are written with 17 significant digits so that a
written file re-reads to the same doubles.
"""

from __future__ import annotations

import math
import os
from collections.abc import Callable, Iterator
from pathlib import Path
from typing import IO

import numpy as np

from ..geometry.enclosures import Enclosure, EnclosureSet, SphericalCap, SphericalRectangle
from ..geometry.points import PointSet, SpherePoint
from ..util.constants import err, logger
from ..util.exceptions import EnclosureError, GeometryError, IngestError, UsageError
from ..util.print import format_float, metadata_lines
from ..util.types import FloatArray

PathLike = str | os.PathLike[str]
EnclosureAdapter = Callable[[list[float]], Enclosure]

########################################################
#              Line reader
########################################################


def _fail(line: int, error: str) -> IngestError:
    return IngestError(err.INGEST_ERROR.format(line=line, error=error), line)


def _rows(path: PathLike) -> Iterator[tuple[int, list[float]]]:
    """(line number, values) for every data line."""
    try:
        handle = open(path, encoding="utf-8")
    except OSError as e:
        raise UsageError(err.USAGE_ERROR.format(error=f"cannot read {path}: {e}")) from e
    with handle:
        for number, raw in enumerate(handle, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            try:
                values = [float(token) for token in text.replace(",", " ").split()]
            except ValueError as e:
                raise _fail(number, f"not a number ({e})") from e
            if not all(math.isfinite(v) for v in values):
                raise _fail(number, "non-finite value")
            yield number, values


def _table(path: PathLike, allowed: tuple[int, ...]) -> tuple[list[int], FloatArray]:
    lines: list[int] = []
    values: list[list[float]] = []
    width: int | None = None
    for number, row in _rows(path):
        if width is None:
            if len(row) not in allowed:
                expected = " or ".join(str(a) for a in allowed)
                raise _fail(number, f"expected {expected} columns, got {len(row)}")
            width = len(row)
        elif len(row) != width:
            raise _fail(number, f"expected {width} columns, got {len(row)}")
        lines.append(number)
        values.append(row)
    if width is None:
        raise _fail(0, f"{path} holds no data")
    return lines, np.array(values, dtype=np.float64)


########################################################
#              Points and weights
########################################################


def read_points(path: PathLike) -> PointSet:
    lines, table = _table(path, (3, 2))
    try:
        if table.shape[1] == 3:
            return PointSet(table)
        return PointSet.from_spherical(table[:, 0], table[:, 1])
    except GeometryError as e:
        norms = np.abs(np.linalg.norm(table, axis=1) - 1.0) if table.shape[1] == 3 else None
        line = lines[int(np.argmax(norms))] if norms is not None else lines[0]
        raise _fail(line, e.message) from e


def read_weights(path: PathLike) -> FloatArray:
    _, table = _table(path, (1,))
    return table[:, 0]


def read_samples(path: PathLike, n: int) -> FloatArray:
    """One sample value per line, in the order of the n rule nodes."""
    lines, table = _table(path, (1,))
    if table.shape[0] != n:
        raise _fail(lines[-1], f"expected {n} samples, got {table.shape[0]}")
    return table[:, 0]


def write_points(
    stream: IO[str], points: PointSet, metadata: dict[str, object] | None = None
) -> None:
    """Cartesian rows, whatever layout the points were read from."""
    for line in metadata_lines(metadata or {}):
        stream.write(line + "\n")
    for x, y, z in points.xyz:
        stream.write(f"{format_float(x)} {format_float(y)} {format_float(z)}\n")


def write_weights(
    stream: IO[str], weights: FloatArray, metadata: dict[str, object] | None = None
) -> None:
    for line in metadata_lines(metadata or {}):
        stream.write(line + "\n")
    for w in np.asarray(weights, dtype=np.float64):
        stream.write(format_float(float(w)) + "\n")


def write_values(
    stream: IO[str],
    points: PointSet,
    values: FloatArray,
    metadata: dict[str, object] | None = None,
) -> None:
    """`x y z value` rows, e.g. a polynomial evaluated on a grid."""
    for line in metadata_lines(metadata or {}):
        stream.write(line + "\n")
    for (x, y, z), v in zip(points.xyz, np.asarray(values, dtype=np.float64)):
        stream.write(
            f"{format_float(x)} {format_float(y)} {format_float(z)} {format_float(float(v))}\n"
        )


########################################################
#              Enclosure adapters
########################################################


ENCLOSURE_FORMATS: dict[str, tuple[int, EnclosureAdapter]] = {}


def register_format(name: str, columns: int) -> Callable[[EnclosureAdapter], EnclosureAdapter]:
    """Register an enclosure layout that parses one line of `columns` values."""

    def decorator(adapter: EnclosureAdapter) -> EnclosureAdapter:
        ENCLOSURE_FORMATS[name] = (columns, adapter)
        return adapter

    return decorator


@register_format("rect", 4)
def _rect(row: list[float]) -> Enclosure:
    return SphericalRectangle(*row)


@register_format("cap", 4)
def _cap(row: list[float]) -> Enclosure:
    x, y, z, gamma = row
    return SphericalCap(SpherePoint.from_array(np.array([x, y, z])), gamma)


def ingest_enclosures(path: PathLike, fmt: str = "rect") -> EnclosureSet:
    """Read N enclosures and compute rad and ρ.

    Raises:
        IngestError: on malformed lines (with their line number) or an empty file.
        UsageError: on an unknown layout.
    """
    if fmt not in ENCLOSURE_FORMATS:
        known = ", ".join(sorted(ENCLOSURE_FORMATS))
        raise UsageError(err.USAGE_ERROR.format(error=f"unknown format {fmt!r} (known: {known})"))
    columns, adapter = ENCLOSURE_FORMATS[fmt]

    elements = []
    for number, row in _rows(path):
        if len(row) != columns:
            raise _fail(number, f"expected {columns} columns, got {len(row)}")
        try:
            elements.append(adapter(row))
        except (EnclosureError, GeometryError) as e:
            raise _fail(number, e.message) from e
    if not elements:
        raise _fail(0, f"{path} holds no enclosures")

    enclosures = EnclosureSet(tuple(elements))
    stats = enclosures.stats
    logger.info(
        "Read %d %s enclosures from %s: rad = %.6e, ρ = %.6e",
        enclosures.n,
        fmt,
        Path(path).name,
        stats.rad,
        stats.rho,
    )
    return enclosures


__all__ = [
    "ENCLOSURE_FORMATS",
    "ingest_enclosures",
    "read_points",
    "read_samples",
    "read_weights",
    "register_format",
    "write_points",
    "write_values",
    "write_weights",
]
