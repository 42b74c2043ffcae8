"""
Real spherical harmonics Y_{ℓ,k} and design matrices.

Harmonics of degree ℓ are indexed by k = 1..2ℓ+1 and flattened to ℓ² + k, so a
polynomial space of degree t has dimension (t+1)². Within a degree:

    k = 1..ℓ          cos branch,  order m = ℓ + 1 − k
    k = ℓ + 1         zonal,       order m = 0
    k = ℓ + 2..2ℓ+1   sin branch,  order m = k − ℓ − 1

and the azimuthal factor of order m is cos mφ or sin mφ. In 0-based column
terms, order m of degree ℓ sits at ℓ² + ℓ ∓ m.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache

import numpy as np

from ..geometry.points import PointSet, SpherePoint
from ..util.constants import config, err
from ..util.exceptions import DomainError, GeometryError
from ..util.types import AzimuthalBranch, FloatArray, IntArray
from .legendre import eval_legendre, iter_normalized_legendre

########################################################
#              Indexing
########################################################


def dimension(t: int) -> int:
    """dim P_t = (t+1)²."""
    return (t + 1) ** 2


@dataclass(frozen=True)
class HarmonicIndex:
    ell: int
    k: int

    def __post_init__(self) -> None:
        if self.ell < 0 or not 1 <= self.k <= 2 * self.ell + 1:
            raise DomainError(
                err.DOMAIN_ERROR.format(
                    error=f"need ℓ ≥ 0 and 1 ≤ k ≤ 2ℓ+1, got ({self.ell}, {self.k})"
                )
            )

    @classmethod
    def from_column(cls, column: int) -> HarmonicIndex:
        if column < 0:
            raise DomainError(err.DOMAIN_ERROR.format(error=f"negative column {column}"))
        ell = int(np.sqrt(column))
        while (ell + 1) ** 2 <= column:
            ell += 1
        return cls(ell, column - ell * ell + 1)

    @classmethod
    def from_order(cls, ell: int, m: int, branch: AzimuthalBranch) -> HarmonicIndex:
        if branch == "const" and m == 0:
            return cls(ell, ell + 1)
        if branch == "cos" and 1 <= m <= ell:
            return cls(ell, ell + 1 - m)
        if branch == "sin" and 1 <= m <= ell:
            return cls(ell, ell + 1 + m)
        raise DomainError(err.DOMAIN_ERROR.format(error=f"no {branch} harmonic of order {m}"))

    @property
    def column(self) -> int:
        """0-based column in a design matrix."""
        return self.ell * self.ell + self.k - 1

    @property
    def order(self) -> int:
        return abs(self.k - self.ell - 1)

    @property
    def branch(self) -> AzimuthalBranch:
        if self.k <= self.ell:
            return "cos"
        return "const" if self.k == self.ell + 1 else "sin"


def harmonic_column(ell: int, k: int) -> int:
    return HarmonicIndex(ell, k).column


def harmonic_index(column: int) -> HarmonicIndex:
    return HarmonicIndex.from_column(column)


########################################################
#              Coordinates
########################################################


def polar_parts(points: PointSet) -> tuple[FloatArray, FloatArray, FloatArray]:
    """(cos θ, sin θ, φ) per point; points within POLE_TOL of a pole are snapped onto it."""
    x, y, z = points.xyz.T
    sin_theta = np.hypot(x, y)
    radius = np.hypot(sin_theta, z)
    u, sin_theta = z / radius, sin_theta / radius
    pole = sin_theta < config.POLE_TOL
    u = np.where(pole, np.sign(z), u)
    sin_theta = np.where(pole, 0.0, sin_theta)
    phi = np.where(pole, 0.0, np.arctan2(y, x))
    return u, sin_theta, phi


########################################################
#              Design matrix
########################################################


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    """Y(X_N): entry (i, ℓ² + k − 1) is Y_{ℓ,k}(x_i)."""

    values: FloatArray
    t: int
    points: PointSet

    def __post_init__(self) -> None:
        if self.values.shape != (self.points.n, dimension(self.t)):
            raise GeometryError(
                err.GEOMETRY_ERROR.format(
                    error=f"design matrix shape {self.values.shape} does not match N and t"
                )
            )

    @property
    def n(self) -> int:
        return self.points.n

    @property
    def dim(self) -> int:
        return dimension(self.t)

    @property
    def is_square(self) -> bool:
        return self.n == self.dim

    def degree_slice(self, ell: int) -> slice:
        return slice(ell * ell, (ell + 1) ** 2)


def design_matrix(points: PointSet, t: int) -> DesignMatrix:
    """Evaluate all harmonics of degree ≤ t at every point."""
    if t < 0:
        raise DomainError(err.DOMAIN_ERROR.format(error=f"degree must be ≥ 0, got {t}"))
    if points.n < 1:
        raise GeometryError(err.GEOMETRY_ERROR.format(error="empty point set"))

    u, sin_theta, phi = polar_parts(points)
    values = np.empty((points.n, dimension(t)), dtype=np.float64)
    for m, block in iter_normalized_legendre(u, sin_theta, t):
        ells = np.arange(m, t + 1)
        if m == 0:
            values[:, ells * ells + ells] = block.T
            continue
        values[:, ells * ells + ells - m] = (block * np.cos(m * phi)).T
        values[:, ells * ells + ells + m] = (block * np.sin(m * phi)).T
    return DesignMatrix(values=values, t=t, points=points)


def eval_ylk(index: HarmonicIndex, x: SpherePoint | PointSet) -> float | FloatArray:
    """Y_{ℓ,k} at a single point or at every point of a set."""
    points = PointSet.from_points([x]) if isinstance(x, SpherePoint) else x
    u, _, phi = polar_parts(points)
    m = index.order
    radial = np.asarray(eval_legendre(index.ell, m, u))
    if index.branch == "cos":
        radial = radial * np.cos(m * phi)
    elif index.branch == "sin":
        radial = radial * np.sin(m * phi)
    return float(radial[0]) if isinstance(x, SpherePoint) else radial


########################################################
#              Azimuthal derivative
########################################################


@cache
def _azimuthal_map(t: int) -> tuple[IntArray, FloatArray]:
    source = np.arange(dimension(t))
    factor = np.zeros(dimension(t))
    for ell in range(1, t + 1):
        for m in range(1, ell + 1):
            cos_col, sin_col = ell * ell + ell - m, ell * ell + ell + m
            source[cos_col], factor[cos_col] = sin_col, -m
            source[sin_col], factor[sin_col] = cos_col, m
    return source, factor


def azimuthal_derivative(matrix: DesignMatrix) -> FloatArray:
    """∂Y/∂φ at every point: d/dφ cos mφ = −m sin mφ and d/dφ sin mφ = m cos mφ."""
    source, factor = _azimuthal_map(matrix.t)
    return matrix.values[:, source] * factor
