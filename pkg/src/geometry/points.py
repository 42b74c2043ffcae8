"""
Points on the unit sphere with dual Cartesian and spherical-coordinate views.

A point x is parameterized as

    x = (sin θ cos φ, sin θ sin φ, cos θ),   0 ≤ θ ≤ π,  0 ≤ φ < 2π.

`PointSet` stores the Cartesian coordinates as a read-only (N, 3) array; every
operation in the package consumes point sets in that form. The module also
ships a few classical point sets (platonic solids) that serve as small exact
designs, and seeded random point generators.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

from ..util.constants import config, err
from ..util.exceptions import GeometryError
from ..util.types import ArrayLike, FloatArray

TWO_PI = 2.0 * math.pi

########################################################
#              Private helpers
########################################################


def _wrap_azimuth(phi: FloatArray) -> FloatArray:
    phi = np.where(phi < 0.0, phi + TWO_PI, phi)
    return np.where(phi >= TWO_PI, 0.0, phi)


def _spherical_to_cartesian(theta: ArrayLike, phi: ArrayLike) -> FloatArray:
    theta = np.asarray(theta, dtype=np.float64)
    phi = np.asarray(phi, dtype=np.float64)
    sin_theta = np.sin(theta)
    return np.stack(
        (sin_theta * np.cos(phi), sin_theta * np.sin(phi), np.cos(theta)), axis=-1
    )


def _check_unit(xyz: FloatArray) -> None:
    deviation = np.abs(np.linalg.norm(xyz, axis=-1) - 1.0)
    if deviation.size and (worst := float(deviation.max())) > config.UNIT_TOL:
        raise GeometryError(
            err.GEOMETRY_ERROR.format(
                error=f"point is not on the unit sphere (| ||x|| - 1 | = {worst:.3e})"
            )
        )


########################################################
#              Single point
########################################################


@dataclass(frozen=True)
class SpherePoint:
    """A unit vector in R^3."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        _check_unit(np.array([self.x, self.y, self.z]))

    @classmethod
    def from_spherical(cls, theta: float, phi: float) -> SpherePoint:
        x, y, z = _spherical_to_cartesian(theta, phi)
        return cls(float(x), float(y), float(z))

    @classmethod
    def from_array(cls, vector: ArrayLike) -> SpherePoint:
        x, y, z = np.asarray(vector, dtype=np.float64).reshape(3)
        return cls(float(x), float(y), float(z))

    @property
    def theta(self) -> float:
        return math.atan2(math.hypot(self.x, self.y), self.z)

    @property
    def phi(self) -> float:
        return float(_wrap_azimuth(np.array(math.atan2(self.y, self.x))))

    def as_array(self) -> FloatArray:
        return np.array([self.x, self.y, self.z], dtype=np.float64)


########################################################
#              Point sets
########################################################


@dataclass(frozen=True, eq=False)
class PointSet:
    """An ordered set of N points on the unit sphere.

    Distinctness is not enforced at construction: coincident points are legal
    input for distance queries (their separation is simply zero). Operations
    that need a fundamental system detect the resulting rank loss themselves.
    """

    xyz: FloatArray

    def __post_init__(self) -> None:
        xyz = np.array(self.xyz, dtype=np.float64, copy=True)
        if xyz.ndim == 1 and xyz.size == 3:
            xyz = xyz.reshape(1, 3)
        if xyz.ndim != 2 or xyz.shape[1] != 3:
            raise GeometryError(
                err.GEOMETRY_ERROR.format(error=f"expected an (N, 3) array, got {xyz.shape}")
            )
        if not np.all(np.isfinite(xyz)):
            raise GeometryError(err.GEOMETRY_ERROR.format(error="non-finite coordinates"))
        _check_unit(xyz)
        xyz.setflags(write=False)
        object.__setattr__(self, "xyz", xyz)

    @classmethod
    def from_cartesian(cls, xyz: ArrayLike, normalize: bool = False) -> PointSet:
        """Build a point set from Cartesian rows, optionally projecting onto the sphere."""
        xyz = np.asarray(xyz, dtype=np.float64)
        if normalize:
            norms = np.linalg.norm(xyz, axis=-1, keepdims=True)
            if np.any(norms == 0.0):
                raise GeometryError(err.GEOMETRY_ERROR.format(error="cannot normalize zero vector"))
            xyz = xyz / norms
        return cls(xyz)

    @classmethod
    def from_spherical(cls, theta: ArrayLike, phi: ArrayLike) -> PointSet:
        return cls(_spherical_to_cartesian(np.atleast_1d(theta), np.atleast_1d(phi)))

    @classmethod
    def from_points(cls, points: Iterable[SpherePoint]) -> PointSet:
        return cls(np.array([p.as_array() for p in points], dtype=np.float64).reshape(-1, 3))

    def spherical(self) -> tuple[FloatArray, FloatArray]:
        """Return (θ, φ) with θ ∈ [0, π] and φ ∈ [0, 2π)."""
        x, y, z = self.xyz.T
        theta = np.arctan2(np.hypot(x, y), z)
        phi = _wrap_azimuth(np.arctan2(y, x))
        return theta, phi

    def take(self, indices: ArrayLike) -> PointSet:
        return PointSet(self.xyz[np.asarray(indices)])

    @property
    def n(self) -> int:
        return int(self.xyz.shape[0])

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, index: int) -> SpherePoint:
        return SpherePoint.from_array(self.xyz[index])

    def __iter__(self) -> Iterator[SpherePoint]:
        return (SpherePoint.from_array(row) for row in self.xyz)


########################################################
#              Transformations
########################################################


def rotate(points: PointSet, axis: ArrayLike, angle: float) -> PointSet:
    """Rotate every point by `angle` radians about `axis`."""
    axis = np.asarray(axis, dtype=np.float64)
    if (length := float(np.linalg.norm(axis))) == 0.0:
        raise GeometryError(err.GEOMETRY_ERROR.format(error="rotation axis must be nonzero"))
    rotation = Rotation.from_rotvec(axis / length * angle)
    return PointSet.from_cartesian(rotation.apply(points.xyz), normalize=True)


def random_rotation(points: PointSet, seed: int | None = None) -> PointSet:
    rotation = Rotation.random(random_state=np.random.default_rng(seed))
    return PointSet.from_cartesian(rotation.apply(points.xyz), normalize=True)


########################################################
#              Point generators
########################################################


def random_points(n: int, seed: int | np.random.Generator | None = None) -> PointSet:
    """Uniformly distributed points (normalized Gaussian vectors)."""
    rng = np.random.default_rng(seed)
    return PointSet.from_cartesian(rng.standard_normal((n, 3)), normalize=True)


def tetrahedron() -> PointSet:
    """Vertices of the regular tetrahedron, a spherical 2-design with 4 points."""
    vertices = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=np.float64)
    return PointSet(vertices / math.sqrt(3.0))


def octahedron() -> PointSet:
    """Vertices of the regular octahedron, a spherical 3-design with 6 points."""
    eye = np.eye(3)
    return PointSet(np.concatenate((eye, -eye)))


def icosahedron() -> PointSet:
    """Vertices of the regular icosahedron, a spherical 5-design with 12 points."""
    golden = (1.0 + math.sqrt(5.0)) / 2.0
    vertices = []
    for a in (-1.0, 1.0):
        for b in (-golden, golden):
            vertices.extend(([0.0, a, b], [a, b, 0.0], [b, 0.0, a]))
    return PointSet.from_cartesian(vertices, normalize=True)
