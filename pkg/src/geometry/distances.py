"""
Geodesic, separation, least and Hausdorff distances on the unit sphere.

All distances are geodesic (great-circle) angles in radians. Inner products
lose accuracy near ±1, where enclosure radii around 1e-12 live, so geodesic
distances are computed from chord lengths: 2·arcsin(|x − y|/2) for nearby
points and π − 2·arcsin(|x + y|/2) for nearly antipodal ones. Nearest-neighbor
queries run on a `scipy.spatial.cKDTree` over the Cartesian coordinates,
which is exact because chord length is monotone in geodesic distance.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from ..util.constants import err
from ..util.exceptions import GeometryError, PairingError
from ..util.types import ArrayLike, FloatArray, IntArray
from .points import PointSet, SpherePoint

########################################################
#              Chord conversions
########################################################


def chord_to_angle(chord: ArrayLike) -> FloatArray:
    return 2.0 * np.arcsin(np.clip(np.asarray(chord, dtype=np.float64) / 2.0, 0.0, 1.0))


def angle_to_chord(angle: ArrayLike) -> FloatArray:
    return 2.0 * np.sin(np.clip(np.asarray(angle, dtype=np.float64), 0.0, np.pi) / 2.0)


def _as_xyz(point: SpherePoint | PointSet | ArrayLike) -> FloatArray:
    if isinstance(point, SpherePoint):
        return point.as_array()
    if isinstance(point, PointSet):
        return point.xyz
    return np.asarray(point, dtype=np.float64)


########################################################
#              Pointwise distances
########################################################


def geodesic_dist(
    x: SpherePoint | PointSet | ArrayLike, y: SpherePoint | PointSet | ArrayLike
) -> float | FloatArray:
    """Geodesic distance arccos(x·y), evaluated in a form accurate at all scales.

    Arguments broadcast over leading axes, so a point against a point set
    returns the vector of distances.
    """
    a, b = _as_xyz(x), _as_xyz(y)
    inner = np.sum(a * b, axis=-1)
    near = 2.0 * np.arcsin(np.minimum(np.linalg.norm(a - b, axis=-1) / 2.0, 1.0))
    far = np.pi - 2.0 * np.arcsin(np.minimum(np.linalg.norm(a + b, axis=-1) / 2.0, 1.0))
    dist = np.where(inner >= 0.0, near, far)
    return float(dist) if np.ndim(dist) == 0 else dist


def haversine_dist(
    theta1: ArrayLike, phi1: ArrayLike, theta2: ArrayLike, phi2: ArrayLike
) -> FloatArray:
    """Geodesic distance from spherical coordinates.

    Coordinate differences are formed before any trigonometry, so distances
    between points a few ulps apart keep full relative precision.
    """
    t1, p1, t2, p2 = (np.asarray(a, dtype=np.float64) for a in (theta1, phi1, theta2, phi2))
    hav = np.sin((t2 - t1) / 2.0) ** 2 + np.sin(t1) * np.sin(t2) * np.sin((p2 - p1) / 2.0) ** 2
    return 2.0 * np.arcsin(np.sqrt(np.clip(hav, 0.0, 1.0)))


def least_distance(x: SpherePoint | ArrayLike, points: PointSet) -> float:
    """dist(x, X_N): distance from x to the closest point of the set."""
    if points.n == 0:
        raise GeometryError(err.GEOMETRY_ERROR.format(error="least distance to an empty set"))
    return float(np.min(geodesic_dist(_as_xyz(x), points.xyz)))


########################################################
#              Set distances
########################################################


def separation(points: PointSet) -> float:
    """Minimal geodesic distance between two distinct indices of the set."""
    if points.n < 2:
        raise GeometryError(
            err.GEOMETRY_ERROR.format(error="separation distance needs at least two points")
        )
    chords, _ = cKDTree(points.xyz).query(points.xyz, k=2)
    return float(chord_to_angle(chords[:, 1].min()))


def one_sided_distances(points: PointSet, others: PointSet) -> FloatArray:
    """dist(x_i, X') for every x_i in `points`."""
    if points.n == 0 or others.n == 0:
        raise GeometryError(err.GEOMETRY_ERROR.format(error="distance to an empty point set"))
    chords, _ = cKDTree(others.xyz).query(points.xyz, k=1)
    return chord_to_angle(chords)


def hausdorff(points: PointSet, others: PointSet) -> float:
    """Hausdorff distance max(max_i dist(x_i, X'), max_j dist(x'_j, X))."""
    return float(
        max(
            one_sided_distances(points, others).max(),
            one_sided_distances(others, points).max(),
        )
    )


def nearest_pairing(points: PointSet, others: PointSet) -> IntArray:
    """Pair each x_i with the unique x'_j inside the cap C(x_i, ρ(X)/2).

    Returns the permutation `perm` with others[perm[i]] paired to points[i].
    When σ(X, X') < ρ(X)/2 the pairing is a bijection; anything else raises.
    """
    if points.n != others.n:
        raise PairingError(
            err.GEOMETRY_ERROR.format(
                error=f"cannot pair {points.n} points with {others.n} points"
            )
        )
    if points.n == 1:
        return np.zeros(1, dtype=np.int64)

    radius = float(angle_to_chord(separation(points) / 2.0))
    neighbours = cKDTree(others.xyz).query_ball_point(points.xyz, r=radius)
    perm = np.full(points.n, -1, dtype=np.int64)
    for i, candidates in enumerate(neighbours):
        if len(candidates) != 1:
            raise PairingError(
                err.GEOMETRY_ERROR.format(
                    error=f"point {i} has {len(candidates)} partners within half the separation"
                )
            )
        perm[i] = candidates[0]
    if np.unique(perm).size != points.n:
        raise PairingError(
            err.GEOMETRY_ERROR.format(error="nearest-point pairing is not one-to-one")
        )
    return perm
