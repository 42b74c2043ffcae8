"""
Enclosure sets: spherical caps, spherical rectangles and the cap cover.

A spherical rectangle [θ_lo, θ_hi] × [φ_lo, φ_hi] is covered by the cap
C(x̃, γ) whose center x̃ has the midpoints of both intervals as spherical
coordinates, and whose radius γ is the larger of the distances from x̃ to the
vertices (θ_lo, φ_lo) and (θ_hi, φ_hi). The distances to the other two
vertices coincide with those by symmetry in φ, and the distance from x̃ along
each edge is maximal at a vertex, so the cap contains the rectangle. The cover
is still checked on vertices and edge midpoints; it is enlarged, with a
warning, only when one of them lies more than COVER_SLACK outside, so rounding
noise never moves γ off the vertex formula.

For a set of caps, rad is the largest radius and ρ is the smallest gap
dist(x̂_i, x̂_j) − γ_i − γ_j over all pairs; ρ < 0 flags overlapping enclosures.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property
from typing import Literal

import numpy as np
from scipy.spatial import cKDTree
from scipy.stats import qmc

from ..util.constants import err, logger
from ..util.exceptions import EnclosureError
from ..util.types import ArrayLike, FloatArray
from .distances import angle_to_chord, geodesic_dist, haversine_dist
from .points import TWO_PI, PointSet, SpherePoint

COVER_SLACK = 1e-14

########################################################
#              Elements
########################################################


@dataclass(frozen=True)
class SphericalCap:
    """C(x̂, γ) = {x : arccos(x · x̂) ≤ γ}."""

    center: SpherePoint
    radius: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.radius) or not 0.0 <= self.radius < math.pi:
            raise EnclosureError(
                err.ENCLOSURE_ERROR.format(
                    error=f"cap radius must lie in [0, π), got {self.radius}"
                )
            )

    def contains(self, points: PointSet, slack: float = 0.0) -> np.ndarray:
        return np.asarray(geodesic_dist(self.center.as_array(), points.xyz)) <= self.radius + slack


@dataclass(frozen=True)
class SphericalRectangle:
    """The image of [θ_lo, θ_hi] × [φ_lo, φ_hi] under the spherical parameterization."""

    theta_lo: float
    theta_hi: float
    phi_lo: float
    phi_hi: float

    def __post_init__(self) -> None:
        bounds = (self.theta_lo, self.theta_hi, self.phi_lo, self.phi_hi)
        if not all(math.isfinite(b) for b in bounds):
            raise EnclosureError(err.ENCLOSURE_ERROR.format(error="non-finite rectangle bound"))
        if not 0.0 <= self.theta_lo <= self.theta_hi <= math.pi:
            raise EnclosureError(
                err.ENCLOSURE_ERROR.format(
                    error=f"need 0 ≤ θ_lo ≤ θ_hi ≤ π, got [{self.theta_lo}, {self.theta_hi}]"
                )
            )
        if self.phi_hi < self.phi_lo:
            raise EnclosureError(
                err.ENCLOSURE_ERROR.format(
                    error=(
                        f"φ interval [{self.phi_lo}, {self.phi_hi}] wraps past 2π; "
                        "split it into two rectangles"
                    )
                )
            )
        if self.phi_hi - self.phi_lo >= TWO_PI:
            raise EnclosureError(
                err.ENCLOSURE_ERROR.format(error="φ interval must be shorter than 2π")
            )

    @property
    def center_coordinates(self) -> tuple[float, float]:
        return 0.5 * (self.theta_lo + self.theta_hi), 0.5 * (self.phi_lo + self.phi_hi)

    @property
    def is_degenerate(self) -> bool:
        return self.theta_lo == self.theta_hi or self.phi_lo == self.phi_hi

    def vertex_coordinates(self) -> tuple[FloatArray, FloatArray]:
        """(θ, φ) of the vertices x_1 = (θ_lo, φ_lo), x_2, x_3 = (θ_hi, φ_hi), x_4."""
        theta = np.array([self.theta_lo, self.theta_lo, self.theta_hi, self.theta_hi])
        phi = np.array([self.phi_lo, self.phi_hi, self.phi_hi, self.phi_lo])
        return theta, phi

    def edge_midpoint_coordinates(self) -> tuple[FloatArray, FloatArray]:
        theta_mid, phi_mid = self.center_coordinates
        theta = np.array([self.theta_lo, theta_mid, self.theta_hi, theta_mid])
        phi = np.array([phi_mid, self.phi_hi, phi_mid, self.phi_lo])
        return theta, phi

    def vertices(self) -> PointSet:
        return PointSet.from_spherical(*self.vertex_coordinates())

    def contains(self, theta: ArrayLike, phi: ArrayLike) -> np.ndarray:
        theta, phi = np.asarray(theta), np.asarray(phi)
        return (
            (self.theta_lo <= theta)
            & (theta <= self.theta_hi)
            & (self.phi_lo <= phi)
            & (phi <= self.phi_hi)
        )

    def to_cap(self) -> SphericalCap:
        """Cap C(x̃, γ) covering this rectangle."""
        theta_c, phi_c = self.center_coordinates
        theta_v, phi_v = self.vertex_coordinates()
        corner = haversine_dist(theta_c, phi_c, theta_v, phi_v)
        gamma = float(max(corner[0], corner[2]))

        theta_e, phi_e = self.edge_midpoint_coordinates()
        reach = float(max(corner.max(), haversine_dist(theta_c, phi_c, theta_e, phi_e).max()))
        if reach > gamma + COVER_SLACK:
            logger.warning(
                "Cap cover of rectangle %s enlarged from %.6e to %.6e", self, gamma, reach
            )
            gamma = reach
        return SphericalCap(SpherePoint.from_spherical(theta_c, phi_c), gamma)


Enclosure = SphericalCap | SphericalRectangle


########################################################
#              Enclosure sets
########################################################


@dataclass(frozen=True)
class EnclosureStats:
    rad: float
    rho: float
    overlapping: bool


@dataclass(frozen=True, eq=False)
class EnclosureSet:
    """N enclosures, all caps or all rectangles, one per point of a design."""

    elements: tuple[Enclosure, ...]

    def __post_init__(self) -> None:
        elements = tuple(self.elements)
        if not elements:
            raise EnclosureError(err.ENCLOSURE_ERROR.format(error="empty enclosure set"))
        kinds = {type(e) for e in elements}
        if len(kinds) != 1 or not kinds <= {SphericalCap, SphericalRectangle}:
            raise EnclosureError(
                err.ENCLOSURE_ERROR.format(error="enclosures must be all caps or all rectangles")
            )
        object.__setattr__(self, "elements", elements)

    @classmethod
    def from_caps(
        cls, centers: PointSet, radii: float | Sequence[float] | FloatArray
    ) -> EnclosureSet:
        radii = np.broadcast_to(np.asarray(radii, dtype=np.float64), (centers.n,))
        return cls(tuple(SphericalCap(c, float(r)) for c, r in zip(centers, radii, strict=True)))

    @property
    def kind(self) -> Literal["cap", "rect"]:
        return "cap" if isinstance(self.elements[0], SphericalCap) else "rect"

    @property
    def n(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return self.n

    def __iter__(self) -> Iterator[Enclosure]:
        return iter(self.elements)

    @cached_property
    def caps(self) -> tuple[SphericalCap, ...]:
        return cap_cover(self).elements  # type: ignore[return-value]

    def centers(self) -> PointSet:
        """Cap centers x̂_i, or the rectangle centers x̃_i."""
        return PointSet.from_points(cap.center for cap in self.caps)

    def center_coordinates(self) -> tuple[FloatArray, FloatArray]:
        """Spherical coordinates of the centers, exact for rectangles."""
        if self.kind == "rect":
            rects = self.elements
            pairs = np.array([r.center_coordinates for r in rects])  # type: ignore[union-attr]
            return pairs[:, 0], pairs[:, 1]
        return self.centers().spherical()

    def radii(self) -> FloatArray:
        return np.array([cap.radius for cap in self.caps], dtype=np.float64)

    @cached_property
    def stats(self) -> EnclosureStats:
        return enclosure_stats(self)

    @property
    def rad(self) -> float:
        return self.stats.rad

    @property
    def rho(self) -> float:
        return self.stats.rho


########################################################
#              Cap cover and statistics
########################################################


def cap_cover(enclosures: EnclosureSet) -> EnclosureSet:
    """Replace every rectangle by its covering cap; cap sets pass through."""
    if enclosures.kind == "cap":
        return enclosures
    rects = enclosures.elements
    return EnclosureSet(tuple(r.to_cap() for r in rects))  # type: ignore[union-attr]


def enclosure_stats(enclosures: EnclosureSet) -> EnclosureStats:
    """rad and ρ of the (covered) enclosure set; ρ = ∞ for a single enclosure."""
    caps = enclosures.caps
    gamma = np.array([cap.radius for cap in caps])
    rad = float(gamma.max())
    if len(caps) == 1:
        return EnclosureStats(rad=rad, rho=math.inf, overlapping=False)

    xyz = np.array([cap.center.as_array() for cap in caps])
    tree = cKDTree(xyz)
    _, nearest = tree.query(xyz, k=2)
    j = np.where(nearest[:, 0] == np.arange(len(caps)), nearest[:, 1], nearest[:, 0])
    gaps = np.asarray(geodesic_dist(xyz, xyz[j])) - gamma - gamma[j]
    rho = float(gaps.min())

    # any pair with a smaller gap has center distance below rho + 2 rad
    reach = float(angle_to_chord(min(rho + 2.0 * rad, math.pi)))
    pairs = tree.query_pairs(r=reach * (1.0 + 1e-12) + 1e-15, output_type="ndarray")
    if len(pairs):
        a, b = pairs[:, 0], pairs[:, 1]
        candidate = np.asarray(geodesic_dist(xyz[a], xyz[b])) - gamma[a] - gamma[b]
        rho = min(rho, float(candidate.min()))

    overlapping = rho < 0.0
    if overlapping:
        logger.warning("Overlapping enclosures: separation ρ = %.6e < 0", rho)
    return EnclosureStats(rad=rad, rho=rho, overlapping=overlapping)


########################################################
#              Sampling inside enclosures
########################################################


def sample_rectangle(
    rect: SphericalRectangle, n: int, seed: int | None = None
) -> tuple[FloatArray, FloatArray]:
    """Deterministic scrambled-Halton (θ, φ) samples inside a rectangle."""
    unit = qmc.Halton(d=2, scramble=True, seed=seed).random(n)
    theta = rect.theta_lo + unit[:, 0] * (rect.theta_hi - rect.theta_lo)
    phi = rect.phi_lo + unit[:, 1] * (rect.phi_hi - rect.phi_lo)
    return theta, phi


def _tangent_basis(center: FloatArray) -> tuple[FloatArray, FloatArray]:
    helper = np.eye(3)[int(np.argmin(np.abs(center)))]
    e1 = np.cross(center, helper)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(center, e1)


def random_selection(
    enclosures: EnclosureSet, seed: int | np.random.Generator | None = None
) -> PointSet:
    """Pick one random point inside each enclosure, X_N ∈ 𝕏_N."""
    rng = np.random.default_rng(seed)
    if enclosures.kind == "rect":
        rects: tuple[SphericalRectangle, ...] = enclosures.elements  # type: ignore[assignment]
        bounds = np.array([(r.theta_lo, r.theta_hi, r.phi_lo, r.phi_hi) for r in rects])
        theta = rng.uniform(bounds[:, 0], bounds[:, 1])
        phi = rng.uniform(bounds[:, 2], bounds[:, 3])
        return PointSet.from_spherical(theta, phi)

    rows = []
    for cap in enclosures.caps:
        center = cap.center.as_array()
        e1, e2 = _tangent_basis(center)
        dist = cap.radius * math.sqrt(rng.uniform())
        angle = rng.uniform(0.0, TWO_PI)
        direction = math.cos(angle) * e1 + math.sin(angle) * e2
        rows.append(math.cos(dist) * center + math.sin(dist) * direction)
    return PointSet.from_cartesian(np.array(rows), normalize=True)


__all__ = [
    "COVER_SLACK",
    "Enclosure",
    "EnclosureSet",
    "EnclosureStats",
    "SphericalCap",
    "SphericalRectangle",
    "cap_cover",
    "enclosure_stats",
    "random_selection",
    "sample_rectangle",
]
