"""
Target functions and noise for approximation experiments.
"""

from __future__ import annotations

import math

import numpy as np

from ..geometry.distances import geodesic_dist
from ..geometry.points import PointSet, SpherePoint
from ..harmonics.ylm import dimension
from ..util.constants import err
from ..util.exceptions import DomainError
from ..util.types import ArrayLike, FloatArray

F2_CENTER = SpherePoint(-0.5, -0.5, math.sqrt(0.5))
F2_RADIUS = 0.5
F2_HEIGHT = 1.0


def franke(points: PointSet) -> FloatArray:
    """Franke's test function restricted to the sphere."""
    x, y, z = (9.0 * c for c in points.xyz.T)
    return (
        0.75 * np.exp(-((x - 2) ** 2) / 4 - (y - 2) ** 2 / 4 - (z - 2) ** 2 / 4)
        + 0.75 * np.exp(-((x + 1) ** 2) / 49 - (y + 1) / 10 - (z + 1) / 10)
        + 0.5 * np.exp(-((x - 7) ** 2) / 4 - (y - 3) ** 2 / 4 - (z - 5) ** 2 / 4)
        - 0.2 * np.exp(-((x - 4) ** 2) - (y - 7) ** 2 - (z - 5) ** 2)
    )


def cap_bump(
    points: PointSet, center: SpherePoint, radius: float, height: float
) -> FloatArray:
    """ρ·cos(π·dist(x_c, x)/(2r)) inside C(x_c, r), zero outside.

    Continuous across the cap edge but not differentiable there.
    """
    if not 0.0 < radius < math.pi or not height > 0.0:
        raise DomainError(
            err.DOMAIN_ERROR.format(error=f"need 0 < r < π and ρ > 0, got r={radius}, ρ={height}")
        )
    dist = np.asarray(geodesic_dist(center.as_array(), points.xyz))
    inside = dist <= radius
    return np.where(inside, height * np.cos(np.pi * np.minimum(dist, radius) / (2.0 * radius)), 0.0)


def f2(points: PointSet) -> FloatArray:
    """Franke function plus a cap bump of height 1 and radius 0.5 around (−½, −½, √½)."""
    return franke(points) + cap_bump(points, F2_CENTER, F2_RADIUS, F2_HEIGHT)


def random_polynomial(degree: int, seed: int | np.random.Generator | None = None) -> FloatArray:
    """(degree+1)² Fourier coefficients drawn i.i.d. from the standard normal."""
    if degree < 0:
        raise DomainError(err.DOMAIN_ERROR.format(error=f"degree must be ≥ 0, got {degree}"))
    return np.random.default_rng(seed).standard_normal(dimension(degree))


def add_noise(
    values: ArrayLike, delta: float, seed: int | np.random.Generator | None = None
) -> FloatArray:
    """values + noise drawn uniformly from [−δ, δ]."""
    values = np.asarray(values, dtype=np.float64)
    if delta < 0.0:
        raise DomainError(err.DOMAIN_ERROR.format(error=f"noise level must be ≥ 0, got {delta}"))
    if delta == 0.0:
        return values.copy()
    return values + np.random.default_rng(seed).uniform(-delta, delta, size=values.shape)


TARGETS = {"franke": franke, "franke+cap": f2}


__all__ = ["TARGETS", "add_noise", "cap_bump", "f2", "franke", "random_polynomial"]
