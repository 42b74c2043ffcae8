"""
Equal-area point grids on the sphere.

The sphere is cut into a north polar cap, a stack of collars and a south
polar cap. Both caps have area 4π/n; each collar is split into m_i cells of
equal azimuthal width. Collar counts come from the ideal (fractional) counts
rounded with carry, and every zone boundary is placed at cos θ = 1 − 2c/n,
where c is the number of cells above it, so that every cell has area exactly
4π/n. Each cell contributes the point at its mid-colatitude and mid-azimuth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..geometry.points import PointSet
from ..util.constants import FOUR_PI, err
from ..util.exceptions import UsageError
from ..util.types import FloatArray, IntArray


@dataclass(frozen=True, eq=False)
class EqualAreaPartition:
    """Zones from north to south: counts[k] cells between cos_bounds[k] and cos_bounds[k+1]."""

    n: int
    counts: IntArray
    cos_bounds: FloatArray

    @property
    def zones(self) -> int:
        return self.counts.size

    def cell_areas(self) -> FloatArray:
        zone_areas = 2.0 * np.pi * (self.cos_bounds[:-1] - self.cos_bounds[1:])
        return np.repeat(zone_areas / self.counts, self.counts)

    def points(self) -> PointSet:
        theta_bounds = np.arccos(np.clip(self.cos_bounds, -1.0, 1.0))
        thetas, phis = [], []
        for k, m in enumerate(self.counts):
            if m == 1 and k in (0, self.zones - 1):
                thetas.append(np.array([theta_bounds[0] if k == 0 else theta_bounds[-1]]))
                phis.append(np.zeros(1))
                continue
            theta = 0.5 * (theta_bounds[k] + theta_bounds[k + 1])
            thetas.append(np.full(m, theta))
            phis.append(2.0 * np.pi * (np.arange(m) + 0.5) / m)
        return PointSet.from_spherical(np.concatenate(thetas), np.concatenate(phis))


def _collar_counts(n: int, polar: float) -> IntArray:
    collars = max(1, round((math.pi - 2.0 * polar) / math.sqrt(FOUR_PI / n)))
    fitting = (math.pi - 2.0 * polar) / collars
    edges = polar + fitting * np.arange(collars + 1)
    ideal = (np.cos(edges[:-1]) - np.cos(edges[1:])) * n / 2.0

    counts = np.zeros(collars, dtype=np.int64)
    carry = 0.0
    for i, target in enumerate(ideal):
        counts[i] = max(0, round(target + carry))
        carry += target - counts[i]
    counts[-1] += n - 2 - counts.sum()
    return counts[counts > 0]


def equal_area_partition(n: int) -> EqualAreaPartition:
    if n < 1:
        raise UsageError(err.USAGE_ERROR.format(error=f"grid size must be ≥ 1, got {n}"))
    if n == 1:
        return EqualAreaPartition(1, np.array([1]), np.array([1.0, -1.0]))
    if n == 2:
        return EqualAreaPartition(2, np.array([1, 1]), np.array([1.0, 0.0, -1.0]))

    polar = 2.0 * math.asin(math.sqrt(1.0 / n))
    counts = np.concatenate(([1], _collar_counts(n, polar), [1]))
    cumulative = np.concatenate(([0], np.cumsum(counts)))
    return EqualAreaPartition(n, counts, 1.0 - 2.0 * cumulative / n)


def equal_area_grid(n: int) -> PointSet:
    """n points, one per cell of the equal-area partition; deterministic in n."""
    return equal_area_partition(n).points()


__all__ = ["EqualAreaPartition", "equal_area_grid", "equal_area_partition"]
