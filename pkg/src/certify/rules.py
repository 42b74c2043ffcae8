"""
Quadrature rules on the sphere.

A rule Q[X_N, w](f) = Σ w_i f(x_i) has algebraic accuracy t when it integrates
every spherical polynomial of degree ≤ t exactly. Exactness for the constant
polynomial forces Σ w_i = 4π, which every rule here is checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from ..geometry.points import PointSet
from ..util.constants import FOUR_PI, config, err
from ..util.exceptions import DesignWeightError, DomainError
from ..util.types import ArrayLike, FloatArray

########################################################
#              Quadrature rule
########################################################


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Points, positive weights summing to 4π, and the claimed algebraic accuracy t."""

    points: PointSet
    weights: FloatArray
    t: int = 0

    def __post_init__(self) -> None:
        weights = np.array(self.weights, dtype=np.float64, copy=True).reshape(-1)
        if weights.shape[0] != self.points.n:
            raise DesignWeightError(
                err.WEIGHT_ERROR.format(
                    error=f"{weights.shape[0]} weights for {self.points.n} points"
                )
            )
        if not np.all(np.isfinite(weights)) or np.any(weights <= 0.0):
            raise DesignWeightError(err.WEIGHT_ERROR.format(error="weights must be positive"))
        if abs(math.fsum(weights) - FOUR_PI) > config.WEIGHT_SUM_TOL:
            raise DesignWeightError(
                err.WEIGHT_ERROR.format(
                    error=f"weights sum to {math.fsum(weights):.17g}, expected 4π"
                )
            )
        if self.t < 0:
            raise DomainError(err.DOMAIN_ERROR.format(error=f"degree must be ≥ 0, got {self.t}"))
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @property
    def n(self) -> int:
        return self.points.n

    def integrate(self, values: ArrayLike) -> float:
        """Σ w_i f(x_i) for sampled values f(x_i)."""
        return math.fsum(self.weights * np.asarray(values, dtype=np.float64))


def equal_weight_rule(points: PointSet, t: int = 0) -> QuadratureRule:
    return QuadratureRule(points, np.full(points.n, FOUR_PI / points.n), t)


def gauss_product_rule(t: int) -> QuadratureRule:
    """Gauss-Legendre in cos θ times the trapezoidal rule in φ, exact to degree t.

    ⌊t/2⌋ + 1 Gauss nodes integrate polynomials of degree t in cos θ, and t + 1
    equispaced azimuths annihilate every cos mφ, sin mφ with 1 ≤ m ≤ t.
    """
    if t < 0:
        raise DomainError(err.DOMAIN_ERROR.format(error=f"degree must be ≥ 0, got {t}"))
    nodes, gauss_weights = roots_legendre(t // 2 + 1)
    n_phi = t + 1
    theta = np.repeat(np.arccos(nodes), n_phi)
    phi = np.tile(2.0 * np.pi * np.arange(n_phi) / n_phi, nodes.size)
    weights = np.repeat(gauss_weights, n_phi) * (2.0 * np.pi / n_phi)
    return QuadratureRule(PointSet.from_spherical(theta, phi), weights, t)
