"""
Fully normalized associated Legendre functions and Legendre polynomials.

The functions returned here fold every normalization constant of the real
spherical harmonics into the Legendre factor, so that

    Y_{ℓ,k}(x) = P̄_ℓ^m(cos θ) · {cos mφ, 1, sin mφ}

with P̄_ℓ^0 = N_ℓ P_ℓ and P̄_ℓ^m = √2 N_{ℓ,m} P_ℓ^m for m ≥ 1 (no Condon-Shortley
phase). Values come from the standard three-term recurrence on the normalized
functions:

    P̄_0^0 = 1/√(4π)
    P̄_1^1 = √3 · sin θ · P̄_0^0,   P̄_m^m = √((2m+1)/(2m)) · sin θ · P̄_{m-1}^{m-1}
    P̄_{m+1}^m = √(2m+3) · u · P̄_m^m
    P̄_ℓ^m = a_ℓm · (u · P̄_{ℓ-1}^m − b_ℓm · P̄_{ℓ-2}^m)

with a_ℓm = √((4ℓ²−1)/(ℓ²−m²)) and b_ℓm = √(((ℓ−1)²−m²)/(4(ℓ−1)²−1)). Factorials
never appear, so degrees in the hundreds evaluate without overflow.
"""

from __future__ import annotations

import math
from collections.abc import Iterator

import numpy as np

from ..util.constants import FOUR_PI, config, err
from ..util.exceptions import DomainError
from ..util.types import ArrayLike, FloatArray

########################################################
#              Private helpers
########################################################


def _check_degree_order(ell: int, m: int = 0) -> None:
    if ell < 0 or m < 0 or m > ell:
        raise DomainError(
            err.DOMAIN_ERROR.format(error=f"need 0 ≤ m ≤ ℓ, got ℓ={ell}, m={m}")
        )


def _check_argument(u: ArrayLike) -> FloatArray:
    u = np.asarray(u, dtype=np.float64)
    if np.any(~np.isfinite(u)) or np.any(np.abs(u) > 1.0 + config.DOMAIN_TOL):
        raise DomainError(err.DOMAIN_ERROR.format(error="Legendre argument outside [-1, 1]"))
    return np.clip(u, -1.0, 1.0)


def _next_sectoral(m: int, sin_theta: FloatArray, previous: FloatArray) -> FloatArray:
    if m == 1:
        return math.sqrt(3.0) * sin_theta * previous
    return math.sqrt((2 * m + 1) / (2 * m)) * sin_theta * previous


def _order_block(u: FloatArray, sectoral: FloatArray, m: int, ell_max: int) -> FloatArray:
    block = np.empty((ell_max - m + 1, *u.shape), dtype=np.float64)
    block[0] = sectoral
    if ell_max > m:
        block[1] = math.sqrt(2 * m + 3) * u * sectoral
    for ell in range(m + 2, ell_max + 1):
        a = math.sqrt((4 * ell * ell - 1) / (ell * ell - m * m))
        b = math.sqrt(((ell - 1) ** 2 - m * m) / (4 * (ell - 1) ** 2 - 1))
        block[ell - m] = a * (u * block[ell - m - 1] - b * block[ell - m - 2])
    return block


########################################################
#              Normalized associated Legendre functions
########################################################


def iter_normalized_legendre(
    u: FloatArray, sin_theta: FloatArray, ell_max: int
) -> Iterator[tuple[int, FloatArray]]:
    """Yield (m, block) with block[ℓ − m] = P̄_ℓ^m(u) for ℓ = m..ell_max.

    Orders are produced one at a time so callers can consume each block
    before the next is formed.
    """
    sectoral = np.full(u.shape, 1.0 / math.sqrt(FOUR_PI))
    for m in range(ell_max + 1):
        if m > 0:
            sectoral = _next_sectoral(m, sin_theta, sectoral)
        yield m, _order_block(u, sectoral, m, ell_max)


def eval_legendre(ell: int, m: int, u: ArrayLike) -> float | FloatArray:
    """Normalized associated Legendre value P̄_ℓ^m(u).

    Examples:
        >>> round(eval_legendre(0, 0, 0.3), 8)
        0.28209479
        >>> round(eval_legendre(1, 0, 1.0), 8)
        0.48860251
    """
    _check_degree_order(ell, m)
    u = _check_argument(u)
    sin_theta = np.sqrt((1.0 - u) * (1.0 + u))
    sectoral = np.full(u.shape, 1.0 / math.sqrt(FOUR_PI))
    for order in range(1, m + 1):
        sectoral = _next_sectoral(order, sin_theta, sectoral)
    value = _order_block(u, sectoral, m, ell)[ell - m]
    return float(value) if value.ndim == 0 else value


########################################################
#              Legendre polynomials
########################################################


def iter_legendre(u: ArrayLike, ell_max: int) -> Iterator[FloatArray]:
    """Yield P_0(u), P_1(u), .., P_ℓmax(u) one degree at a time (Bonnet recurrence)."""
    _check_degree_order(ell_max)
    u = _check_argument(u)
    previous, current = np.zeros_like(u), np.ones_like(u)
    yield current
    for ell in range(ell_max):
        previous, current = current, ((2 * ell + 1) * u * current - ell * previous) / (ell + 1)
        yield current


def legendre_series(u: ArrayLike, ell_max: int) -> FloatArray:
    """P_0(u)..P_ℓmax(u) stacked along the first axis."""
    return np.stack(list(iter_legendre(u, ell_max)))


def legendre_sum(u: ArrayLike, coefficients: ArrayLike) -> FloatArray:
    """Σ_ℓ c_ℓ P_ℓ(u), with c indexed from degree 0."""
    coefficients = np.asarray(coefficients, dtype=np.float64)
    if coefficients.size == 0:
        return np.zeros_like(np.asarray(u, dtype=np.float64))
    return np.tensordot(coefficients, legendre_series(u, coefficients.size - 1), axes=1)
