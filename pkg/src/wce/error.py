"""
Worst-case quadrature error E_s of a rule in H^s(S²).

For the kernel K_s of `kernels` and a rule with Σ w_i = 4π,

    E_s² = Σ_i Σ_j (w_i w_j / 16π²) (K_s(x_i·x_j) − V),

which the closed forms evaluate pairwise with the distance kernel, and the
series oracle evaluates degree by degree as Σ_ℓ c_ℓ(2ℓ+1) M_ℓ with the
Legendre moments M_ℓ = Σ_i Σ_j (w_i w_j / 16π²) P_ℓ(x_i·x_j) ≥ 0.

Pairwise sums run over row tiles of PAIRWISE_CHUNK points and are reduced
with `math.fsum` in tile order, so results do not depend on the tiling.
"""

from __future__ import annotations

import math
from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np

from ..certify.rules import QuadratureRule
from ..harmonics.legendre import iter_legendre
from ..util.constants import FOUR_PI, config, err, logger
from ..util.exceptions import KernelHypothesisError, NumericalFailureError, UsageError
from ..util.types import FloatArray
from .kernels import KernelCoefficients, SobolevParams, kernel_coefficients, kernel_minus_v

########################################################
#              Pairwise tiles
########################################################


def _tiles(rule: QuadratureRule) -> Iterator[tuple[slice, FloatArray, FloatArray]]:
    """(rows, u, |x_i − x_j|²) for consecutive row blocks against all points."""
    xyz = rule.points.xyz
    chunk = max(1, int(config.PAIRWISE_CHUNK))
    for start in range(0, rule.n, chunk):
        rows = slice(start, min(start + chunk, rule.n))
        block = xyz[rows]
        u = np.clip(block @ xyz.T, -1.0, 1.0)
        squared = sum((block[:, [k]] - xyz[:, k]) ** 2 for k in range(3))
        yield rows, u, squared


def _to_error(e2: float, label: str) -> float:
    if e2 >= 0.0:
        return math.sqrt(e2)
    if e2 >= -config.NEGATIVE_E2_TOL:
        logger.warning("%s: E² = %.3e < 0 from cancellation, clamped to 0", label, e2)
        return 0.0
    raise NumericalFailureError(
        err.NUMERICAL_ERROR.format(error=f"{label}: E² = {e2:.6e} is negative beyond rounding")
    )


########################################################
#              Closed forms
########################################################


def closed_e2(rule: QuadratureRule, coefficients: KernelCoefficients) -> float:
    w = rule.weights / FOUR_PI
    parts = []
    for rows, u, squared in _tiles(rule):
        values = kernel_minus_v(coefficients, u, np.sqrt(squared))
        parts.append(float(w[rows] @ values @ w))
    return math.fsum(parts)


def wce_closed_low(rule: QuadratureRule, s: float) -> float:
    """E_s for 1 < s ≤ 2: E² = Σ Σ (w_i w_j / 16π²)(V − |x_i − x_j|^{2s−2})."""
    params = SobolevParams(s)
    if params.branch != "low":
        raise KernelHypothesisError(
            err.KERNEL_ERROR.format(error=f"low branch needs s ≤ 2, got {s}")
        )
    return _to_error(closed_e2(rule, kernel_coefficients(s)), f"E_{s:g}")


def wce_closed_high(rule: QuadratureRule, s: float) -> float:
    """E_s for s > 2 with the sign-corrected kernel.

    K_s = (1 − (−1)^{L+1})V + Q_L + (−1)^{L+1}|x − y|^{2s−2}.
    """
    params = SobolevParams(s)
    if params.branch != "high":
        raise KernelHypothesisError(
            err.KERNEL_ERROR.format(error=f"high branch needs s > 2, got {s}")
        )
    return _to_error(closed_e2(rule, kernel_coefficients(s)), f"E_{s:g}")


def worst_case_error(rule: QuadratureRule, s: float) -> float:
    if SobolevParams(s).branch == "low":
        return wce_closed_low(rule, s)
    return wce_closed_high(rule, s)


########################################################
#              Series oracle
########################################################


@dataclass(frozen=True)
class LegendreMoments:
    """M_ℓ = diagonal + off_diagonal[ℓ] for ℓ = 0..ℓmax."""

    diagonal: float
    off_diagonal: FloatArray
    off_diagonal_abs: float

    @property
    def ell_max(self) -> int:
        return self.off_diagonal.size - 1

    @property
    def total(self) -> FloatArray:
        return self.diagonal + self.off_diagonal


def legendre_moments(rule: QuadratureRule, ell_max: int) -> LegendreMoments:
    """Legendre moments of the rule, split into the i = j and i ≠ j parts.

    They do not depend on s, so one call serves every smoothness.
    """
    w = rule.weights / FOUR_PI
    tile_sums = []
    for rows, u, _ in _tiles(rule):
        ww = np.outer(w[rows], w)
        local = np.arange(rows.stop - rows.start)
        ww[local, local + rows.start] = 0.0
        tile_sums.append([float(np.vdot(ww, p)) for p in iter_legendre(u, ell_max)])
    by_degree = np.array(tile_sums).T
    diagonal = math.fsum(w * w)
    return LegendreMoments(
        diagonal=diagonal,
        off_diagonal=np.array([math.fsum(row) for row in by_degree]),
        off_diagonal_abs=math.fsum(w) ** 2 - diagonal,
    )


@dataclass(frozen=True)
class SeriesError:
    """Series values of E_s truncated at ℓmax.

    `truncated` keeps degrees 1..ℓmax only and never exceeds the true E_s.
    `completed` adds the exact diagonal remainder Σ_{ℓ>ℓmax} c_ℓ(2ℓ+1)·M_ℓ^{diag},
    leaving only the oscillating off-diagonal tail. Both lie within
    `tail_bound` of the true value. `terms[ℓ−1]` is the degree-ℓ contribution to E².
    """

    s: float
    ell_max: int
    truncated: float
    completed: float
    tail_bound: float
    terms: FloatArray


def wce_series(
    rule: QuadratureRule,
    s: float,
    ell_max: int | None = None,
    moments: LegendreMoments | None = None,
) -> SeriesError:
    ell_max = int(config.SERIES_ELL_MAX) if ell_max is None else ell_max
    params = SobolevParams(s)
    if ell_max < rule.t + 1 or ell_max < params.L:
        raise UsageError(
            err.USAGE_ERROR.format(
                error=f"ℓmax = {ell_max} must be at least t + 1 = {rule.t + 1} and L = {params.L}"
            )
        )
    if moments is None:
        moments = legendre_moments(rule, ell_max)
    elif moments.ell_max < ell_max:
        raise UsageError(err.USAGE_ERROR.format(error="moments computed to a lower degree"))

    coefficients = kernel_coefficients(s, ell_max)
    weighted = coefficients.c * (2 * np.arange(1, ell_max + 1) + 1)
    terms = weighted * moments.total[1 : ell_max + 1]
    truncated_e2 = math.fsum(terms)
    remainder = max(coefficients.diagonal() - math.fsum(weighted), 0.0)
    completed_e2 = truncated_e2 + moments.diagonal * remainder

    truncated = _to_error(truncated_e2, f"E_{s:g} series")
    mass = moments.diagonal + moments.off_diagonal_abs
    upper = math.sqrt(max(truncated_e2, 0.0) + remainder * mass)
    logger.debug("Series E_%g to ℓ=%d: remainder %.3e", s, ell_max, remainder)
    return SeriesError(
        s=s,
        ell_max=ell_max,
        truncated=truncated,
        completed=_to_error(completed_e2, f"E_{s:g} series"),
        tail_bound=upper - truncated,
        terms=terms,
    )


########################################################
#              Report rows
########################################################


@dataclass(frozen=True)
class WceRow:
    t: int
    n: int
    s: float
    e_closed: float
    e_series: float
    tail_bound: float


def wce_rows(
    rule: QuadratureRule, smoothness: list[float], ell_max: int | None = None
) -> list[WceRow]:
    """Closed and series E_s for several s, sharing one set of Legendre moments."""
    ell_max = int(config.SERIES_ELL_MAX) if ell_max is None else ell_max
    moments = legendre_moments(rule, ell_max)
    rows = []
    for s in smoothness:
        series = wce_series(rule, s, ell_max, moments)
        rows.append(
            WceRow(
                t=rule.t,
                n=rule.n,
                s=s,
                e_closed=worst_case_error(rule, s),
                e_series=series.completed,
                tail_bound=series.tail_bound,
            )
        )
    return rows


__all__ = [
    "LegendreMoments",
    "SeriesError",
    "WceRow",
    "closed_e2",
    "legendre_moments",
    "wce_closed_high",
    "wce_closed_low",
    "wce_rows",
    "wce_series",
    "worst_case_error",
]
