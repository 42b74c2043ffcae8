"""
Reproducing kernels of the Sobolev spaces H^s(S²), s > 1, built from the
distance kernel |x − y|^{2s−2}.

With L = ⌊s − 1⌋ the distance kernel expands as

    (−1)^{L+1}|x − y|^{2s−2} = (−1)^{L+1}V + Σ_{ℓ≥1} a_ℓ (2ℓ+1) P_ℓ(x·y),

    V = V_{2−2s}(S²) = 2^{2s−2}/s,
    a_ℓ = V (−1)^{L+1} (1−s)_ℓ / (1+s)_ℓ,

where V is the mean of |x − y|^{2s−2} over pairs of uniform points. The a_ℓ
are positive for ℓ > L; adding the correction polynomial

    Q_L(u) = Σ_{ℓ=1}^{L} ((−1)^{L+1−ℓ} − 1) a_ℓ (2ℓ+1) P_ℓ(u)

flips the negative low-degree coefficients, so that

    K_s(u) = (1 − (−1)^{L+1})V + Q_L(u) + (−1)^{L+1}|x − y|^{2s−2}
           = V + Σ_{ℓ≥1} c_ℓ (2ℓ+1) P_ℓ(u),   c_ℓ = |a_ℓ| (ℓ ≤ L), a_ℓ (ℓ > L)

is a positive definite zonal kernel. The H^s norm it induces has weights
c_ℓ ~ (1 + λ_ℓ)^{−s} with λ_ℓ = ℓ(ℓ+1) the Laplace-Beltrami eigenvalues.

The expansion needs 2s − 2 to avoid the even integers; s = 2 (|x − y|² is a
polynomial) is accepted with a warning and handled by the s ≤ 2 branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Literal

import numpy as np
from scipy.special import gammaln

from ..harmonics.legendre import legendre_sum
from ..util.constants import err, logger
from ..util.exceptions import KernelHypothesisError
from ..util.types import ArrayLike, FloatArray

########################################################
#              Smoothness parameters
########################################################


@dataclass(frozen=True)
class SobolevParams:
    s: float
    family: Literal["distance"] = "distance"

    def __post_init__(self) -> None:
        if not math.isfinite(self.s) or self.s <= 1.0:
            raise KernelHypothesisError(
                err.KERNEL_ERROR.format(error=f"smoothness must exceed 1, got s={self.s}")
            )
        power = 2.0 * self.s - 2.0
        if power == round(power) and int(round(power)) % 2 == 0:
            if self.s > 2.0:
                raise KernelHypothesisError(
                    err.KERNEL_ERROR.format(
                        error=(
                            f"2s − 2 = {power:g} is an even integer; "
                            f"no distance kernel for s={self.s}"
                        )
                    )
                )
            logger.warning("s = 2: |x − y|² is a polynomial, the kernel is degenerate beyond ℓ = 1")

    @property
    def L(self) -> int:
        """⌊s − 1⌋, with the boundary s = 2 assigned to the low branch."""
        return 0 if self.s <= 2.0 else math.floor(self.s - 1.0)

    @property
    def sign(self) -> int:
        """(−1)^{L+1}."""
        return -1 if self.L % 2 == 0 else 1

    @property
    def branch(self) -> Literal["low", "high"]:
        return "low" if self.s <= 2.0 else "high"

    @property
    def power(self) -> float:
        return 2.0 * self.s - 2.0


def v_coeff(s: float) -> float:
    """V_{2−2s}(S²) = 2^{2s−1}Γ(3/2)Γ(s)/(√π Γ(1+s)) = 2^{2s−2}/s.

    Examples:
        >>> v_coeff(2.0)
        2.0
    """
    SobolevParams(s)
    return 2.0 ** (2.0 * s - 2.0) / s


########################################################
#              Laplace coefficients
########################################################


def a_coeffs(s: float, ell_max: int) -> FloatArray:
    """a_1..a_ℓmax, with the Pochhammer ratio as a running product."""
    params = SobolevParams(s)
    j = np.arange(ell_max, dtype=np.float64)
    ratio = np.cumprod((1.0 - s + j) / (1.0 + s + j))
    return v_coeff(s) * params.sign * ratio


def a_coeff(s: float, ell: int) -> float:
    """a_ℓ^{(s)} for a single ℓ ≥ 1.

    Examples:
        >>> round(a_coeff(1.5, 1), 6)
        0.266667
    """
    if ell < 1:
        raise KernelHypothesisError(err.KERNEL_ERROR.format(error=f"need ℓ ≥ 1, got {ell}"))
    return float(a_coeffs(s, ell)[-1])


def a_asymptote(s: float, ell: ArrayLike) -> FloatArray:
    """Leading behaviour V(−1)^{L+1}·Γ(1+s)/Γ(1−s)·ℓ^{−2s} of a_ℓ."""
    params = SobolevParams(s)
    log_ratio = gammaln(1.0 + s) - gammaln(1.0 - s)
    gamma_sign = np.sign(math.gamma(1.0 - s))
    ell = np.asarray(ell, dtype=np.float64)
    return v_coeff(s) * params.sign * gamma_sign * np.exp(log_ratio) * ell ** (-2.0 * s)


@dataclass(frozen=True)
class KernelCoefficients:
    """V and a_ℓ (ℓ = 1..ℓmax) of the distance kernel for one smoothness."""

    params: SobolevParams
    V: float
    a: FloatArray

    @property
    def ell_max(self) -> int:
        return self.a.size

    @cached_property
    def c(self) -> FloatArray:
        """Laplace coefficients c_ℓ of K_s, ℓ = 1..ℓmax."""
        c = self.a.copy()
        low = min(self.params.L, c.size)
        c[:low] = np.abs(c[:low])
        return c

    @cached_property
    def correction(self) -> FloatArray:
        """Legendre coefficients of Q_L, degree 0..L."""
        L = self.params.L
        q = np.zeros(L + 1)
        ell = np.arange(1, L + 1)
        q[1:] = ((-1.0) ** (L + 1 - ell) - 1.0) * self.a[:L] * (2 * ell + 1)
        return q

    def diagonal(self) -> float:
        """K_s(1) − V = Σ_ℓ c_ℓ(2ℓ+1), the full sum of all Laplace terms."""
        return float(legendre_sum(1.0, self.correction)) - self.params.sign * self.V


def kernel_coefficients(s: float, ell_max: int | None = None) -> KernelCoefficients:
    params = SobolevParams(s)
    ell_max = max(params.L, 1) if ell_max is None else max(ell_max, params.L)
    return KernelCoefficients(params=params, V=v_coeff(s), a=a_coeffs(s, ell_max))


########################################################
#              Kernel evaluation
########################################################


def kernel_minus_v(coefficients: KernelCoefficients, u: ArrayLike, dist: ArrayLike) -> FloatArray:
    """K_s(u) − V = Q_L(u) + (−1)^{L+1}(|x − y|^{2s−2} − V), given u = x·y and |x − y|."""
    params = coefficients.params
    u = np.clip(np.asarray(u, dtype=np.float64), -1.0, 1.0)
    dist = np.asarray(dist, dtype=np.float64)
    values = params.sign * (dist**params.power - coefficients.V)
    if params.L:
        values = values + legendre_sum(u, coefficients.correction)
    return values


def kernel(s: float, u: ArrayLike) -> FloatArray:
    """K_s(x, y) as a function of u = x·y."""
    coefficients = kernel_coefficients(s)
    u = np.clip(np.asarray(u, dtype=np.float64), -1.0, 1.0)
    return coefficients.V + kernel_minus_v(coefficients, u, np.sqrt(2.0 - 2.0 * u))


__all__ = [
    "KernelCoefficients",
    "SobolevParams",
    "a_asymptote",
    "a_coeff",
    "a_coeffs",
    "kernel",
    "kernel_coefficients",
    "kernel_minus_v",
    "v_coeff",
]
