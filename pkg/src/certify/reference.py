"""
Published certification results for computed spherical t-designs, t = 10..100.

Each row gives, for the interval enclosures of one design, rad(ℤ_N), ρ(ℤ_N),
the certified ε̲ and the ε reported at the enclosure centers. Over the full
range ε̲ grows like 10^−14.4·(t+1)^6.9.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ..util.constants import err
from ..util.exceptions import UsageError
from ..util.types import ArrayLike, FloatArray

TREND_LOG_SCALE = -14.4
TREND_EXPONENT = 6.9


class PublishedRow(NamedTuple):
    rad: float
    rho: float
    eps_lower: float
    eps_center: float


PUBLISHED_TABLE: dict[int, PublishedRow] = {
    10: PublishedRow(1.843454e-12, 3.396362e-01, 6.748890e-08, 6.694645e-14),
    20: PublishedRow(1.515848e-11, 1.805783e-01, 5.480524e-06, 1.783018e-13),
    30: PublishedRow(5.588085e-11, 1.249714e-01, 7.888659e-05, 2.480238e-13),
    40: PublishedRow(1.044163e-10, 9.203055e-02, 4.043164e-04, 5.339063e-13),
    50: PublishedRow(2.199182e-10, 7.638945e-02, 1.862348e-03, 5.057066e-13),
    60: PublishedRow(4.006638e-10, 6.302748e-02, 6.502352e-03, 6.747935e-13),
    70: PublishedRow(6.143914e-10, 5.421869e-02, 1.820130e-02, 8.820722e-13),
    80: PublishedRow(1.220430e-09, 4.771142e-02, 6.050880e-02, 1.151368e-12),
    90: PublishedRow(2.089473e-09, 4.264961e-02, 2.066649e-01, 1.228462e-12),
    100: PublishedRow(2.273791e-09, 3.846343e-02, 4.420562e-01, 1.880540e-12),
}


def trend_eps(t: ArrayLike) -> FloatArray:
    """10^−14.4·(t+1)^6.9."""
    return 10.0**TREND_LOG_SCALE * (np.asarray(t, dtype=np.float64) + 1.0) ** TREND_EXPONENT


def fit_trend(t: ArrayLike, eps_lower: ArrayLike) -> tuple[float, float]:
    """(slope, intercept) of log10 ε̲ against log10 (t+1), by least squares."""
    t = np.asarray(t, dtype=np.float64)
    eps_lower = np.asarray(eps_lower, dtype=np.float64)
    if t.size < 2 or t.shape != eps_lower.shape or np.any(eps_lower <= 0.0):
        raise UsageError(
            err.USAGE_ERROR.format(error="need at least two positive ε̲ values, one per degree")
        )
    slope, intercept = np.polyfit(np.log10(t + 1.0), np.log10(eps_lower), 1)
    return float(slope), float(intercept)
