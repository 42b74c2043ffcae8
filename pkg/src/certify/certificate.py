"""
Lower bounds ε̲ certifying that point sets are fundamental spherical t_ε-designs.

Both certificates rest on τ = √((2t+1)/4π)·(t+1)³ and κ = ‖Y(X̃)⁻¹‖₁ at a
reference point set X̃:

    point set near a design X⁰:   ε̲ = τσκ / (1 − τσκ),      σ = σ(X, X⁰)
    enclosure set with centers X̃: ε̲ = 2τ·rad·κ / (1 − 4τ·rad·κ)

The enclosure bound holds for every selection X_N ∈ 𝕏_N provided
rad < ρ/4 and 4τ·rad·κ < 1. A certificate whose hypotheses fail is never
returned; `CertificateRefusedError` carries it instead so callers can report
the diagnostics.
"""

from __future__ import annotations

import math

import numpy as np

from ..geometry.distances import hausdorff, separation
from ..geometry.enclosures import EnclosureSet, random_selection
from ..geometry.points import PointSet
from ..harmonics.ylm import design_matrix, dimension
from ..util.constants import FOUR_PI, config, err, logger
from ..util.exceptions import (
    CertificateRefusedError,
    DesignWeightError,
    NotFundamentalSystemError,
    OverlappingEnclosuresError,
    UsageError,
)
from ..util.types import FloatArray
from .records import EpsilonCertificate
from .weights import epsilon_from_weights, one_norm_inverse, solve_weights

RECHECK_RTOL = 1e-12

########################################################
#              Bound formulas
########################################################


def tau(t: int) -> float:
    """τ = √((2t+1)/4π)·(t+1)³.

    Examples:
        >>> round(tau(1), 6)
        3.90882
    """
    if t < 0:
        raise UsageError(err.USAGE_ERROR.format(error=f"degree must be ≥ 0, got {t}"))
    return math.sqrt((2 * t + 1) / FOUR_PI) * (t + 1) ** 3


def eps_lower_enclosures(tau_t: float, rad: float, kappa: float) -> float | None:
    """2τ·rad·κ / (1 − 4τ·rad·κ), or None when 4τ·rad·κ ≥ 1."""
    q = 4.0 * tau_t * rad * kappa
    if not q < 1.0:
        return None
    return 0.5 * q / (1.0 - q)


def eps_lower_point_set(tau_t: float, sigma: float, kappa: float) -> float | None:
    """τσκ / (1 − τσκ), or None when τσκ ≥ 1."""
    p = tau_t * sigma * kappa
    if not p < 1.0:
        return None
    return p / (1.0 - p)


def sigma_star(tau_t: float, kappa: float, rho: float) -> float:
    """½·min(1/(τκ), ρ), the admissible Hausdorff distance around a design."""
    return 0.5 * min(1.0 / (tau_t * kappa), rho)


def center_resolution(enclosures: EnclosureSet) -> float:
    """Largest half-ulp of the center coordinates, as a geodesic distance.

    Representing x̃_i in floating point moves it by at most half a unit in the
    last place of θ̃ and φ̃, i.e. by ½·hypot(spacing(θ̃), sin θ̃·spacing(φ̃)).
    """
    theta, phi = enclosures.center_coordinates()
    moves = 0.5 * np.hypot(np.spacing(theta), np.sin(theta) * np.spacing(phi))
    return float(moves.max())


def _refuse(certificate: EpsilonCertificate) -> None:
    failed = ", ".join(certificate.failed_hypotheses()) or "ε̲ undefined"
    logger.warning("Certificate refused for t=%d, N=%d: %s", certificate.t, certificate.n, failed)
    raise CertificateRefusedError(
        err.CERTIFICATE_ERROR.format(error=f"certificate refused: {failed}"), certificate
    )


########################################################
#              Point-set certificate
########################################################


def certify_point_set(points: PointSet, design: PointSet, t: int) -> EpsilonCertificate:
    """Certify a point set lying within σ* of a known spherical t-design.

    Raises:
        UsageError: if the point counts differ from (t+1)².
        CertificateRefusedError: if σ(X, X⁰) ≥ σ* or X⁰ is not a fundamental system.
    """
    n = dimension(t)
    if points.n != n or design.n != n:
        raise UsageError(
            err.USAGE_ERROR.format(
                error=f"point sets of size {points.n} and {design.n}; expected (t+1)² = {n}"
            )
        )
    tau_t = tau(t)
    try:
        kappa = one_norm_inverse(design_matrix(design, t))
        fundamental = True
    except NotFundamentalSystemError:
        kappa, fundamental = math.inf, False

    rho = separation(design) if n > 1 else math.inf
    sigma = hausdorff(points, design)
    star = sigma_star(tau_t, kappa, rho) if fundamental else 0.0
    eps_lower = eps_lower_point_set(tau_t, sigma, kappa) if fundamental else None

    certificate = EpsilonCertificate(
        kind="point_set",
        t=t,
        n=n,
        rad=sigma,
        rho=rho,
        tau=tau_t,
        kappa=kappa,
        eps_lower=eps_lower,
        hypothesis_ok={
            "fundamental_system": fundamental,
            "sigma_below_sigma_star": fundamental and (sigma == 0.0 or sigma < star),
            "eps_lower_below_one": eps_lower is not None and eps_lower < 1.0,
        },
        sigma_star=star,
    )
    if not certificate.valid:
        _refuse(certificate)
    logger.info("Point-set certificate t=%d: σ=%.6e, κ=%.6e, ε̲=%.6e", t, sigma, kappa, eps_lower)
    return certificate


########################################################
#              Enclosure certificate
########################################################


def _center_epsilons(
    centers: PointSet, t: int, tau_t: float, kappa: float, sigma: float
) -> tuple[float | None, float | None]:
    try:
        eps_weights: float | None = epsilon_from_weights(solve_weights(centers, t).weights)
    except (DesignWeightError, NotFundamentalSystemError) as e:
        logger.debug("No ε̂ at the centers: %s", e)
        eps_weights = None
    return eps_weights, eps_lower_enclosures(tau_t, sigma, kappa)


def certify_enclosures(
    enclosures: EnclosureSet,
    t: int,
    exact: bool | None = None,
    center_sigma: float | None = None,
) -> EpsilonCertificate:
    """Certify that every selection from an enclosure set is a fundamental t_ε-design.

    Rectangles are replaced by their cap cover; κ is evaluated at the centers
    x̃_i. Alongside ε̲ the certificate reports two values of ε at the centers
    themselves: ε̂ from the solved weights, and the bound formula with rad
    replaced by σ (default: the floating-point resolution of the centers).

    Raises:
        UsageError: if N ≠ (t+1)².
        OverlappingEnclosuresError: if ρ < 0.
        CertificateRefusedError: if any hypothesis fails.
    """
    n = dimension(t)
    if enclosures.n != n:
        raise UsageError(
            err.USAGE_ERROR.format(error=f"{enclosures.n} enclosures; expected (t+1)² = {n}")
        )
    stats = enclosures.stats
    if stats.overlapping:
        raise OverlappingEnclosuresError(
            err.ENCLOSURE_ERROR.format(error=f"overlapping enclosures (ρ = {stats.rho:.6e})"),
            stats.rho,
        )

    tau_t = tau(t)
    centers = enclosures.centers()
    if exact is None:
        exact = t <= config.EXACT_NORM_MAX_T
    try:
        kappa = one_norm_inverse(design_matrix(centers, t), exact=exact)
        fundamental = True
    except NotFundamentalSystemError:
        kappa, fundamental = math.inf, False

    eps_lower = eps_lower_enclosures(tau_t, stats.rad, kappa) if fundamental else None
    resolution = center_resolution(enclosures)
    sigma = resolution if center_sigma is None else center_sigma
    eps_weights, eps_formula = (
        _center_epsilons(centers, t, tau_t, kappa, sigma) if fundamental else (None, None)
    )

    certificate = EpsilonCertificate(
        kind="enclosures",
        t=t,
        n=n,
        rad=stats.rad,
        rho=stats.rho,
        tau=tau_t,
        kappa=kappa,
        eps_lower=eps_lower,
        hypothesis_ok={
            "fundamental_system": fundamental,
            "rad_below_quarter_rho": stats.rad == 0.0 or stats.rad < 0.25 * stats.rho,
            "contraction_below_one": 4.0 * tau_t * stats.rad * kappa < 1.0,
            "eps_lower_below_one": eps_lower is not None and eps_lower < 1.0,
            "enclosures_disjoint": not stats.overlapping,
        },
        eps_center_weights=eps_weights,
        eps_center_formula=eps_formula,
        center_resolution=resolution,
        meta={"enclosure_kind": enclosures.kind, "exact_norm": exact},
    )
    if not certificate.valid:
        _refuse(certificate)
    logger.info(
        "Enclosure certificate t=%d: rad=%.6e, ρ=%.6e, κ=%.6e, ε̲=%.6e",
        t,
        stats.rad,
        stats.rho,
        kappa,
        eps_lower,
    )
    return certificate


def selection_epsilons(
    enclosures: EnclosureSet, t: int, trials: int, seed: int | None = None
) -> FloatArray:
    """ε̂ of the solved weights for `trials` random selections X_N ∈ 𝕏_N."""
    children = np.random.SeedSequence(config.DEFAULT_SEED if seed is None else seed).spawn(trials)
    values = np.empty(trials)
    for i, child in enumerate(children):
        selection = random_selection(enclosures, np.random.default_rng(child))
        values[i] = epsilon_from_weights(solve_weights(selection, t).weights)
    return values


########################################################
#              Re-checking stored certificates
########################################################


def _close(a: float | None, b: float | None) -> bool:
    if a is None or b is None:
        return a is b
    if math.isinf(a) or math.isinf(b):
        return a == b
    return math.isclose(a, b, rel_tol=RECHECK_RTOL, abs_tol=0.0)


def recheck_certificate(certificate: EpsilonCertificate) -> EpsilonCertificate:
    """Recompute ε̲ and the hypothesis flags from the stored τ, κ, rad and ρ.

    Only arithmetic is repeated: κ and rad are trusted as recorded.

    Raises:
        CertificateRefusedError: if the stored τ or ε̲ disagree with the
            recomputed values, or if the recomputed hypotheses fail.
    """
    c = certificate
    tau_t = tau(c.t)
    if c.kind == "enclosures":
        eps_lower = eps_lower_enclosures(tau_t, c.rad, c.kappa)
        flags = {
            "fundamental_system": math.isfinite(c.kappa),
            "rad_below_quarter_rho": c.rad == 0.0 or c.rad < 0.25 * c.rho,
            "contraction_below_one": 4.0 * tau_t * c.rad * c.kappa < 1.0,
            "eps_lower_below_one": eps_lower is not None and eps_lower < 1.0,
            "enclosures_disjoint": c.rho >= 0.0,
        }
        star = c.sigma_star
    else:
        eps_lower = eps_lower_point_set(tau_t, c.rad, c.kappa)
        star = sigma_star(tau_t, c.kappa, c.rho)
        flags = {
            "fundamental_system": math.isfinite(c.kappa),
            "sigma_below_sigma_star": c.rad == 0.0 or c.rad < star,
            "eps_lower_below_one": eps_lower is not None and eps_lower < 1.0,
        }

    rechecked = c.model_copy(
        update={
            "tau": tau_t,
            "eps_lower": eps_lower,
            "hypothesis_ok": flags,
            "sigma_star": star,
            "meta": {**c.meta, "rechecked": True},
        }
    )
    mismatches = [
        name
        for name, stored, fresh in (("tau", c.tau, tau_t), ("eps_lower", c.eps_lower, eps_lower))
        if not _close(stored, fresh)
    ]
    if mismatches:
        raise CertificateRefusedError(
            err.CERTIFICATE_ERROR.format(
                error=f"stored {', '.join(mismatches)} does not match the recomputed value"
            ),
            rechecked,
        )
    if not rechecked.valid:
        _refuse(rechecked)
    return rechecked


__all__ = [
    "center_resolution",
    "certify_enclosures",
    "certify_point_set",
    "eps_lower_enclosures",
    "eps_lower_point_set",
    "recheck_certificate",
    "selection_epsilons",
    "sigma_star",
    "tau",
]
