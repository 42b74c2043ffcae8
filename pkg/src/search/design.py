"""
Numerical search for spherical t_ε-designs with few points.

A point set X_N with weights w in the ε box is a t_ε-design when

    r(X, w) = Y(X)ᵀ w − √(4π) e₁ = 0.

The search alternates two steps on points parameterized by (θ, φ):

1. at fixed points, the weights solve the linear box-constrained least-squares
   problem min ‖Y(X)ᵀ w − √(4π) e₁‖ over the ε box (`lsq_linear`), or stay
   at 4π/N when ε = 0;
2. at fixed weights, a Levenberg-Marquardt step on (θ, φ) reduces ‖r‖, with
   ∂r/∂φ taken analytically and ∂r/∂θ by central differences.

A step is accepted when it lowers ‖r‖ (damping μ /= 3) and rejected otherwise
(μ *= 4). Several restarts from a jittered equal-area grid are tried in turn;
every result that reaches the residual tolerance is re-verified before it is
returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import lstsq
from scipy.optimize import lsq_linear

from ..approx.grids import equal_area_grid
from ..certify.records import RuleVerification
from ..certify.rules import QuadratureRule
from ..certify.weights import epsilon_from_weights, verify_rule, weight_bounds
from ..geometry.points import PointSet
from ..harmonics.ylm import azimuthal_derivative, design_matrix, dimension
from ..util.constants import FOUR_PI, config, err, logger
from ..util.exceptions import DesignNotFoundError, DesignWeightError, UsageError
from ..util.types import FloatArray

THETA_STEP = 1e-6
MAX_DAMPING = 1e12

########################################################
#              Configuration
########################################################


def point_count_bracket(t: int) -> tuple[int, int]:
    """⌈(t+1)²/3⌉ + 1 ≤ N(t, ε) ≤ ⌈(t+2)²/2⌉ + 1."""
    return math.ceil((t + 1) ** 2 / 3) + 1, math.ceil((t + 2) ** 2 / 2) + 1


@dataclass(frozen=True)
class SearchConfig:
    t: int
    epsilon: float = 0.0
    n: int | None = None
    max_iter: int = field(default_factory=lambda: int(config.SEARCH_MAX_ITER))
    tol: float = field(default_factory=lambda: float(config.SEARCH_TOL))
    restarts: int = field(default_factory=lambda: int(config.SEARCH_RESTARTS))
    jitter: float = field(default_factory=lambda: float(config.SEARCH_JITTER))
    seed: int = field(default_factory=lambda: int(config.DEFAULT_SEED))

    def validate(self) -> None:
        if self.t < 0:
            raise UsageError(err.USAGE_ERROR.format(error=f"degree must be ≥ 0, got {self.t}"))
        if not 0.0 <= self.epsilon < 1.0:
            raise UsageError(err.USAGE_ERROR.format(error=f"need 0 ≤ ε < 1, got {self.epsilon}"))
        if self.n is not None and self.n < 1:
            raise UsageError(err.USAGE_ERROR.format(error=f"point count must be ≥ 1, got {self.n}"))
        if self.max_iter < 1 or self.restarts < 1:
            raise UsageError(err.USAGE_ERROR.format(error="max_iter and restarts must be ≥ 1"))
        if not self.tol > 0.0 or self.jitter < 0.0:
            raise UsageError(err.USAGE_ERROR.format(error="need tol > 0 and jitter ≥ 0"))


@dataclass(frozen=True, eq=False)
class SearchResult:
    points: PointSet
    weights: FloatArray
    t: int
    epsilon: float
    eps_hat: float
    residual: float
    iterations: int
    converged: bool
    seed: int
    verification: RuleVerification | None = None

    @property
    def n(self) -> int:
        return self.points.n

    def to_rule(self) -> QuadratureRule:
        return QuadratureRule(self.points, self.weights, self.t)


########################################################
#              Residual and Jacobian
########################################################


def _rhs(t: int) -> FloatArray:
    rhs = np.zeros(dimension(t))
    rhs[0] = math.sqrt(FOUR_PI)
    return rhs


@dataclass
class _State:
    theta: FloatArray
    phi: FloatArray
    weights: FloatArray
    residual: FloatArray

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.residual))


class _Solver:
    def __init__(self, cfg: SearchConfig, n: int) -> None:
        self.cfg = cfg
        self.n = n
        self.rhs = _rhs(cfg.t)
        self.lo, self.hi = weight_bounds(cfg.epsilon, n)

    def weights_at(self, values: FloatArray) -> FloatArray:
        if self.cfg.epsilon == 0.0:
            return np.full(self.n, FOUR_PI / self.n)
        return lsq_linear(values.T, self.rhs, bounds=(self.lo, self.hi), method="bvls").x

    def state(self, theta: FloatArray, phi: FloatArray) -> _State:
        values = design_matrix(PointSet.from_spherical(theta, phi), self.cfg.t).values
        weights = self.weights_at(values)
        return _State(theta, phi, weights, values.T @ weights - self.rhs)

    def jacobian(self, s: _State) -> FloatArray:
        t = self.cfg.t
        matrix = design_matrix(PointSet.from_spherical(s.theta, s.phi), t)
        d_phi = azimuthal_derivative(matrix)
        upper = design_matrix(PointSet.from_spherical(s.theta + THETA_STEP, s.phi), t).values
        lower = design_matrix(PointSet.from_spherical(s.theta - THETA_STEP, s.phi), t).values
        d_theta = (upper - lower) / (2.0 * THETA_STEP)
        return np.hstack(((d_theta * s.weights[:, None]).T, (d_phi * s.weights[:, None]).T))

    def run(self, theta: FloatArray, phi: FloatArray) -> tuple[_State, int, bool]:
        current = self.state(theta, phi)
        damping = 1e-3
        for iteration in range(1, self.cfg.max_iter + 1):
            if current.norm < self.cfg.tol:
                return current, iteration - 1, True
            jac = self.jacobian(current)
            scale = math.sqrt(damping * max(float(np.max(np.sum(jac * jac, axis=0))), 1.0))
            system = np.vstack((jac, scale * np.eye(jac.shape[1])))
            target = np.concatenate((-current.residual, np.zeros(jac.shape[1])))
            step, *_ = lstsq(system, target)
            trial = self.state(current.theta + step[: self.n], current.phi + step[self.n :])
            if trial.norm < current.norm:
                current, damping = trial, damping / 3.0
            else:
                damping *= 4.0
                if damping > MAX_DAMPING:
                    logger.debug("Search stalled at ‖r‖ = %.3e", current.norm)
                    return current, iteration, False
        return current, self.cfg.max_iter, current.norm < self.cfg.tol


########################################################
#              Search
########################################################


def _initial_points(
    n: int, jitter: float, rng: np.random.Generator, init: PointSet | None
) -> tuple[FloatArray, FloatArray]:
    base = equal_area_grid(n) if init is None else init
    scale = jitter * math.sqrt(FOUR_PI / n)
    moved = base.xyz + scale * rng.standard_normal(base.xyz.shape)
    return PointSet.from_cartesian(moved, normalize=True).spherical()


def _result(
    cfg: SearchConfig, solver_state: _State, iterations: int, converged: bool, seed: int
) -> SearchResult:
    points = PointSet.from_spherical(solver_state.theta, solver_state.phi)
    weights = solver_state.weights
    try:
        eps_hat = epsilon_from_weights(weights)
    except DesignWeightError:
        eps_hat = math.inf
    return SearchResult(
        points=points,
        weights=weights,
        t=cfg.t,
        epsilon=cfg.epsilon,
        eps_hat=eps_hat,
        residual=solver_state.norm,
        iterations=iterations,
        converged=converged,
        seed=seed,
    )


def _verified(result: SearchResult, cfg: SearchConfig) -> SearchResult | None:
    try:
        verification = verify_rule(result.to_rule())
    except DesignWeightError as e:
        logger.debug("Converged iterate rejected: %s", e)
        return None
    if not verification.passes(cfg.tol, cfg.epsilon):
        return None
    return replace(result, verification=verification)


def find_design(cfg: SearchConfig, init: PointSet | None = None) -> SearchResult:
    """Search for an N-point spherical t_ε-design.

    Raises:
        DesignNotFoundError: if no restart reaches the tolerance; carries the
            restart with the smallest residual.
    """
    cfg.validate()
    n = cfg.n if cfg.n is not None else point_count_bracket(cfg.t)[1]
    if init is not None and init.n != n:
        raise UsageError(err.USAGE_ERROR.format(error=f"initial set has {init.n} points, not {n}"))
    lo, hi = point_count_bracket(cfg.t)
    if not lo <= n <= hi:
        logger.warning("N = %d lies outside the bracket [%d, %d] for t = %d", n, lo, hi, cfg.t)

    solver = _Solver(cfg, n)
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    best: SearchResult | None = None
    for restart, child in enumerate(children):
        rng = np.random.default_rng(child)
        jitter = 0.0 if init is not None and restart == 0 else cfg.jitter
        theta, phi = _initial_points(n, jitter, rng, init)
        state, iterations, converged = solver.run(theta, phi)
        result = _result(cfg, state, iterations, converged, cfg.seed)
        logger.debug(
            "Restart %d (t=%d, N=%d, ε=%g): ‖r‖ = %.3e after %d iterations",
            restart,
            cfg.t,
            n,
            cfg.epsilon,
            result.residual,
            iterations,
        )
        if converged and (verified := _verified(result, cfg)) is not None:
            logger.info("Found a %d_%g-design with N = %d", cfg.t, cfg.epsilon, n)
            return verified
        if best is None or result.residual < best.residual:
            best = result

    best_residual = best.residual if best is not None else math.inf
    raise DesignNotFoundError(
        err.SEARCH_ERROR.format(
            error=(
                f"no {cfg.t}_{cfg.epsilon:g}-design with N = {n} after {cfg.restarts} restarts "
                f"(best ‖r‖ = {best_residual:.3e})"
            )
        ),
        best,
    )


########################################################
#              Minimal-N scan
########################################################


@dataclass(frozen=True)
class ScanDiagnostic:
    n: int
    residual: float
    iterations: int
    converged: bool


@dataclass(frozen=True, eq=False)
class ScanResult:
    t: int
    epsilon: float
    n: int
    result: SearchResult
    diagnostics: list[ScanDiagnostic]


def minimal_N_scan(  # noqa: N802
    t: int,
    epsilon: float,
    n_range: tuple[int, int] | None = None,
    base: SearchConfig | None = None,
) -> ScanResult:
    """Smallest N in the range for which `find_design` succeeds.

    Raises:
        DesignNotFoundError: if every N in the range fails; carries the best
            iterate over the whole scan.
    """
    lo, hi = n_range if n_range is not None else point_count_bracket(t)
    template = base if base is not None else SearchConfig(t=t)
    diagnostics: list[ScanDiagnostic] = []
    best: SearchResult | None = None
    for n in range(lo, hi + 1):
        cfg = SearchConfig(
            t=t,
            epsilon=epsilon,
            n=n,
            max_iter=template.max_iter,
            tol=template.tol,
            restarts=template.restarts,
            jitter=template.jitter,
            seed=template.seed,
        )
        try:
            result = find_design(cfg)
        except DesignNotFoundError as e:
            if e.best is not None:
                diagnostics.append(
                    ScanDiagnostic(n, e.best.residual, e.best.iterations, converged=False)
                )
                if best is None or e.best.residual < best.residual:
                    best = e.best
            continue
        diagnostics.append(ScanDiagnostic(n, result.residual, result.iterations, converged=True))
        return ScanResult(t=t, epsilon=epsilon, n=n, result=result, diagnostics=diagnostics)

    raise DesignNotFoundError(
        err.SEARCH_ERROR.format(error=f"bracket [{lo}, {hi}] exhausted for t={t}, ε={epsilon:g}"),
        best,
    )


__all__ = [
    "ScanDiagnostic",
    "ScanResult",
    "SearchConfig",
    "SearchResult",
    "find_design",
    "minimal_N_scan",
    "point_count_bracket",
]
