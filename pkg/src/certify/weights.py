"""
Weyl sums, quadrature weights, and the ‖Y⁻¹‖₁ machinery.

A point set X_N with weights w integrates P_t exactly iff

    Y(X_N)ᵀ w = √(4π) e₁,

since column 1 of Y is the constant 1/√(4π) and every other harmonic has zero
mean. For a fundamental system (N = (t+1)², Y nonsingular) the weights are
unique; ε̂ then measures how far they stray from the equal weight 4π/N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lstsq, lu_factor, lu_solve
from scipy.linalg.lapack import dgecon
from scipy.sparse.linalg import LinearOperator, onenormest

from ..geometry.distances import hausdorff, nearest_pairing, separation
from ..geometry.points import PointSet
from ..harmonics.ylm import DesignMatrix, design_matrix, dimension
from ..util.constants import FOUR_PI, config, err, logger
from ..util.exceptions import DesignWeightError, NotFundamentalSystemError, PairingError
from ..util.types import ArrayLike, FloatArray
from .records import RuleVerification
from .rules import QuadratureRule

SQRT_FOUR_PI = math.sqrt(FOUR_PI)

########################################################
#              Factorization
########################################################


@dataclass(frozen=True)
class LUFactorization:
    lu: FloatArray
    piv: np.ndarray
    condition: float

    def solve(self, rhs: ArrayLike, transpose: bool = False) -> FloatArray:
        return lu_solve((self.lu, self.piv), rhs, trans=1 if transpose else 0)


def factorize(matrix: FloatArray) -> LUFactorization:
    """LU-factorize a square matrix and estimate its 1-norm condition number.

    Raises:
        NotFundamentalSystemError: if the condition estimate exceeds COND_LIMIT.
    """
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise NotFundamentalSystemError(
            err.SINGULAR_ERROR.format(error=f"expected a square matrix, got {matrix.shape}")
        )
    lu, piv = lu_factor(matrix, check_finite=True)
    rcond, _ = dgecon(lu, np.linalg.norm(matrix, 1), norm="1")
    condition = math.inf if rcond == 0.0 else 1.0 / rcond
    logger.debug("LU of %dx%d matrix: condition estimate %.3e", *matrix.shape, condition)
    if not condition <= config.COND_LIMIT:
        raise NotFundamentalSystemError(
            err.SINGULAR_ERROR.format(
                error=f"not a fundamental system: condition estimate {condition:.3e}"
            )
        )
    return LUFactorization(lu=lu, piv=piv, condition=condition)


########################################################
#              Weyl sums and weights
########################################################


@dataclass(frozen=True)
class WeylSums:
    t: int
    values: FloatArray
    """Σ_i Y_{ℓ,k}(x_i) for ℓ = 1..t, flattened in design-matrix column order."""

    @property
    def max_abs(self) -> float:
        return float(np.abs(self.values).max()) if self.values.size else 0.0


def weyl_sums(points: PointSet, t: int) -> WeylSums:
    """Weyl sums of degree 1..t; they all vanish iff X_N is a spherical t-design."""
    if t < 1:
        raise NotFundamentalSystemError(err.SINGULAR_ERROR.format(error="Weyl sums need t ≥ 1"))
    values = design_matrix(points, t).values[:, 1:].sum(axis=0)
    return WeylSums(t=t, values=values)


@dataclass(frozen=True)
class WeightSolution:
    weights: FloatArray
    residual: float
    condition: float
    square: bool


def _exactness_rhs(dim: int) -> FloatArray:
    rhs = np.zeros(dim)
    rhs[0] = SQRT_FOUR_PI
    return rhs


def exactness_residual(matrix: DesignMatrix, weights: ArrayLike) -> float:
    """‖Y(X_N)ᵀ w − √(4π) e₁‖₂."""
    lhs = matrix.values.T @ np.asarray(weights, dtype=np.float64)
    return float(np.linalg.norm(lhs - _exactness_rhs(matrix.dim)))


def solve_weights(points: PointSet, t: int) -> WeightSolution:
    """Solve Y(X_N)ᵀ w = √(4π) e₁ for the weights.

    N = (t+1)² is solved through an LU factorization of Y. Other N are solved
    in the least-squares sense (minimum norm when underdetermined) and the
    residual reports how far the point set is from admitting exact weights.
    """
    matrix = design_matrix(points, t)
    rhs = _exactness_rhs(matrix.dim)
    if matrix.is_square:
        factors = factorize(matrix.values)
        weights = factors.solve(rhs, transpose=True)
        condition = factors.condition
    else:
        weights, _, _, singular = lstsq(matrix.values.T, rhs)
        condition = math.inf if singular[-1] == 0.0 else float(singular[0] / singular[-1])
        if not condition <= config.COND_LIMIT:
            raise NotFundamentalSystemError(
                err.SINGULAR_ERROR.format(error=f"rank-deficient design matrix ({condition:.3e})")
            )
    residual = exactness_residual(matrix, weights)
    logger.debug("Weights for N=%d, t=%d: residual %.3e", points.n, t, residual)
    return WeightSolution(
        weights=weights, residual=residual, condition=condition, square=matrix.is_square
    )


########################################################
#              ε from weights
########################################################


def weight_bounds(epsilon: float, n: int) -> tuple[float, float]:
    """The t_ε weight box [4π(1−ε)/N, 4π/((1−ε)N)]."""
    return FOUR_PI * (1.0 - epsilon) / n, FOUR_PI / ((1.0 - epsilon) * n)


def epsilon_from_weights(weights: ArrayLike, n: int | None = None) -> float:
    """Smallest ε for which every weight lies in the t_ε weight box.

    Examples:
        >>> epsilon_from_weights([math.pi] * 4)
        0.0
    """
    weights = np.asarray(weights, dtype=np.float64)
    n = weights.size if n is None else n
    if np.any(weights <= 0.0):
        raise DesignWeightError(
            err.WEIGHT_ERROR.format(error="nonpositive weight: not a t_ε-design for any ε < 1")
        )
    ratio = n * weights / FOUR_PI
    return float(max(0.0, np.max(1.0 - ratio), np.max(1.0 - 1.0 / ratio)))


def verify_rule(rule: QuadratureRule) -> RuleVerification:
    """Exactness residual, weight sum and ε̂ of a rule, using its own weights."""
    matrix = design_matrix(rule.points, rule.t)
    return RuleVerification(
        t=rule.t,
        n=rule.n,
        residual=exactness_residual(matrix, rule.weights),
        weight_sum=math.fsum(rule.weights),
        eps_hat=epsilon_from_weights(rule.weights),
    )


########################################################
#              ‖Y⁻¹‖₁
########################################################


def one_norm_inverse(matrix: DesignMatrix | FloatArray, exact: bool | None = None) -> float:
    """κ = ‖Y⁻¹‖₁, the largest absolute column sum of the inverse.

    The exact mode solves against the identity with one LU factorization. The
    estimator mode (Higham-Tisseur block 1-norm estimation) only needs a few
    solves and returns a lower bound on the exact value. By default the exact
    mode is used up to degree EXACT_NORM_MAX_T.
    """
    if isinstance(matrix, DesignMatrix):
        values = matrix.values
    else:
        values = np.asarray(matrix, dtype=np.float64)
    n = values.shape[0]
    if exact is None:
        exact = n <= dimension(config.EXACT_NORM_MAX_T)
    factors = factorize(values)

    if exact:
        inverse = factors.solve(np.eye(n))
        return float(np.abs(inverse).sum(axis=0).max())

    operator = LinearOperator(
        (n, n),
        matvec=factors.solve,
        rmatvec=lambda v: factors.solve(v, transpose=True),
        matmat=factors.solve,
        rmatmat=lambda v: factors.solve(v, transpose=True),
        dtype=np.float64,
    )
    return float(onenormest(operator))


########################################################
#              Perturbation bound
########################################################


@dataclass(frozen=True)
class PerturbationBound:
    bound: float
    sigma: float
    rho: float
    actual: float | None = None


def perturbation_bound(
    points: PointSet, perturbed: PointSet, t: int, verify: bool = False
) -> PerturbationBound:
    """N(t+1)√((2t+1)/4π)·σ(X, X'), an upper bound on ‖Y(X) − Y(X')‖₁.

    With `verify`, X' is reordered by the nearest-point pairing and the actual
    1-norm of the difference is measured as well.
    """
    sigma = hausdorff(points, perturbed)
    rho = separation(points) if points.n > 1 else math.inf
    if not sigma < 0.5 * rho:
        raise PairingError(
            err.GEOMETRY_ERROR.format(
                error=f"σ(X, X') = {sigma:.3e} is not below half the separation {rho:.3e}"
            )
        )
    bound = points.n * (t + 1) * math.sqrt((2 * t + 1) / FOUR_PI) * sigma

    actual = None
    if verify:
        paired = perturbed.take(nearest_pairing(points, perturbed))
        difference = design_matrix(points, t).values - design_matrix(paired, t).values
        actual = float(np.abs(difference).sum(axis=0).max())
    return PerturbationBound(bound=bound, sigma=sigma, rho=rho, actual=actual)
