"""
Regularized weighted least-squares approximation on t_ε-designs.

For samples f^δ(x_j) at the nodes of a rule with weights w_j, the model

    min_α ½‖Λ^{½}(Y_L α − f^δ)‖²₂ + λ‖Dα‖₁,     Λ = diag(w), D = diag(β)

has, whenever the Gram matrix H_L = Y_Lᵀ Λ Y_L is the identity (a rule of
algebraic accuracy t ≥ 2L), the coordinatewise soft-thresholding solution

    α_{ℓ,k} = max{0, s_{ℓ,k} − λβ_{ℓ,k}} + min{0, s_{ℓ,k} + λβ_{ℓ,k}},
    s = Y_Lᵀ Λ f^δ.

The ℓ2-regularized variant with penalty λ‖Dα‖²₂ solves to s/(1 + 2λβ²).
Both solvers refuse to run when H_L deviates from the identity by more than
GRAM_TOL, since neither formula then minimizes its objective.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..certify.rules import QuadratureRule
from ..geometry.points import PointSet
from ..harmonics.ylm import DesignMatrix, design_matrix, dimension
from ..util.constants import FOUR_PI, config, err, logger
from ..util.exceptions import GramDeviationError, UsageError
from ..util.types import ArrayLike, FloatArray, RegularizationModel
from .grids import equal_area_grid

Target = Callable[[PointSet], FloatArray]

########################################################
#              Problem and coefficients
########################################################


def laplace_beltrami_betas(L: int) -> FloatArray:
    """β_{ℓ,k} = ℓ(ℓ+1) for every k, in design-matrix column order."""
    ell = np.repeat(np.arange(L + 1), 2 * np.arange(L + 1) + 1)
    return (ell * (ell + 1)).astype(np.float64)


@dataclass(frozen=True)
class PolynomialCoefficients:
    """α_{ℓ,k} of p = Σ α_{ℓ,k} Y_{ℓ,k}, flattened in design-matrix column order."""

    alpha: FloatArray
    L: int

    def __post_init__(self) -> None:
        alpha = np.asarray(self.alpha, dtype=np.float64).reshape(-1)
        if alpha.size != dimension(self.L) or not np.all(np.isfinite(alpha)):
            raise UsageError(
                err.USAGE_ERROR.format(
                    error=f"need {dimension(self.L)} finite coefficients for degree {self.L}"
                )
            )
        object.__setattr__(self, "alpha", alpha)

    @property
    def sparsity(self) -> int:
        """Number of coefficients that are exactly zero."""
        return int(np.count_nonzero(self.alpha == 0.0))


@dataclass(frozen=True, eq=False)
class RegularizationProblem:
    rule: QuadratureRule
    samples: FloatArray
    L: int
    lam: float = 0.0
    beta: FloatArray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64).reshape(-1)
        if samples.size != self.rule.n:
            raise UsageError(
                err.USAGE_ERROR.format(error=f"{samples.size} samples for {self.rule.n} nodes")
            )
        if self.L < 0:
            raise UsageError(err.USAGE_ERROR.format(error=f"degree must be ≥ 0, got {self.L}"))
        if not math.isfinite(self.lam) or self.lam < 0.0:
            raise UsageError(err.USAGE_ERROR.format(error=f"λ must be ≥ 0, got {self.lam}"))
        beta = (
            laplace_beltrami_betas(self.L)
            if self.beta is None
            else np.asarray(self.beta, dtype=np.float64).reshape(-1)
        )
        if beta.size != dimension(self.L) or not np.all(np.isfinite(beta)) or np.any(beta < 0):
            raise UsageError(
                err.USAGE_ERROR.format(error="β must hold (L+1)² finite nonnegative values")
            )
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "beta", beta)

    @cached_property
    def design(self) -> DesignMatrix:
        return design_matrix(self.rule.points, self.L)

    @cached_property
    def data(self) -> FloatArray:
        """s = Y_Lᵀ Λ f^δ."""
        return self.design.values.T @ (self.rule.weights * self.samples)

    @cached_property
    def gram_deviation(self) -> float:
        return _gram_deviation(self.design, self.rule.weights)

    def check_gram(self) -> None:
        if self.rule.t < 2 * self.L:
            raise GramDeviationError(
                err.APPROX_ERROR.format(
                    error=f"closed form needs t ≥ 2L, got t={self.rule.t}, L={self.L}"
                )
            )
        if self.gram_deviation > config.GRAM_TOL:
            raise GramDeviationError(
                err.APPROX_ERROR.format(
                    error=(
                        f"‖H_L − I‖_max = {self.gram_deviation:.3e} exceeds {config.GRAM_TOL:g}; "
                        "the closed form does not apply"
                    )
                )
            )


def _gram_deviation(design: DesignMatrix, weights: FloatArray) -> float:
    gram = design.values.T @ (weights[:, None] * design.values)
    return float(np.abs(gram - np.eye(design.dim)).max())


def gram_deviation(rule: QuadratureRule, L: int) -> float:
    """‖Y_Lᵀ Λ Y_L − I‖_max."""
    return _gram_deviation(design_matrix(rule.points, L), rule.weights)


def data_coefficients(problem: RegularizationProblem) -> FloatArray:
    """s_{ℓ,k} = Σ_i w_i Y_{ℓ,k}(x_i) f^δ(x_i)."""
    return problem.data


########################################################
#              Closed-form solvers
########################################################


def soft_threshold(values: ArrayLike, threshold: ArrayLike) -> FloatArray:
    values = np.asarray(values, dtype=np.float64)
    return np.sign(values) * np.maximum(np.abs(values) - threshold, 0.0)


def solve_l1(problem: RegularizationProblem, lam: float | None = None) -> PolynomialCoefficients:
    """ℓ2-ℓ1 minimizer by soft thresholding; `lam` overrides the problem's λ."""
    problem.check_gram()
    lam = problem.lam if lam is None else lam
    alpha = soft_threshold(problem.data, lam * problem.beta)
    return PolynomialCoefficients(alpha, problem.L)


def solve_l2(problem: RegularizationProblem, lam: float | None = None) -> PolynomialCoefficients:
    """ℓ2-ℓ2 minimizer s/(1 + 2λβ²)."""
    problem.check_gram()
    lam = problem.lam if lam is None else lam
    return PolynomialCoefficients(problem.data / (1.0 + 2.0 * lam * problem.beta**2), problem.L)


SOLVERS: dict[RegularizationModel, Callable[..., PolynomialCoefficients]] = {
    "l1": solve_l1,
    "l2": solve_l2,
}


########################################################
#              Evaluation and errors
########################################################


def evaluate_poly(coefficients: PolynomialCoefficients, points: PointSet) -> FloatArray:
    """p_{L,N}(x) at every point, in blocks of EVAL_CHUNK points."""
    chunk = max(1, int(config.EVAL_CHUNK))
    parts = [
        design_matrix(points.take(np.arange(start, min(start + chunk, points.n))), coefficients.L)
        .values
        @ coefficients.alpha
        for start in range(0, points.n, chunk)
    ]
    return np.concatenate(parts) if parts else np.zeros(0)


@dataclass(frozen=True)
class ErrorNorms:
    uniform: float
    l2: float


def error_norms(
    f_true: Target | ArrayLike,
    coefficients: PolynomialCoefficients,
    grid: PointSet | None = None,
) -> ErrorNorms:
    """max |f − p| and (4π/N_t Σ (f − p)²)^½ over an equal-area grid."""
    grid = equal_area_grid(int(config.GRID_SIZE)) if grid is None else grid
    if grid.n < 1:
        raise UsageError(err.USAGE_ERROR.format(error="empty error grid"))
    exact = f_true(grid) if callable(f_true) else np.asarray(f_true, dtype=np.float64)
    deviation = exact - evaluate_poly(coefficients, grid)
    return ErrorNorms(
        uniform=float(np.abs(deviation).max()),
        l2=math.sqrt(FOUR_PI / grid.n * math.fsum(deviation**2)),
    )


def residual(
    problem: RegularizationProblem, coefficients: PolynomialCoefficients, weighted: bool = True
) -> float:
    """Σ_j μ_j (p(x_j) − f^δ(x_j))² with μ = w (weighted) or μ = 1."""
    deviation = problem.design.values @ coefficients.alpha - problem.samples
    mu = problem.rule.weights if weighted else 1.0
    return math.fsum(mu * deviation**2)


########################################################
#              λ sweeps
########################################################


def lambda_grid(lo: float = -20.0, hi: float = 0.5, step: float = 0.5) -> FloatArray:
    """10^lo, 10^(lo+step), ..., 10^hi."""
    if not step > 0.0 or hi < lo:
        raise UsageError(err.USAGE_ERROR.format(error=f"bad λ grid {lo}:{hi}:{step}"))
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return 10.0 ** (lo + step * np.arange(count))


def parse_lambda_grid(text: str) -> FloatArray:
    """Parse `lo:hi:step` (log10 exponents)."""
    try:
        lo, hi, step = (float(part) for part in text.split(":"))
    except ValueError as e:
        raise UsageError(
            err.USAGE_ERROR.format(error=f"λ grid must read lo:hi:step, got {text!r}")
        ) from e
    return lambda_grid(lo, hi, step)


@dataclass(frozen=True)
class SweepRow:
    lam: float
    uniform_err: float
    l2_err: float
    sparsity: int
    residual: float


def lambda_sweep(
    problem: RegularizationProblem,
    lambdas: Iterable[float],
    model: RegularizationModel = "l1",
    f_true: Target | ArrayLike | None = None,
    grid: PointSet | None = None,
) -> list[SweepRow]:
    """Solve for every λ reusing s; errors are NaN without a true function."""
    solver = SOLVERS[model]
    problem.check_gram()
    if f_true is not None:
        grid = equal_area_grid(int(config.GRID_SIZE)) if grid is None else grid
        if callable(f_true):
            f_true = f_true(grid)

    rows = []
    for lam in lambdas:
        coefficients = solver(problem, lam)
        norms = (
            error_norms(f_true, coefficients, grid)
            if f_true is not None
            else ErrorNorms(math.nan, math.nan)
        )
        rows.append(
            SweepRow(
                lam=float(lam),
                uniform_err=norms.uniform,
                l2_err=norms.l2,
                sparsity=coefficients.sparsity,
                residual=residual(problem, coefficients),
            )
        )
    logger.debug("λ sweep (%s) over %d values, L=%d", model, len(rows), problem.L)
    return rows


__all__ = [
    "ErrorNorms",
    "PolynomialCoefficients",
    "SOLVERS",
    "RegularizationProblem",
    "SweepRow",
    "data_coefficients",
    "error_norms",
    "evaluate_poly",
    "gram_deviation",
    "lambda_grid",
    "lambda_sweep",
    "laplace_beltrami_betas",
    "parse_lambda_grid",
    "residual",
    "soft_threshold",
    "solve_l1",
    "solve_l2",
]
