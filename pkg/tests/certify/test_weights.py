import math

import numpy as np
import pytest

from src.approx.grids import equal_area_grid
from src.certify.weights import (
    epsilon_from_weights,
    exactness_residual,
    factorize,
    one_norm_inverse,
    perturbation_bound,
    solve_weights,
    verify_rule,
    weight_bounds,
    weyl_sums,
)
from src.geometry.distances import separation
from src.geometry.points import PointSet, random_points
from src.harmonics.ylm import design_matrix
from src.util.exceptions import DesignWeightError, NotFundamentalSystemError, PairingError


def test_tetrahedron_weyl_sums(tet):
    """Test that the Weyl sums of the tetrahedron vanish for t = 1."""
    sums = weyl_sums(tet, 1)
    assert sums.values.shape == (3,)
    assert sums.max_abs < 1e-14
    with pytest.raises(NotFundamentalSystemError):
        weyl_sums(tet, 0)


def test_tetrahedron_weights(tet):
    """Test that the tetrahedron solves to four weights π with ε̂ = 0."""
    solution = solve_weights(tet, 1)
    assert solution.square
    np.testing.assert_allclose(solution.weights, np.pi, atol=1e-12)
    assert solution.residual < 1e-13
    assert epsilon_from_weights(solution.weights) < 1e-12


def test_overdetermined_weights_of_a_design(ico):
    """Test minimum-norm weights when N exceeds (t+1)²."""
    solution = solve_weights(ico, 2)
    assert not solution.square
    np.testing.assert_allclose(solution.weights, 4 * np.pi / 12, atol=1e-12)
    assert solution.residual < 1e-12


def test_singular_design_matrix(tet):
    """Test that coincident points are not a fundamental system."""
    with pytest.raises(NotFundamentalSystemError):
        solve_weights(tet.take([0, 0, 1, 2]), 1)
    with pytest.raises(NotFundamentalSystemError):
        factorize(np.ones((2, 3)))


def test_weight_bounds_and_epsilon():
    """Test the weight box and its inverse."""
    lo, hi = weight_bounds(0.1, 4)
    assert lo == pytest.approx(0.9 * np.pi)
    assert hi == pytest.approx(np.pi / 0.9)
    assert epsilon_from_weights([math.pi] * 4) == 0.0
    assert epsilon_from_weights([2 * np.pi * 0.9, 2 * np.pi * 1.1]) == pytest.approx(0.1)
    assert epsilon_from_weights([lo, hi, np.pi, np.pi]) == pytest.approx(0.1)
    with pytest.raises(DesignWeightError):
        epsilon_from_weights([5.0, 0.0, 7.5])


def test_verify_rule(ico_rule):
    """Test the verification record of the icosahedron."""
    record = verify_rule(ico_rule)
    assert (record.t, record.n) == (5, 12)
    assert record.residual < 1e-13
    assert record.weight_sum == pytest.approx(4 * np.pi)
    assert record.eps_hat < 1e-15
    assert record.passes(1e-10, 0.0)
    assert not record.passes(1e-20, 0.0)


def test_exactness_residual_detects_non_design(tet):
    """Test that equal weights on the tetrahedron fail degree 3."""
    assert exactness_residual(design_matrix(tet, 3), np.full(4, np.pi)) > 1e-3


@pytest.mark.parametrize(("t", "seed"), [(4, 3), (10, 17)])
def test_one_norm_inverse_modes(t, seed):
    """Test the exact 1-norm against numpy and the estimator against the exact value."""
    matrix = design_matrix(random_points((t + 1) ** 2, seed), t)
    exact = one_norm_inverse(matrix, exact=True)
    assert exact == pytest.approx(np.linalg.norm(np.linalg.inv(matrix.values), 1), rel=1e-7)
    estimate = one_norm_inverse(matrix, exact=False)
    assert exact / 10.0 <= estimate <= exact * (1 + 1e-10)
    assert one_norm_inverse(matrix.values) == pytest.approx(exact)


def test_perturbation_bound_dominates_measured_norm():
    """Test ‖Y(X) − Y(X')‖₁ ≤ bound over 500 random perturbations."""
    rng = np.random.default_rng(2024)
    violations = 0
    for trial in range(500):
        t = (1, 5, 10)[trial % 3]
        points = equal_area_grid((t + 1) ** 2)
        rho = separation(points)
        step = 0.05 * rho * rng.uniform(0.01, 1.0)
        moved = PointSet.from_cartesian(
            points.xyz + step * rng.standard_normal(points.xyz.shape) / math.sqrt(3.0),
            normalize=True,
        )
        result = perturbation_bound(points, moved, t, verify=True)
        assert result.actual is not None
        violations += result.actual > result.bound
    assert violations == 0


def test_perturbation_bound_requires_small_sigma(tet):
    """Test that σ ≥ ρ/2 is rejected."""
    with pytest.raises(PairingError):
        perturbation_bound(tet, PointSet(-tet.xyz), 1)
    result = perturbation_bound(tet, tet, 1)
    assert (result.bound, result.sigma, result.actual) == (0.0, 0.0, None)
