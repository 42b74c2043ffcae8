import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.certify.rules import gauss_product_rule
from src.geometry.points import PointSet, SpherePoint, random_points
from src.harmonics.ylm import (
    DesignMatrix,
    HarmonicIndex,
    azimuthal_derivative,
    design_matrix,
    dimension,
    eval_ylk,
    harmonic_column,
    harmonic_index,
    polar_parts,
)
from src.util.exceptions import DomainError, GeometryError

SQRT_3_4PI = math.sqrt(3.0 / (4.0 * math.pi))


def test_dimension():
    """Test dim P_t = (t+1)²."""
    assert [dimension(t) for t in range(4)] == [1, 4, 9, 16]


def test_harmonic_index_layout():
    """Test the column layout within a degree."""
    assert harmonic_column(0, 1) == 0
    assert harmonic_column(1, 1) == 1
    assert harmonic_column(2, 5) == 8
    index = harmonic_index(6)
    assert (index.ell, index.k, index.order, index.branch) == (2, 3, 0, "const")
    assert harmonic_index(4).branch == "cos" and harmonic_index(4).order == 2
    assert harmonic_index(8).branch == "sin" and harmonic_index(8).order == 2


@given(st.integers(min_value=0, max_value=10_000))
def test_harmonic_index_inverts_column(column):
    """Test that from_column inverts column."""
    assert harmonic_index(column).column == column


def test_harmonic_index_rejects_bad_input():
    """Test index validation."""
    with pytest.raises(DomainError):
        HarmonicIndex(1, 4)
    with pytest.raises(DomainError):
        harmonic_index(-1)
    with pytest.raises(DomainError):
        HarmonicIndex.from_order(2, 3, "cos")
    assert HarmonicIndex.from_order(3, 2, "sin") == HarmonicIndex(3, 6)


def test_degree_one_harmonics_are_coordinates():
    """Test Y_{1,1} ∝ x, Y_{1,2} ∝ z and Y_{1,3} ∝ y."""
    points = random_points(20, seed=5)
    values = design_matrix(points, 1).values
    np.testing.assert_allclose(values[:, 0], 1.0 / math.sqrt(4.0 * math.pi))
    np.testing.assert_allclose(values[:, 1], SQRT_3_4PI * points.xyz[:, 0], atol=1e-14)
    np.testing.assert_allclose(values[:, 2], SQRT_3_4PI * points.xyz[:, 2], atol=1e-14)
    np.testing.assert_allclose(values[:, 3], SQRT_3_4PI * points.xyz[:, 1], atol=1e-14)


def test_addition_theorem():
    """Test Σ_k Y_{ℓ,k}(x)² = (2ℓ+1)/4π for 100 random points and ℓ ≤ 200."""
    t = 200
    values = design_matrix(random_points(100, seed=7), t).values
    for ell in range(t + 1):
        block = values[:, ell * ell : (ell + 1) ** 2]
        residual = np.abs((block**2).sum(axis=1) - (2 * ell + 1) / (4.0 * math.pi))
        assert residual.max() < 1e-10


def test_gram_matrix_against_reference_quadrature():
    """Test orthonormality of degree ≤ 10 harmonics with a product rule of degree 20."""
    rule = gauss_product_rule(20)
    values = design_matrix(rule.points, 10).values
    gram = values.T @ (rule.weights[:, None] * values)
    assert np.abs(gram - np.eye(dimension(10))).max() < 1e-6


def test_poles_are_snapped():
    """Test that only zonal harmonics survive at the poles."""
    north = PointSet(np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]))
    u, sin_theta, phi = polar_parts(north)
    np.testing.assert_array_equal(u, [1.0, -1.0])
    np.testing.assert_array_equal(sin_theta, [0.0, 0.0])
    values = design_matrix(north, 4).values
    zonal = [ell * ell + ell for ell in range(5)]
    others = np.setdiff1d(np.arange(dimension(4)), zonal)
    assert np.abs(values[:, others]).max() < 1e-15


@settings(max_examples=25, deadline=None)
@given(
    st.floats(min_value=0.01, max_value=3.13),
    st.floats(min_value=0.0, max_value=6.28),
    st.integers(min_value=0, max_value=120),
)
def test_eval_ylk_matches_design_matrix(theta, phi, column):
    """Test single-harmonic evaluation against the matching design-matrix column."""
    x = SpherePoint.from_spherical(theta, phi)
    index = harmonic_index(column)
    expected = design_matrix(PointSet.from_points([x]), index.ell).values[0, column]
    assert eval_ylk(index, x) == pytest.approx(expected, rel=1e-10, abs=1e-12)


def test_eval_ylk_on_point_set():
    """Test vector evaluation over a point set."""
    points = random_points(6, seed=1)
    values = eval_ylk(HarmonicIndex(1, 2), points)
    np.testing.assert_allclose(values, SQRT_3_4PI * points.xyz[:, 2], atol=1e-14)


def test_azimuthal_derivative_matches_finite_difference():
    """Test ∂Y/∂φ against a central difference."""
    theta, phi = np.array([0.4, 1.2, 2.5]), np.array([0.3, 2.0, 5.0])
    h = 1e-6
    matrix = design_matrix(PointSet.from_spherical(theta, phi), 6)
    upper = design_matrix(PointSet.from_spherical(theta, phi + h), 6).values
    lower = design_matrix(PointSet.from_spherical(theta, phi - h), 6).values
    np.testing.assert_allclose(azimuthal_derivative(matrix), (upper - lower) / (2 * h), atol=1e-7)


def test_design_matrix_validation():
    """Test bad degree and shape errors."""
    points = random_points(3, seed=0)
    with pytest.raises(DomainError):
        design_matrix(points, -1)
    with pytest.raises(GeometryError):
        DesignMatrix(values=np.zeros((3, 5)), t=1, points=points)


def test_design_matrix_properties(tet):
    """Test n, dim, squareness and degree slices."""
    matrix = design_matrix(tet, 1)
    assert (matrix.n, matrix.dim, matrix.is_square) == (4, 4, True)
    assert matrix.degree_slice(1) == slice(1, 4)
