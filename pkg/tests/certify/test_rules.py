import math

import numpy as np
import pytest

from src.certify.rules import QuadratureRule, equal_weight_rule, gauss_product_rule
from src.harmonics.ylm import design_matrix, dimension
from src.util.exceptions import DesignWeightError, DomainError


def test_equal_weight_rule(tet):
    """Test equal weights 4π/N."""
    rule = equal_weight_rule(tet, 2)
    np.testing.assert_allclose(rule.weights, np.pi)
    assert (rule.n, rule.t) == (4, 2)


def test_rule_validation(tet):
    """Test weight count, sign, sum and degree checks."""
    with pytest.raises(DesignWeightError):
        QuadratureRule(tet, np.full(3, 4 * np.pi / 3))
    with pytest.raises(DesignWeightError):
        QuadratureRule(tet, [2 * np.pi, 2 * np.pi, np.pi, -np.pi])
    with pytest.raises(DesignWeightError):
        QuadratureRule(tet, np.ones(4))
    with pytest.raises(DomainError):
        QuadratureRule(tet, np.full(4, np.pi), -1)


def test_rule_weights_are_read_only(tet):
    """Test that weights are frozen."""
    rule = equal_weight_rule(tet)
    with pytest.raises(ValueError):
        rule.weights[0] = 1.0


@pytest.mark.parametrize("t", [0, 1, 4, 11, 30])
def test_gauss_product_rule_is_exact(t):
    """Test that the product rule integrates every harmonic of degree ≤ t."""
    rule = gauss_product_rule(t)
    integrals = design_matrix(rule.points, t).values.T @ rule.weights
    expected = np.zeros(dimension(t))
    expected[0] = math.sqrt(4 * math.pi)
    np.testing.assert_allclose(integrals, expected, atol=1e-12)
    assert np.all(rule.weights > 0)


def test_integrate_polynomial(gauss_rule):
    """Test ∫ z² dω = 4π/3."""
    assert gauss_rule.integrate(gauss_rule.points.xyz[:, 2] ** 2) == pytest.approx(4 * np.pi / 3)


def test_gauss_product_rule_rejects_negative_degree():
    """Test degree validation."""
    with pytest.raises(DomainError):
        gauss_product_rule(-2)


def test_rule_integrates_constants(random_rule):
    """Test that any rule integrates the constant function exactly."""
    assert random_rule.integrate(np.ones(random_rule.n)) == pytest.approx(4 * np.pi)
