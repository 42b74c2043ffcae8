import logging
import math

import numpy as np
import pytest

from src.certify.rules import QuadratureRule, equal_weight_rule
from src.geometry.points import PointSet, random_points, rotate
from src.search.design import SearchConfig, find_design
from src.util.exceptions import KernelHypothesisError, NumericalFailureError, UsageError
from src.wce.error import (
    _to_error,
    legendre_moments,
    wce_closed_high,
    wce_closed_low,
    wce_rows,
    wce_series,
    worst_case_error,
)

SMOOTHNESS = [1.3, 1.5, 1.9, 2.5, 5.5]


def _random_rule(rng: np.random.Generator, n: int) -> QuadratureRule:
    weights = rng.uniform(0.2, 1.8, n)
    return QuadratureRule(random_points(n, rng), weights * 4.0 * np.pi / weights.sum())


def test_single_point():
    """Test E_1.5 of one point with weight 4π is √(4/3)."""
    rule = QuadratureRule(PointSet(np.array([[0.0, 0.0, 1.0]])), np.array([4.0 * np.pi]))
    assert wce_closed_low(rule, 1.5) == pytest.approx(math.sqrt(4.0 / 3.0), abs=1e-10)


def test_antipodal_pair():
    """Test E_1.5 of two antipodal points is √(1/3)."""
    rule = equal_weight_rule(PointSet(np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])), 1)
    assert wce_closed_low(rule, 1.5) == pytest.approx(math.sqrt(1.0 / 3.0), abs=1e-10)
    series = wce_series(rule, 1.5, 2000)
    assert series.completed == pytest.approx(math.sqrt(1.0 / 3.0), rel=1e-6)


def test_branch_checks(ico_rule):
    """Test that each closed form refuses the other branch."""
    with pytest.raises(KernelHypothesisError):
        wce_closed_low(ico_rule, 2.5)
    with pytest.raises(KernelHypothesisError):
        wce_closed_high(ico_rule, 1.5)
    with pytest.raises(KernelHypothesisError):
        worst_case_error(ico_rule, 3.0)
    assert worst_case_error(ico_rule, 2.5) == wce_closed_high(ico_rule, 2.5)


@pytest.mark.slow
def test_closed_form_matches_series(rng):
    """Test |E_closed − E_series| / E_closed < 1e-4 at ℓmax = 5000 on random rules."""
    for _ in range(20):
        rule = _random_rule(rng, int(rng.integers(2, 201)))
        moments = legendre_moments(rule, 5000)
        for s in SMOOTHNESS:
            closed = worst_case_error(rule, s)
            series = wce_series(rule, s, 5000, moments)
            assert abs(closed - series.completed) / closed < 1e-4


@pytest.mark.parametrize("s", SMOOTHNESS)
def test_tail_bound_brackets_closed_form(random_rule, s):
    """Test truncated ≤ E ≤ truncated + tail_bound."""
    series = wce_series(random_rule, s, 300)
    closed = worst_case_error(random_rule, s)
    assert series.truncated <= closed + 1e-12
    assert closed <= series.truncated + series.tail_bound + 1e-12
    assert series.terms.shape == (300,)
    assert np.all(series.terms > -1e-14)


def test_design_terms_vanish_up_to_strength(ico_rule):
    """Test that a 5-design has no series contribution from degrees 1..5."""
    series = wce_series(ico_rule, 1.5, 200)
    assert np.max(np.abs(series.terms[:5])) < 1e-14
    assert series.terms[5] > 1e-6


def test_series_degree_validation(ico_rule):
    """Test ℓmax ≥ t + 1 and moments of sufficient degree."""
    with pytest.raises(UsageError):
        wce_series(ico_rule, 1.5, 5)
    moments = legendre_moments(ico_rule, 10)
    assert moments.ell_max == 10
    assert moments.total[0] == pytest.approx(1.0)
    with pytest.raises(UsageError):
        wce_series(ico_rule, 1.5, 20, moments)


def test_platonic_designs_improve_with_size(tet, octa, ico):
    """Test E_5.5 decreasing over the tetrahedron, octahedron and icosahedron."""
    errors = [
        worst_case_error(equal_weight_rule(points, t), 5.5)
        for points, t in ((tet, 2), (octa, 3), (ico, 5))
    ]
    assert errors[0] > errors[1] > errors[2] > 0.0


@pytest.mark.slow
def test_computed_designs_improve_with_size():
    """Test E_5.5 decreasing in N over computed t- and t_0.1-designs, t = 1..15."""
    curves = {}
    for epsilon in (0.0, 0.1):
        rules = [find_design(SearchConfig(t=t, epsilon=epsilon)).to_rule() for t in range(1, 16)]
        sizes = [rule.n for rule in rules]
        assert sizes == sorted(sizes)
        smooth = [worst_case_error(rule, 5.5) for rule in rules]
        assert all(a > b for a, b in zip(smooth, smooth[1:]))
        curves[epsilon] = np.array([worst_case_error(rule, 1.5) for rule in rules])
    np.testing.assert_allclose(curves[0.1], curves[0.0], rtol=0.2)


def test_rotation_invariance(ico_rule):
    """Test that E_s does not change when the rule is rotated."""
    turned = QuadratureRule(rotate(ico_rule.points, [1.0, -2.0, 0.5], 0.7), ico_rule.weights)
    for s in SMOOTHNESS:
        assert worst_case_error(turned, s) == pytest.approx(
            worst_case_error(ico_rule, s), rel=1e-12, abs=1e-14
        )


def test_design_beats_random_points(ico_rule, rng):
    """Test that the icosahedron beats twelve random points."""
    random = equal_weight_rule(random_points(12, rng))
    assert worst_case_error(ico_rule, 1.5) < worst_case_error(random, 1.5)


def test_negative_square_handling(caplog):
    """Test clamping of rounding-level negatives and failure beyond."""
    with caplog.at_level(logging.WARNING, logger="teps"):
        assert _to_error(-1e-14, "E") == 0.0
    assert "clamped" in caplog.text
    assert _to_error(0.25, "E") == 0.5
    with pytest.raises(NumericalFailureError):
        _to_error(-1e-3, "E")


def test_wce_rows(ico_rule):
    """Test one row per smoothness with matching closed and series values."""
    rows = wce_rows(ico_rule, [1.5, 5.5], ell_max=1000)
    assert [row.s for row in rows] == [1.5, 5.5]
    for row in rows:
        assert (row.t, row.n) == (5, 12)
        assert row.e_series == pytest.approx(row.e_closed, rel=1e-3)
        assert row.tail_bound >= 0.0
