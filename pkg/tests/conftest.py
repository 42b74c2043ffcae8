from pathlib import Path

import numpy as np
import pytest

from src.certify.rules import QuadratureRule, equal_weight_rule, gauss_product_rule
from src.geometry.points import icosahedron, octahedron, random_points, tetrahedron

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def tet():
    return tetrahedron()


@pytest.fixture
def octa():
    return octahedron()


@pytest.fixture
def ico():
    return icosahedron()


@pytest.fixture
def ico_rule() -> QuadratureRule:
    """Equal-weight icosahedron, a 5-design."""
    return equal_weight_rule(icosahedron(), 5)


@pytest.fixture
def gauss_rule() -> QuadratureRule:
    return gauss_product_rule(20)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def random_rule() -> QuadratureRule:
    """Positive random weights summing to 4π on 40 random points."""
    generator = np.random.default_rng(99)
    points = random_points(40, generator)
    weights = generator.uniform(0.5, 1.5, 40)
    return QuadratureRule(points, weights * 4.0 * np.pi / weights.sum(), 0)


@pytest.fixture
def published_fixture():
    """Path to a published fixture file, skipping the test when it was not fetched."""

    def _path(name: str) -> Path:
        path = FIXTURES / name
        if not path.is_file():
            pytest.skip(f"published fixture {name} not fetched (scripts/fetch_fixtures.py)")
        return path

    return _path
