import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.certify.weights import weyl_sums
from src.geometry.distances import geodesic_dist
from src.geometry.points import (
    PointSet,
    SpherePoint,
    icosahedron,
    octahedron,
    random_points,
    random_rotation,
    rotate,
    tetrahedron,
)
from src.util.exceptions import GeometryError


def test_sphere_point_from_spherical():
    """Test the (θ, φ) parameterization."""
    x = SpherePoint.from_spherical(math.pi / 2, math.pi / 2)
    assert x.as_array() == pytest.approx([0.0, 1.0, 0.0], abs=1e-16)
    assert x.theta == pytest.approx(math.pi / 2)
    assert x.phi == pytest.approx(math.pi / 2)


def test_sphere_point_rejects_non_unit():
    """Test that points off the sphere are rejected."""
    with pytest.raises(GeometryError):
        SpherePoint(1.0, 1.0, 0.0)


def test_point_set_shape_and_finiteness():
    """Test construction checks."""
    with pytest.raises(GeometryError):
        PointSet(np.zeros((2, 2)))
    with pytest.raises(GeometryError):
        PointSet(np.array([[np.nan, 0.0, 1.0]]))
    with pytest.raises(GeometryError):
        PointSet.from_cartesian([[0.0, 0.0, 0.0]], normalize=True)
    single = PointSet(np.array([0.0, 0.0, 1.0]))
    assert single.n == 1


def test_point_set_is_read_only(tet):
    """Test that coordinates cannot be modified in place."""
    with pytest.raises(ValueError):
        tet.xyz[0, 0] = 0.0


@settings(max_examples=50)
@given(
    st.floats(min_value=0.0, max_value=math.pi),
    st.floats(min_value=0.0, max_value=2 * math.pi, exclude_max=True),
)
def test_spherical_round_trip(theta, phi):
    """Test that Cartesian → spherical recovers the same point."""
    points = PointSet.from_spherical(theta, phi)
    theta2, phi2 = points.spherical()
    assert 0.0 <= theta2[0] <= math.pi and 0.0 <= phi2[0] < 2 * math.pi
    again = PointSet.from_spherical(theta2, phi2)
    assert float(geodesic_dist(points, again)[0]) < 1e-12


def test_iteration_indexing_and_take(octa):
    """Test sequence behaviour of point sets."""
    assert len(octa) == 6
    assert octa[3] == SpherePoint(-1.0, 0.0, 0.0)
    assert [p.z for p in octa] == [0.0, 0.0, 1.0, 0.0, 0.0, -1.0]
    assert octa.take([2, 5]).xyz.tolist() == [[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]


def test_rotation_preserves_distances():
    """Test rigid rotations."""
    points = random_points(10, seed=2)
    moved = rotate(points, [1.0, 2.0, 3.0], 0.7)
    before = geodesic_dist(points.xyz[:, None, :], points.xyz[None, :, :])
    after = geodesic_dist(moved.xyz[:, None, :], moved.xyz[None, :, :])
    np.testing.assert_allclose(before, after, atol=1e-12)
    with pytest.raises(GeometryError):
        rotate(points, [0.0, 0.0, 0.0], 1.0)


@pytest.mark.parametrize(
    "points,strength",
    [(tetrahedron(), 2), (octahedron(), 3), (icosahedron(), 5)],
)
def test_platonic_solids_are_designs(points, strength):
    """Test the Weyl sums of the classical designs, before and after rotation."""
    assert weyl_sums(points, strength).max_abs < 1e-14
    assert weyl_sums(random_rotation(points, seed=3), strength).max_abs < 1e-13
    assert weyl_sums(points, strength + 1).max_abs > 1e-3


def test_random_points_are_seeded():
    """Test reproducibility of random point sets."""
    np.testing.assert_array_equal(random_points(5, seed=11).xyz, random_points(5, seed=11).xyz)
