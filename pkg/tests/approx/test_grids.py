import numpy as np
import pytest

from src.approx.grids import equal_area_grid, equal_area_partition
from src.geometry.distances import separation
from src.util.exceptions import UsageError


@pytest.mark.parametrize("n", [1, 2, 3, 7, 25, 100, 1000, 4321])
def test_partition_has_n_equal_cells(n):
    """Test that every cell has area 4π/n."""
    partition = equal_area_partition(n)
    assert int(partition.counts.sum()) == n
    areas = partition.cell_areas()
    assert areas.size == n
    np.testing.assert_allclose(areas, 4 * np.pi / n, rtol=1e-10)


def test_grid_points_and_poles():
    """Test point counts and the polar cells."""
    assert equal_area_grid(100).n == 100
    np.testing.assert_allclose(equal_area_grid(1).xyz, [[0.0, 0.0, 1.0]], atol=1e-15)
    np.testing.assert_allclose(
        equal_area_grid(2).xyz, [[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]], atol=1e-15
    )
    grid = equal_area_grid(500)
    assert grid.xyz[0, 2] == pytest.approx(1.0)
    assert grid.xyz[-1, 2] == pytest.approx(-1.0)


def test_grid_is_deterministic_and_spread():
    """Test determinism and a separation of the order of the cell diameter."""
    np.testing.assert_array_equal(equal_area_grid(300).xyz, equal_area_grid(300).xyz)
    n = 1000
    assert separation(equal_area_grid(n)) > 0.5 * np.sqrt(4 * np.pi / n)


def test_grid_size_validation():
    """Test that n < 1 is rejected."""
    with pytest.raises(UsageError):
        equal_area_grid(0)
