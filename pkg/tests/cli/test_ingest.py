import io

import numpy as np
import pytest

from src.cli.ingest import (
    ENCLOSURE_FORMATS,
    ingest_enclosures,
    read_points,
    read_samples,
    read_weights,
    register_format,
    write_points,
    write_values,
    write_weights,
)
from src.geometry.enclosures import SphericalCap, SphericalRectangle
from src.geometry.points import random_points
from src.util.exceptions import IngestError, UsageError


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_points_round_trip_bitwise(tmp_path):
    """Test that written points re-read to the same doubles."""
    points = random_points(50, 8)
    stream = io.StringIO()
    write_points(stream, points, {"seed": 8})
    path = _write(tmp_path, "points.txt", stream.getvalue())
    assert stream.getvalue().startswith("# seed: 8\n")
    np.testing.assert_array_equal(read_points(path).xyz, points.xyz)


def test_points_in_spherical_layout(tmp_path):
    """Test `theta phi` rows, comments, blank lines and commas."""
    path = _write(tmp_path, "sph.txt", "# poles\n\n0, 0\n3.141592653589793 0\n")
    points = read_points(path)
    np.testing.assert_allclose(points.xyz, [[0, 0, 1], [0, 0, -1]], atol=1e-15)


def test_point_errors_carry_line_numbers(tmp_path):
    """Test column, number and norm errors."""
    cases = {
        "0 0 1\n1 0\n": 2,
        "# header\n0 0 one\n": 2,
        "0 0 1\n0 0 2\n": 2,
        "1 2 3 4\n": 1,
        "0 0 nan\n": 1,
    }
    for text, line in cases.items():
        with pytest.raises(IngestError) as exc_info:
            read_points(_write(tmp_path, "bad.txt", text))
        assert exc_info.value.line == line
        assert str(exc_info.value).startswith(f"line {line}:")


def test_empty_and_missing_files(tmp_path):
    """Test an empty file and an unreadable path."""
    with pytest.raises(IngestError) as exc_info:
        read_points(_write(tmp_path, "empty.txt", "# nothing\n"))
    assert exc_info.value.line == 0
    with pytest.raises(UsageError):
        read_points(tmp_path / "missing.txt")


def test_weights_round_trip(tmp_path):
    """Test weight files."""
    weights = np.array([np.pi, np.pi / 3, 1e-300])
    stream = io.StringIO()
    write_weights(stream, weights)
    path = _write(tmp_path, "w.txt", stream.getvalue())
    np.testing.assert_array_equal(read_weights(path), weights)


def test_samples_and_grid_values(tmp_path):
    """Test the sample reader and the `x y z value` writer."""
    path = _write(tmp_path, "s.txt", "# header\n0.5\n-1.25\n\n2.0\n")
    np.testing.assert_array_equal(read_samples(path, 3), [0.5, -1.25, 2.0])
    with pytest.raises(IngestError) as exc_info:
        read_samples(path, 4)
    assert exc_info.value.line == 5

    points = random_points(3, 8)
    stream = io.StringIO()
    write_values(stream, points, np.array([1.0, np.nan, 0.1]), {"lambda": 0.5})
    lines = stream.getvalue().splitlines()
    assert lines[0] == "# lambda: 0.5"
    assert lines[2].split()[3] == "nan"
    assert float(lines[3].split()[3]) == 0.1
    np.testing.assert_array_equal([float(v) for v in lines[1].split()[:3]], points.xyz[0])


def test_rectangle_enclosures(tmp_path):
    """Test the rectangle layout and its statistics."""
    text = "0.5 0.5000001 1.0 1.0000001\n2.0 2.0000001 4.0 4.0000001\n"
    path = _write(tmp_path, "rects.txt", text)
    enclosures = ingest_enclosures(path)
    assert enclosures.n == 2
    assert all(isinstance(e, SphericalRectangle) for e in enclosures.elements)
    assert enclosures.stats.rho > 1.0


def test_cap_enclosures_single_line(tmp_path):
    """Test the cap layout with a single enclosure."""
    path = _write(tmp_path, "caps.txt", "0 0 1 1e-6\n")
    enclosures = ingest_enclosures(path, "cap")
    assert isinstance(enclosures.elements[0], SphericalCap)
    assert enclosures.stats.rho == np.inf


def test_enclosure_errors(tmp_path):
    """Test malformed enclosure lines, empty files and unknown layouts."""
    with pytest.raises(IngestError) as exc_info:
        ingest_enclosures(_write(tmp_path, "bad.txt", "0.5 0.6 1.0 1.1\n0.5 0.4 1.0 1.1\n"))
    assert exc_info.value.line == 2
    with pytest.raises(IngestError) as exc_info:
        ingest_enclosures(_write(tmp_path, "short.txt", "0.5 0.6 1.0\n"))
    assert exc_info.value.line == 1
    with pytest.raises(IngestError):
        ingest_enclosures(_write(tmp_path, "empty.txt", "\n"))
    with pytest.raises(UsageError):
        ingest_enclosures(tmp_path / "empty.txt", "hexagon")


def test_register_format(tmp_path):
    """Test a custom layout registered at runtime."""

    @register_format("polar-cap", 2)
    def _polar(row):
        from src.geometry.points import SpherePoint

        return SphericalCap(SpherePoint.from_spherical(row[0], 0.0), row[1])

    try:
        path = _write(tmp_path, "p.txt", "0 1e-3\n3.14 1e-3\n")
        enclosures = ingest_enclosures(path, "polar-cap")
        assert enclosures.n == 2
    finally:
        ENCLOSURE_FORMATS.pop("polar-cap")
