import math

import numpy as np
import pytest

from app.core.errors import DegenerateTriangleError, EmptyPathError, NonUnitVectorError
from app.services.sphere_geom import (
    SpherePoint,
    b3_constants,
    geodesic_distance,
    path_length,
    shape_from_angles,
    side_from_angles,
    spherical_angle,
    triangle_area,
)


def test_b3_constants():
    shape = b3_constants()
    assert math.cos(shape.alpha) == pytest.approx(math.sqrt(2 / 3), abs=1e-12)
    assert math.cos(shape.beta) == pytest.approx(1 / math.sqrt(3), abs=1e-12)
    assert shape.delta == pytest.approx(math.pi / 4, abs=1e-12)
    assert shape.alpha + shape.beta == pytest.approx(math.pi / 2, abs=1e-12)
    assert shape.angle_at(1) == pytest.approx(math.pi / 4)
    assert shape.angle_at(2) == pytest.approx(math.pi / 2)
    assert shape.angle_at(3) == pytest.approx(math.pi / 3)


def test_shape_from_angles_matches_b3():
    solved = shape_from_angles(math.pi / 4, math.pi / 2, math.pi / 3)
    expected = b3_constants()
    for t in (1, 2, 3):
        assert solved.edge_length(t) == pytest.approx(expected.edge_length(t), abs=1e-12)


def test_octant_triangle():
    # three right angles: every side is a quarter circle
    assert side_from_angles(math.pi / 2, math.pi / 2, math.pi / 2) == pytest.approx(math.pi / 2)
    assert triangle_area(math.pi / 2, math.pi / 2, math.pi / 2) == pytest.approx(math.pi / 2)


@pytest.mark.parametrize("angles", [(math.pi / 3, math.pi / 3, math.pi / 3), (0.5, 0.5, 0.5)])
def test_degenerate_angles_rejected(angles):
    with pytest.raises(DegenerateTriangleError):
        side_from_angles(*angles)
    with pytest.raises(DegenerateTriangleError):
        triangle_area(*angles)


def test_non_unit_point_rejected():
    with pytest.raises(NonUnitVectorError):
        SpherePoint(1.0, 1.0, 0.0)
    with pytest.raises(NonUnitVectorError):
        SpherePoint.from_vector([0, 0, 0])
    assert SpherePoint.from_vector([3, 0, 4]).z == pytest.approx(0.8)


def test_distances_and_angles():
    x = SpherePoint(1.0, 0.0, 0.0)
    y = SpherePoint(0.0, 1.0, 0.0)
    z = SpherePoint(0.0, 0.0, 1.0)
    assert geodesic_distance(x, y) == pytest.approx(math.pi / 2)
    assert geodesic_distance(x, x) == pytest.approx(0.0)
    assert path_length([x, y, z, x]) == pytest.approx(3 * math.pi / 2)
    assert spherical_angle(z, x, y) == pytest.approx(math.pi / 2)
    with pytest.raises(EmptyPathError):
        path_length([x])


def test_triangle_inequality_on_random_points():
    rng = np.random.default_rng(0)
    vectors = rng.normal(size=(10_000, 3, 3))
    for p, q, r in vectors:
        p, q, r = (SpherePoint.from_vector(v) for v in (p, q, r))
        assert geodesic_distance(p, r) <= geodesic_distance(p, q) + geodesic_distance(q, r) + 1e-12
        assert geodesic_distance(p, q) == pytest.approx(geodesic_distance(q, p), abs=1e-15)
