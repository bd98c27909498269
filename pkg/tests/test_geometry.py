from fractions import Fraction

import pytest

from newton_implicit.core.errors import InconsistentChains
from newton_implicit.core.models import CurveClass
from newton_implicit.geometry import (
    ChainRole,
    LatticePolygon,
    MonotoneChain,
    contains,
    convex_hull,
    lattice_points,
    lower_hull,
    minkowski_sum,
    mixed_area,
    region_between,
    shape_check,
    transpose_polygon,
    upper_hull,
)

PENTAGON = ((0, 3), (3, 1), (6, 0), (7, 0), (0, 7))
HEXAGON = [(1, 3), (0, 4), (0, 6), (1, 6), (7, 0), (4, 1)]
SMALL_HEXAGON = [(0, 1), (0, 3), (3, 0), (1, 3), (2, 0), (3, 2)]


def test_convex_hull_drops_interior_points():
    hull = convex_hull([(0, 0), (2, 0), (0, 2), (1, 1)])
    assert hull.vertices == ((0, 0), (2, 0), (0, 2))
    assert hull.kind == "polygon"


def test_convex_hull_is_canonical_regardless_of_input_order():
    a = convex_hull([(0, 7), (7, 0), (0, 3), (3, 1), (6, 0)])
    b = convex_hull([(6, 0), (3, 1), (0, 7), (0, 3), (7, 0), (2, 2)])
    assert a == b
    assert a.vertices == PENTAGON


def test_convex_hull_drops_collinear_points():
    assert convex_hull([(0, 0), (1, 0), (2, 0), (2, 2), (0, 2), (0, 1)]).vertices == \
        ((0, 0), (2, 0), (2, 2), (0, 2))


@pytest.mark.parametrize("points,vertices,kind", [
    ([(3, 1)], ((3, 1),), "point"),
    ([(3, 1), (3, 1)], ((3, 1),), "point"),
    ([(0, 0), (2, 1), (4, 2)], ((0, 0), (4, 2)), "segment"),
    ([(0, 3), (0, 0), (0, 1)], ((0, 0), (0, 3)), "segment"),
])
def test_convex_hull_degenerate(points, vertices, kind):
    hull = convex_hull(points)
    assert hull.vertices == vertices
    assert hull.kind == kind


def test_convex_hull_rejects_empty_input():
    with pytest.raises(ValueError):
        convex_hull([])


def test_hull_vertices_run_counter_clockwise():
    hull = convex_hull(SMALL_HEXAGON)
    assert len(hull.vertices) == 6
    assert hull.area2() > 0


def test_contains_point_on_boundary_and_outside():
    triangle = convex_hull([(3, 0), (0, 3), (1, 1)])
    assert triangle.contains_point((2, 1))
    assert triangle.contains_point((1, 1))
    assert not triangle.contains_point((0, 0))
    assert not triangle.contains_point((3, 1))


def test_segment_contains_point():
    seg = convex_hull([(0, 0), (4, 2)])
    assert seg.contains_point((2, 1))
    assert not seg.contains_point((6, 3))
    assert not seg.contains_point((1, 1))


def test_pentagon_contains_flipped_hexagon():
    pentagon = convex_hull(PENTAGON)
    hexagon = convex_hull(HEXAGON)
    assert contains(pentagon, hexagon)
    assert not contains(hexagon, pentagon)
    assert pentagon != hexagon


def test_area2_shoelace():
    assert convex_hull([(0, 0), (2, 0), (2, 2), (0, 2)]).area2() == 8
    assert convex_hull([(3, 0), (0, 3), (1, 1)]).area2() == 3
    assert convex_hull([(0, 0), (5, 5)]).area2() == 0


def test_lattice_points_of_triangle():
    points = lattice_points(convex_hull([(0, 0), (2, 0), (0, 2)]))
    assert sorted(points) == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]


def test_polygon_dict_round_trip_through_hull():
    poly = convex_hull(SMALL_HEXAGON)
    assert LatticePolygon.from_dict(poly.to_dict()) == poly
    assert poly.to_dict()["kind"] == "polygon"


def test_half_hulls():
    points = [(0, 0), (1, 2), (2, 1), (3, 3), (4, 0)]
    assert lower_hull(points) == [(0, 0), (4, 0)]
    assert upper_hull(points) == [(0, 0), (1, 2), (3, 3), (4, 0)]


def test_chain_value_at_interpolates_and_handles_vertical_pieces():
    upper = MonotoneChain.from_points([(0, 2), (0, 7), (5, 7)], ChainRole.UPPER)
    lower = MonotoneChain.from_points([(0, 2), (1, 0), (5, 0)], ChainRole.LOWER)
    assert upper.value_at(0) == 7
    assert lower.value_at(0) == 2
    assert lower.value_at(Fraction(1, 2)) == 1
    assert upper.value_at(6) is None


def test_region_between_square():
    upper = MonotoneChain.from_points([(0, 2), (2, 2)], ChainRole.UPPER)
    lower = MonotoneChain.from_points([(0, 0), (2, 0)], ChainRole.LOWER)
    assert region_between(upper, lower).vertices == ((0, 0), (2, 0), (2, 2), (0, 2))


def test_region_between_closes_with_vertical_segments():
    upper = MonotoneChain.from_points([(0, 7), (5, 7)], ChainRole.UPPER)
    lower = MonotoneChain.from_points([(0, 2), (1, 0), (5, 0)], ChainRole.LOWER)
    assert region_between(upper, lower).vertices == ((0, 2), (1, 0), (5, 0), (5, 7), (0, 7))


def test_region_between_equal_chains_is_a_segment():
    upper = MonotoneChain.from_points([(0, 0), (3, 3)], ChainRole.UPPER)
    lower = MonotoneChain.from_points([(0, 0), (3, 3)], ChainRole.LOWER)
    assert region_between(upper, lower).kind == "segment"


def test_region_between_rejects_crossing_chains():
    upper = MonotoneChain.from_points([(0, 0), (2, 0)], ChainRole.UPPER)
    lower = MonotoneChain.from_points([(0, 1), (2, 1)], ChainRole.LOWER)
    with pytest.raises(InconsistentChains):
        region_between(upper, lower)


@pytest.mark.parametrize("vertices,curve_class,cuts", [
    (PENTAGON, CurveClass.SAME_DENOMINATOR, 2),
    ([(0, 0), (4, 0), (0, 3)], CurveClass.POLYNOMIAL, 0),
    ([(1, 0), (2, 0), (0, 2), (0, 1)], CurveClass.POLYNOMIAL, 1),
    (SMALL_HEXAGON, CurveClass.DIFFERENT_DENOMINATORS, 2),
    ([(0, 2), (0, 7), (1, 0), (5, 0), (5, 7)], CurveClass.DIFFERENT_DENOMINATORS, 1),
    ([(3, 0), (0, 3), (1, 1)], CurveClass.SAME_DENOMINATOR, 2),
])
def test_shape_check_passes_for_known_polygons(vertices, curve_class, cuts):
    report = shape_check(convex_hull(vertices), curve_class)
    assert report.passed, report.violations
    assert report.cuts == cuts


def test_shape_check_rejects_cut_away_from_origin_for_polynomials():
    report = shape_check(convex_hull([(0, 0), (4, 0), (1, 3), (0, 3)]), CurveClass.POLYNOMIAL)
    assert not report.passed
    assert report.violations


@pytest.mark.parametrize("vertices,curve_class,cuts", [
    ([(0, 4), (1, 2), (2, 1), (4, 0), (8, 0), (0, 8)], CurveClass.SAME_DENOMINATOR, 3),
    (HEXAGON, CurveClass.SAME_DENOMINATOR, 4),
    ([(0, 3), (1, 1), (3, 0), (5, 0), (0, 5)], CurveClass.POLYNOMIAL, 2),
])
def test_shape_check_counts_every_cut_edge(vertices, curve_class, cuts):
    report = shape_check(convex_hull(vertices), curve_class)
    assert not report.passed
    assert report.cuts == cuts
    assert any("corner cuts" in v for v in report.violations)


def test_shape_check_rejects_polygon_off_the_axes():
    report = shape_check(convex_hull([(1, 1), (3, 1), (1, 3)]), CurveClass.SAME_DENOMINATOR)
    assert not report.passed


def test_minkowski_sum_and_mixed_area():
    square = [(0, 0), (1, 0), (0, 1), (1, 1)]
    assert minkowski_sum(square, square).vertices == ((0, 0), (2, 0), (2, 2), (0, 2))
    # MV of two unit segments in independent directions is 1
    assert mixed_area([(0, 0), (1, 0)], [(0, 0), (0, 1)]) == 1
    assert mixed_area([(0, 0), (1, 0)], [(0, 0), (3, 0)]) == 0


def test_transpose_polygon():
    assert transpose_polygon(convex_hull(PENTAGON)) == convex_hull([(y, x) for x, y in PENTAGON])
