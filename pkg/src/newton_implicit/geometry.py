"""Exact lattice-polygon arithmetic over Python integers.

Every polygon is kept in canonical form: vertices counter-clockwise,
starting at the lexicographically smallest one, no three consecutive
vertices collinear. Segments and single points are legal polygons.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum, auto
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from newton_implicit.core.errors import InconsistentChains
from newton_implicit.core.models import CurveClass

logger = logging.getLogger(__name__)

LatticePoint = Tuple[int, int]


def cross(o: LatticePoint, a: LatticePoint, b: LatticePoint) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass(frozen=True)
class LatticePolygon:
    vertices: Tuple[LatticePoint, ...]

    @property
    def kind(self) -> str:
        return {1: "point", 2: "segment"}.get(len(self.vertices), "polygon")

    def edges(self) -> List[Tuple[LatticePoint, LatticePoint]]:
        n = len(self.vertices)
        if n < 2:
            return []
        if n == 2:
            return [(self.vertices[0], self.vertices[1])]
        return [(self.vertices[k], self.vertices[(k + 1) % n]) for k in range(n)]

    def contains_point(self, p: LatticePoint) -> bool:
        vs = self.vertices
        if len(vs) == 1:
            return p == vs[0]
        if len(vs) == 2:
            a, b = vs
            return (cross(a, b, p) == 0
                    and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
                    and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))
        return all(cross(a, b, p) >= 0 for a, b in self.edges())

    def area2(self) -> int:
        """Twice the Euclidean area (shoelace); 0 for degenerate polygons."""
        vs = self.vertices
        if len(vs) < 3:
            return 0
        return sum(vs[k][0] * vs[(k + 1) % len(vs)][1] - vs[(k + 1) % len(vs)][0] * vs[k][1]
                   for k in range(len(vs)))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "vertices": [list(v) for v in self.vertices]}

    @classmethod
    def from_dict(cls, data: dict) -> "LatticePolygon":
        return convex_hull(tuple(v) for v in data["vertices"])


def _half_hull(points: Sequence[LatticePoint]) -> List[LatticePoint]:
    chain: List[LatticePoint] = []
    for p in points:
        while len(chain) >= 2 and cross(chain[-2], chain[-1], p) <= 0:
            chain.pop()
        chain.append(p)
    return chain


def lower_hull(points: Iterable[LatticePoint]) -> List[LatticePoint]:
    """Lower monotone chain, left to right."""
    return _half_hull(sorted(set(points)))


def upper_hull(points: Iterable[LatticePoint]) -> List[LatticePoint]:
    """Upper monotone chain, left to right."""
    return list(reversed(_half_hull(sorted(set(points), reverse=True))))


def convex_hull(points: Iterable[LatticePoint]) -> LatticePolygon:
    """Canonical convex hull (Andrew's monotone chain); collinear points dropped."""
    pts = sorted(set((int(x), int(y)) for x, y in points))
    if not pts:
        raise ValueError("convex hull of an empty point set")
    if len(pts) <= 2:
        return LatticePolygon(tuple(pts))
    lower = _half_hull(pts)
    upper = _half_hull(list(reversed(pts)))
    ring = lower[:-1] + upper[:-1]
    if len(ring) == 2 or all(cross(ring[0], ring[1], p) == 0 for p in ring):
        # all collinear: keep the two extremes
        return LatticePolygon((pts[0], pts[-1]))
    return LatticePolygon(tuple(ring))


def contains(outer: LatticePolygon, inner: LatticePolygon) -> bool:
    return all(outer.contains_point(v) for v in inner.vertices)


def lattice_points(poly: LatticePolygon) -> List[LatticePoint]:
    xs = [v[0] for v in poly.vertices]
    ys = [v[1] for v in poly.vertices]
    return [(x, y)
            for x in range(min(xs), max(xs) + 1)
            for y in range(min(ys), max(ys) + 1)
            if poly.contains_point((x, y))]


class ChainRole(Enum):
    UPPER = auto()
    LOWER = auto()


@dataclass(frozen=True)
class MonotoneChain:
    points: Tuple[LatticePoint, ...]
    role: ChainRole

    @classmethod
    def from_points(cls, points: Iterable[LatticePoint], role: ChainRole) -> "MonotoneChain":
        hull = upper_hull(points) if role is ChainRole.UPPER else lower_hull(points)
        return cls(tuple(hull), role)

    def value_at(self, x) -> Fraction | None:
        """Height of the chain at abscissa x; for a vertical piece the
        relevant extreme (max for upper, min for lower). None outside the
        chain's x-range."""
        pts = self.points
        if not pts or x < pts[0][0] or x > pts[-1][0]:
            return None
        on_x = [p[1] for p in pts if p[0] == x]
        if on_x:
            return Fraction(max(on_x) if self.role is ChainRole.UPPER else min(on_x))
        for a, b in zip(pts, pts[1:]):
            if a[0] < x < b[0]:
                return Fraction(a[1]) + Fraction(b[1] - a[1], b[0] - a[0]) * (x - a[0])
        return None

    def to_dict(self) -> dict:
        return {"role": self.role.name.lower(), "points": [list(p) for p in self.points]}


def region_between(upper: MonotoneChain, lower: MonotoneChain) -> LatticePolygon:
    """Polygon enclosed by an upper and a lower chain, closed by vertical
    segments at the extreme abscissae."""
    for p in lower.points:
        top = upper.value_at(p[0])
        if top is not None and p[1] > top:
            raise InconsistentChains(f"lower chain point {p} lies above the upper chain")
    for p in upper.points:
        bottom = lower.value_at(p[0])
        if bottom is not None and p[1] < bottom:
            raise InconsistentChains(f"upper chain point {p} lies below the lower chain")
    return convex_hull(list(upper.points) + list(lower.points))


@dataclass(frozen=True)
class ShapeReport:
    passed: bool
    cuts: int
    reference: Tuple[LatticePoint, ...]
    violations: Tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"passed": self.passed, "cuts": self.cuts,
                "reference": [list(v) for v in self.reference],
                "violations": list(self.violations)}


def _on_reference_edge(edge: Tuple[LatticePoint, LatticePoint], reference: LatticePolygon) -> bool:
    a, b = edge
    return any(cross(r, s, a) == 0 and cross(r, s, b) == 0 for r, s in reference.edges())


def shape_check(poly: LatticePolygon, curve_class: CurveClass) -> ShapeReport:
    """Checks the shape taxonomy of implicit polygons: polynomial curves give
    a right triangle with at most one cut, at the origin; same-denominator
    curves a right isosceles triangle with at most two cuts; curves with
    different denominators a rectangle with at most two cuts.

    Every edge of the polygon that lies on no edge of the reference shape is
    one cut, so two cuts may share a corner. The reference shape is the
    smallest one of the class's kind containing the polygon with its legs on
    the axes.
    """
    xs = [v[0] for v in poly.vertices]
    ys = [v[1] for v in poly.vertices]
    violations = []
    if min(xs) != 0 or min(ys) != 0:
        violations.append("polygon does not reach both coordinate axes")
    if min(xs) < 0 or min(ys) < 0:
        violations.append("negative exponents")

    width, height = max(xs), max(ys)
    if curve_class is CurveClass.DIFFERENT_DENOMINATORS:
        reference = ((0, 0), (width, 0), (width, height), (0, height))
        allowed, origin_only = 2, False
    elif curve_class is CurveClass.SAME_DENOMINATOR:
        degree = max(x + y for x, y in poly.vertices)
        reference = ((0, 0), (degree, 0), (0, degree))
        allowed, origin_only = 2, False
    else:
        reference = ((0, 0), (width, 0), (0, height))
        allowed, origin_only = 1, True

    ref_poly = convex_hull(reference)
    if not contains(ref_poly, poly):
        violations.append(f"polygon is not inside the reference shape {list(ref_poly.vertices)}")

    cut_edges = [e for e in poly.edges() if not _on_reference_edge(e, ref_poly)]
    if len(cut_edges) > allowed:
        violations.append(f"{len(cut_edges)} corner cuts (at most {allowed} allowed)")
    if origin_only:
        stray = [e for e in cut_edges if {e[0][0] == 0, e[1][0] == 0} != {True, False}
                 or {e[0][1] == 0, e[1][1] == 0} != {True, False}]
        if stray:
            violations.append(f"cuts {stray} do not cut off the origin")

    if violations:
        logger.debug("shape_check failed for %s: %s", list(poly.vertices), violations)
    return ShapeReport(passed=not violations, cuts=len(cut_edges),
                       reference=tuple(ref_poly.vertices), violations=tuple(violations))


def minkowski_sum(*point_sets: Iterable[LatticePoint]) -> LatticePolygon:
    """Hull of the Minkowski sum of the given point sets."""
    sums = [(0, 0)]
    for points in point_sets:
        pts = convex_hull(points).vertices
        sums = list(convex_hull((s[0] + p[0], s[1] + p[1]) for s in sums for p in pts).vertices)
    return convex_hull(sums)


def mixed_area(first: Iterable[LatticePoint], second: Iterable[LatticePoint]) -> int:
    """Normalized mixed area MV(P, Q) = area(P + Q) - area(P) - area(Q)."""
    first, second = list(first), list(second)
    total = minkowski_sum(first, second).area2()
    return (total - convex_hull(first).area2() - convex_hull(second).area2()) // 2


def transpose_polygon(poly: LatticePolygon) -> LatticePolygon:
    return convex_hull((y, x) for x, y in poly.vertices)
