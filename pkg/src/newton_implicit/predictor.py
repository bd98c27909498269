"""Closed-form prediction of implicit polygons.

The same-denominator and polynomial predictions come straight from the
vertex formulas. For different denominators the polygon is assembled from
staircase enumeration (authoritative) and cross-checked against the corner
formulas; a disagreement is a hard error.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from newton_implicit.core.errors import CapExceeded, ChainMismatch, DegreeInvariantViolated
from newton_implicit.core.models import (
    CaseTag,
    Classification,
    CurveClass,
    DiffDenomData,
    ParametricCurve,
    SameDenomData,
    Support,
    support_of,
)
from newton_implicit.curves import (
    as_different_denominators,
    classify_same_denom,
    derive_diff_denom,
    derive_same_denom,
)
from newton_implicit.geometry import (
    ChainRole,
    LatticePoint,
    LatticePolygon,
    convex_hull,
    mixed_area,
    region_between,
)
from newton_implicit.subdivisions import DEFAULT_CAP, hull_of_exponents

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Candidate:
    point: LatticePoint
    label: str

    def to_dict(self) -> dict:
        return {"point": list(self.point), "label": self.label}


@dataclass(frozen=True)
class CornerBreakpoint:
    """Point p where a corner with costly entry and exit bends, and its
    discriminant delta; p lies on the corner edge exactly when delta == 0."""
    corner: str
    point: LatticePoint
    delta: int
    edge: Tuple[LatticePoint, LatticePoint]

    def to_dict(self) -> dict:
        return {"corner": self.corner, "point": list(self.point), "delta": self.delta,
                "edge": [list(p) for p in self.edge]}


@dataclass(frozen=True)
class PredictedPolygon:
    polygon: LatticePolygon
    candidates: Tuple[Candidate, ...]
    case: str
    breakpoints: Tuple[CornerBreakpoint, ...] = ()
    classification: Optional[Classification] = None

    def to_dict(self) -> dict:
        data = {
            "case": self.case,
            "polygon": self.polygon.to_dict(),
            "candidates": [c.to_dict() for c in self.candidates],
        }
        if self.breakpoints:
            data["breakpoints"] = [b.to_dict() for b in self.breakpoints]
        if self.classification is not None:
            data["classification"] = self.classification.to_dict()
        return data


def _assemble(candidates: Sequence[Candidate], case: str, **extra) -> PredictedPolygon:
    polygon = convex_hull(c.point for c in candidates)
    return PredictedPolygon(polygon=polygon, candidates=tuple(candidates), case=case, **extra)


# -- polynomial ----------------------------------------------------------

def predict_polynomial(support0: Support, support1: Support) -> PredictedPolygon:
    """support0, support1 are the supports of P0 and P1 (the exponent 0 of
    the x and y terms of f_i = x_i - P_i is implied)."""
    s0, s1 = sorted(set(support0)), sorted(set(support1))
    a0n, a1m = s0[-1], s1[-1]
    if s0[0] == 0 or s1[0] == 0:
        candidates = [
            Candidate((0, 0), "constant term"),
            Candidate((a1m, 0), "x^a1m"),
            Candidate((0, a0n), "y^a0n"),
        ]
        return _assemble(candidates, "polynomial-triangle")

    a01, a11 = s0[0], s1[0]
    candidates = [
        Candidate((a11, 0), "x^a11"),
        Candidate((a1m, 0), "x^a1m"),
        Candidate((0, a0n), "y^a0n"),
        Candidate((0, a01), "y^a01"),
    ]
    return _assemble(candidates, "polynomial-quadrilateral")


def extreme_coefficients(curve: ParametricCurve) -> Tuple[Fraction, Fraction]:
    """Coefficients of x^a1m and y^a0n in the implicit equation of a
    polynomial curve, scaled by the shared sign so the first is positive."""
    if curve.curve_class is not CurveClass.POLYNOMIAL:
        raise ValueError("extreme coefficients are defined for polynomial curves")
    a0n, a1m = max(curve.p0), max(curve.p1)
    c0n, c1m = curve.p0[a0n], curve.p1[a1m]
    x_coeff = (-1) ** (a0n * a1m) * (-c1m) ** a0n
    y_coeff = (-c0n) ** a1m
    if x_coeff < 0:
        x_coeff, y_coeff = -x_coeff, -y_coeff
    return Fraction(x_coeff), Fraction(y_coeff)


# -- same denominator ----------------------------------------------------

def _to_e01(data: SameDenomData, first: int, second: int, a: int, b: int) -> LatticePoint:
    """Maps a point given in (e_first, e_second) to (e0, e1) using e0+e1+e2 = u."""
    e = [None, None, None]
    e[first], e[second] = a, b
    missing = next(k for k in range(3) if e[k] is None)
    e[missing] = data.u - a - b
    return (e[0], e[1])


def _pair_point(data: SameDenomData, i: int, j: int, left: int, t: int, right: int, m: int) -> LatticePoint:
    lam = next(k for k in range(3) if k not in (i, j))
    e = [0, 0, 0]
    e[lam] = right - left
    e[j if t == i else i] += left
    e[j if m == i else i] += data.u - right
    return (e[0], e[1])


def same_corners_vertex(data: SameDenomData, i: int, j: int) -> LatticePoint:
    if i == j:
        raise ValueError("same_corners_vertex needs two distinct supports")
    t = i if data.left(i) <= data.left(j) else j
    m = i if data.right(i) >= data.right(j) else j
    return _pair_point(data, i, j, data.left(t), t, data.right(m), m)


def c0_points(data: SameDenomData, i: int, j: int) -> List[LatticePoint]:
    """Members of the implicit polygon from the min/max endpoint variants."""
    if i == j:
        raise ValueError("c0_points needs two distinct supports")
    Li, Lj, Ri, Rj = data.left(i), data.left(j), data.right(i), data.right(j)
    min_l = (Li, i) if Li <= Lj else (Lj, j)
    max_l = (Li, i) if Li >= Lj else (Lj, j)
    min_r = (Ri, i) if Ri <= Rj else (Rj, j)
    max_r = (Ri, i) if Ri >= Rj else (Rj, j)

    variants = [(min_l, min_r), (max_l, max_r)]
    if max_l[0] <= min_r[0]:
        variants.append((max_l, min_r))
    return [_pair_point(data, i, j, lft, t, rgt, m) for (lft, t), (rgt, m) in variants]


def predict_same_denom(data: SameDenomData) -> PredictedPolygon:
    classification = data.classification or classify_same_denom(data)
    work = data.reversed() if classification.reversed else data
    i, j, k = classification.roles
    u = work.u
    L = [work.left(n) for n in range(3)]
    R = [work.right(n) for n in range(3)]
    case = classification.case

    if case is CaseTag.ONE_A:
        pairs = [((0, 0), "1A: 1"), ((u, 0), "1A: x^u"), ((0, u), "1A: y^u")]
        candidates = [Candidate(p, label) for p, label in pairs]
    else:
        if case is CaseTag.TWO_A:
            raw = [
                ((u, 0), "2A: (u, 0)"),
                ((0, u), "2A: (0, u)"),
                ((0, u - R[i] + L[i]), "2A: (0, u - b_iR + b_iL)"),
                ((L[j], u - R[i]), "2A: (b_jL, u - b_iR)"),
                ((u - R[j] + L[j], 0), "2A: (u - b_jR + b_jL, 0)"),
            ]
        elif case is CaseTag.TWO_B:
            raw = [
                ((R[j], 0), "2B: (b_jR, 0)"),
                ((R[k], u - R[k]), "2B: (b_kR, u - b_kR)"),
                ((0, u), "2B: (0, u)"),
                ((0, 0), "2B: (0, 0)"),
            ]
        else:
            raw = [
                ((R[j], 0), "3B: (b_jR, 0)"),
                ((R[k], u - R[k]), "3B: (b_kR, u - b_kR)"),
                ((L[k], u - L[k]), "3B: (b_kL, u - b_kL)"),
                ((0, u - L[i]), "3B: (0, u - b_iL)"),
                ((0, 0), "3B: (0, 0)"),
            ]
        candidates = [Candidate(_to_e01(data, i, j, a, b), label) for (a, b), label in raw]

    for a, b in combinations(range(3), 2):
        candidates.append(Candidate(same_corners_vertex(data, a, b), f"corner vertex ({a},{b})"))

    for c in candidates:
        if not 0 <= c.point[0] + c.point[1] <= data.u or min(c.point) < 0:
            raise DegreeInvariantViolated(f"candidate {c.point} ({c.label}) leaves the degree-{data.u} triangle")
    logger.debug("Same-denominator case %s%s roles %s", case.value,
                 " (reversed)" if classification.reversed else "", classification.roles)
    return _assemble(candidates, case.value, classification=classification)


def mixed_volume_check(data: SameDenomData) -> Dict[Tuple[int, int], int]:
    """For every pair of supports, the planar mixed area of the lifted
    supports {(0,1)} u B_i x {0} equals the length of conv(B_i u B_j)."""
    planar = [[(0, 1)] + [(b, 0) for b in s] for s in data.supports]
    result = {}
    for i, j in combinations(range(3), 2):
        mv = mixed_area(planar[i], planar[j])
        length = max(data.right(i), data.right(j)) - min(data.left(i), data.left(j))
        if mv != length:
            raise DegreeInvariantViolated(f"MV(A{i}, A{j}) = {mv} but the segment hull has length {length}")
        result[(i, j)] = mv
    return result


# -- different denominators ----------------------------------------------

CORNERS = ("upper-right", "upper-left", "lower-right", "lower-left")


def _corner_loss_points(a0: Support, a1: Support, g0, g1):
    """Exponent points (e0, e1) maximal towards the upper right when the
    counted points are g0 in A0 and g1 in A1, plus the breakpoint if both
    the first and the last staircase step lose volume."""
    x_full, y_full = a1[-1] - a1[0], a0[-1] - a0[0]
    if not g0:
        return [(0, y_full if g1 else 0)], None
    if not g1:
        return [(x_full, 0)], None
    g0s, g1s = sorted(g0), sorted(g1)

    if a0[0] in g0 or a1[0] in g1:
        entry = [(0, 0)]
    else:
        entry = [(g1s[0] - a1[0], 0), (0, g0s[0] - a0[0])]
    if a0[-1] in g0 or a1[-1] in g1:
        leave = [(0, 0)]
    else:
        leave = [(a1[-1] - g1s[-1], 0), (0, a0[-1] - g0s[-1])]

    points = sorted({(x_full - e[0] - f[0], y_full - e[1] - f[1]) for e in entry for f in leave})
    breakpoint = None
    if len(entry) == 2 and len(leave) == 2:
        lx, ly = entry[0][0], entry[1][1]
        ex, ey = leave[0][0], leave[1][1]
        delta = ey * lx - ly * ex
        if delta > 0:
            p = (x_full - ex, y_full - ly)
        else:
            p = (x_full - lx, y_full - ey)
        edge = ((x_full - lx - ex, y_full), (x_full, y_full - ly - ey))
        breakpoint = (p, delta, edge)
    return points, breakpoint


def diff_denom_corners(data: DiffDenomData) -> Tuple[List[Candidate], List[CornerBreakpoint]]:
    a0, a1 = data.a0, data.a1
    s1, s2 = data.selection1, data.selection2
    x_full, y_full = a1[-1] - a1[0], a0[-1] - a0[0]
    low0 = set(a0) - s2.selected(0)
    low1 = set(a1) - s2.selected(1)

    setups = {
        "upper-right": (s1.selected(0), s1.selected(1), False, False),
        "upper-left": (low0, s1.selected(1), True, False),
        "lower-right": (s1.selected(0), low1, False, True),
        "lower-left": (low0, low1, True, True),
    }
    candidates: List[Candidate] = []
    breakpoints: List[CornerBreakpoint] = []
    for corner in CORNERS:
        g0, g1, flip_x, flip_y = setups[corner]

        def place(p, flip_x=flip_x, flip_y=flip_y):
            return (x_full - p[0] if flip_x else p[0], y_full - p[1] if flip_y else p[1])

        points, bp = _corner_loss_points(a0, a1, g0, g1)
        candidates.extend(Candidate(place(p), f"{corner} corner") for p in points)
        if bp is not None:
            p, delta, edge = bp
            breakpoints.append(CornerBreakpoint(corner, place(p), delta, (place(edge[0]), place(edge[1]))))
    return candidates, breakpoints


def predict_diff_denom(data: DiffDenomData, cap: int = DEFAULT_CAP, force: bool = False) -> PredictedPolygon:
    fast_candidates, breakpoints = diff_denom_corners(data)
    fast = convex_hull(c.point for c in fast_candidates)

    s1, s2 = data.selection1, data.selection2
    try:
        upper = hull_of_exponents(data.a0, data.a1, s1, ChainRole.UPPER, partner=s2, cap=cap, force=force)
        lower = hull_of_exponents(data.a0, data.a1, s2, ChainRole.LOWER, partner=s1, cap=cap, force=force)
    except CapExceeded as e:
        logger.warning("Skipping staircase enumeration (%s); using the corner formulas only", e)
        return _assemble(fast_candidates, "different-denominators (closed form)",
                         breakpoints=tuple(breakpoints))

    enumerated = region_between(upper, lower)
    if enumerated != fast:
        raise ChainMismatch(fast, enumerated)

    candidates = list(fast_candidates)
    candidates += [Candidate(p, "upper chain") for p in upper.points]
    candidates += [Candidate(p, "lower chain") for p in lower.points]
    logger.debug("Different-denominator polygon %s", list(enumerated.vertices))
    return _assemble(candidates, "different-denominators", breakpoints=tuple(breakpoints))


# -- bounds and dispatch -------------------------------------------------

class DegreeBounds(NamedTuple):
    total: int
    deg_x: int
    deg_y: int

    def to_dict(self) -> dict:
        return {"total": self.total, "deg_x": self.deg_x, "deg_y": self.deg_y}


def _length(points) -> int:
    points = list(points)
    return max(points) - min(points)


def degree_bounds(curve: ParametricCurve) -> DegreeBounds:
    p0, p1, q0, q1 = curve.supports()
    a0 = set(p0) | set(q0)
    a1 = set(p1) | set(q1)
    if curve.curve_class is CurveClass.SAME_DENOMINATOR:
        total = _length(set(p0) | set(p1) | set(q0))
    else:
        sums = {a + b for a in p0 for b in q1}
        sums |= {a + b for a in p1 for b in q0}
        sums |= {a + b for a in q0 for b in q1}
        total = _length(sums)
    return DegreeBounds(total=total, deg_x=_length(a1), deg_y=_length(a0))


def degree_bound_polygon(bounds: DegreeBounds) -> LatticePolygon:
    """{e0 <= deg_x, e1 <= deg_y, e0 + e1 <= total} in the positive quadrant."""
    x, y, total = bounds.deg_x, bounds.deg_y, bounds.total
    points = [(0, 0), (min(x, total), 0), (0, min(y, total))]
    if total >= x:
        points.append((x, min(y, total - x)))
    if total >= y:
        points.append((min(x, total - y), y))
    return convex_hull(points)


def predict(curve: ParametricCurve, route: str = "auto", cap: int = DEFAULT_CAP,
            force: bool = False) -> PredictedPolygon:
    """Dispatches on the class of a normalized curve. route="diff" treats
    every curve as having different denominators."""
    if route == "diff":
        return predict_diff_denom(derive_diff_denom(as_different_denominators(curve)), cap=cap, force=force)
    if curve.curve_class is CurveClass.POLYNOMIAL:
        return predict_polynomial(support_of(curve.p0), support_of(curve.p1))
    if curve.curve_class is CurveClass.SAME_DENOMINATOR:
        return predict_same_denom(derive_same_denom(curve))
    return predict_diff_denom(derive_diff_denom(curve), cap=cap, force=force)
