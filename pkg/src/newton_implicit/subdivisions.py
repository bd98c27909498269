"""Combinatorial certificates behind the predicted polygons.

Two engines live here:

* staircase triangulations of the Cayley configuration of two segments
  (different denominators and polynomials), with the exponent point each
  one contributes under a selection;
* mixed subdivisions of the three planar supports {(0,1)} u B_i x {0} of the
  same-denominator system, induced by a lifting and certified cell by cell.

All arithmetic is exact; liftings are Fractions.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from newton_implicit.core.errors import CapExceeded, DegreeInvariantViolated, NonGenericLifting
from newton_implicit.core.models import SameDenomData, Selection, Support
from newton_implicit.geometry import (
    ChainRole,
    LatticePoint,
    LatticePolygon,
    MonotoneChain,
    convex_hull,
    cross,
    lower_hull,
    minkowski_sum,
)

logger = logging.getLogger(__name__)

DEFAULT_CAP = 24


# -- staircases ----------------------------------------------------------

@dataclass(frozen=True)
class Triangle:
    """A Cayley triangle: a base edge on one side and an apex on the other."""
    base_side: int
    base: Tuple[int, int]
    apex: int

    @property
    def volume(self) -> int:
        return self.base[1] - self.base[0]


@dataclass(frozen=True)
class Staircase:
    a0: Support
    a1: Support
    path: Tuple[Tuple[int, int], ...]

    @property
    def triangles(self) -> List[Triangle]:
        tris = []
        for (i, j), (ni, nj) in zip(self.path, self.path[1:]):
            if ni == i + 1:
                tris.append(Triangle(0, (self.a0[i], self.a0[ni]), self.a1[j]))
            else:
                tris.append(Triangle(1, (self.a1[j], self.a1[nj]), self.a0[i]))
        return tris

    def volume(self) -> int:
        return sum(t.volume for t in self.triangles)

    def to_dict(self) -> dict:
        return {
            "A0": list(self.a0),
            "A1": list(self.a1),
            "path": [list(p) for p in self.path],
        }


def _kept_subsets(points: Support) -> List[Support]:
    """Subsets keeping both endpoints; interior points are optional."""
    if len(points) <= 2:
        return [tuple(points)]
    interior = points[1:-1]
    kept = []
    for r in range(len(interior) + 1):
        for chosen in combinations(interior, r):
            kept.append((points[0],) + chosen + (points[-1],))
    return sorted(kept)


def _paths(n: int, m: int) -> Iterator[Tuple[Tuple[int, int], ...]]:
    for a1_steps in combinations(range(n + m), m):
        i = j = 0
        path = [(0, 0)]
        steps = set(a1_steps)
        for pos in range(n + m):
            if pos in steps:
                j += 1
            else:
                i += 1
            path.append((i, j))
        yield tuple(path)


def count_staircase_triangulations(size0: int, size1: int) -> int:
    """Number of triangulations of the Cayley configuration of two
    collinear point sets with size0 and size1 points."""
    def segment_choices(size):
        if size <= 1:
            return [(0, 1)]
        inner = size - 2
        return [(s + 1, comb(inner, s)) for s in range(inner + 1)]

    return sum(w0 * w1 * comb(k0 + k1, k0)
               for k0, w0 in segment_choices(size0)
               for k1, w1 in segment_choices(size1))


def enumerate_staircases(a0: Support, a1: Support, cap: int = DEFAULT_CAP,
                         force: bool = False) -> Iterator[Staircase]:
    """Every triangulation of the Cayley configuration, interior points
    used or skipped, in lexicographic order."""
    a0, a1 = tuple(sorted(set(a0))), tuple(sorted(set(a1)))
    if (len(a0) - 1) + (len(a1) - 1) > cap and not force:
        raise CapExceeded(count_staircase_triangulations(len(a0), len(a1)), cap)
    for kept0 in _kept_subsets(a0):
        for kept1 in _kept_subsets(a1):
            for path in _paths(len(kept0) - 1, len(kept1) - 1):
                yield Staircase(kept0, kept1, path)


def exponents_from_staircase(s: Staircase, sel: Selection) -> LatticePoint:
    e0 = sum(t.volume for t in s.triangles if t.base_side == 1 and sel.is_selected(0, t.apex))
    e1 = sum(t.volume for t in s.triangles if t.base_side == 0 and sel.is_selected(1, t.apex))
    return (e0, e1)


def _path_exponents(a0: Support, a1: Support, selections: Sequence[Selection]) -> set:
    """Exponent tuples (e0, e1 per selection, concatenated) reached by the
    full-grid paths, by dynamic programming over the index grid."""
    n, m = len(a0) - 1, len(a1) - 1
    width = 2 * len(selections)
    states: Dict[Tuple[int, int], set] = {(0, 0): {(0,) * width}}
    for i in range(n + 1):
        for j in range(m + 1):
            here = states.pop((i, j), set())
            if (i, j) == (n, m):
                return here
            if i < n:
                length = a0[i + 1] - a0[i]
                add = [0] * width
                for k, sel in enumerate(selections):
                    if sel.is_selected(1, a1[j]):
                        add[2 * k + 1] = length
                states.setdefault((i + 1, j), set()).update(
                    tuple(s + d for s, d in zip(st, add)) for st in here)
            if j < m:
                length = a1[j + 1] - a1[j]
                add = [0] * width
                for k, sel in enumerate(selections):
                    if sel.is_selected(0, a0[i]):
                        add[2 * k] = length
                states.setdefault((i, j + 1), set()).update(
                    tuple(s + d for s, d in zip(st, add)) for st in here)
    return set()


def hull_of_exponents(a0: Support, a1: Support, sel: Selection, role: ChainRole,
                      partner: Optional[Selection] = None, cap: int = DEFAULT_CAP,
                      force: bool = False) -> MonotoneChain:
    """Upper or lower monotone hull of the exponent points of all staircases.

    With a partner selection the points are the corners of the exponent
    boxes spanned by one staircase under both selections: the upper chain
    sees (lo_x, hi_y) besides hi, the lower chain (hi_x, lo_y) besides lo.
    """
    a0, a1 = tuple(sorted(set(a0))), tuple(sorted(set(a1)))
    x_full, y_full = a1[-1] - a1[0], a0[-1] - a0[0]

    if partner is None:
        g0, g1 = sel.selected(0), sel.selected(1)
        if not g0 or not g1:
            if not g0:
                lo = 0 if set(a1) - g1 else y_full
                hi = y_full if g1 else 0
                points = [(0, lo), (0, hi)]
            else:
                lo = 0 if set(a0) - g0 else x_full
                points = [(lo, 0), (x_full, 0)]
            return MonotoneChain.from_points(points, role)

    n, m = len(a0) - 1, len(a1) - 1
    if n + m > cap and not force:
        raise CapExceeded(comb(n + m, n), cap)

    if partner is None:
        points = {(st[0], st[1]) for st in _path_exponents(a0, a1, [sel])}
    else:
        points = set()
        for st in _path_exponents(a0, a1, [sel, partner]):
            own, other = (st[0], st[1]), (st[2], st[3])
            points.add(own)
            points.add((other[0], own[1]))
    chain = MonotoneChain.from_points(points, role)
    logger.debug("%s chain over %d exponent points: %s", role.name.lower(), len(points), chain.points)
    return chain


# -- liftings and mixed subdivisions -------------------------------------

R_POINT: LatticePoint = (0, 1)


def planar_supports(data: SameDenomData) -> Tuple[Tuple[LatticePoint, ...], ...]:
    """A_i = {(0,1)} u {(b,0) : b in B_i}, for x_i r - P_i(t) and r - Q(t)."""
    return tuple((R_POINT,) + tuple((b, 0) for b in s) for s in data.supports)


@dataclass(frozen=True)
class Lifting:
    values: Mapping[Tuple[int, LatticePoint], Fraction]

    def __call__(self, i: int, p: LatticePoint) -> Fraction:
        return self.values[(i, p)]

    def perturbed(self, step: int) -> "Lifting":
        """Adds step/10^6 times a fixed generic weight to every value."""
        eps = Fraction(step, 10 ** 6)
        values = {}
        for idx, key in enumerate(sorted(self.values)):
            weight = (idx * idx * 7 + 3 * idx + 1) % 101 + 1
            values[key] = self.values[key] + eps * weight
        return Lifting(values)

    def to_dict(self) -> dict:
        out: Dict[str, list] = {}
        for (i, p), v in sorted(self.values.items()):
            out.setdefault(f"A{i}", []).append([p[0], p[1], str(v)])
        return out


class CellKind(Enum):
    TYPE_I = "type-I"
    TYPE_II = "type-II"
    BASE_VERTEX = "base-vertex"
    UNMIXED = "unmixed"


@dataclass(frozen=True)
class MixedCell:
    kind: CellKind
    # the support contributing the vertex (mixed) or the triangle (unmixed)
    index: int
    summands: Tuple[Tuple[LatticePoint, ...], Tuple[LatticePoint, ...], Tuple[LatticePoint, ...]]
    area2: int

    @property
    def is_mixed(self) -> bool:
        return self.kind is not CellKind.UNMIXED

    @property
    def volume(self) -> Fraction:
        return Fraction(self.area2, 2)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "index": self.index,
            "summands": [[list(p) for p in face] for face in self.summands],
            "volume": str(self.volume),
        }


@dataclass(frozen=True)
class MixedSubdivision:
    cells: Tuple[MixedCell, ...]
    u: int
    lifting: Lifting

    def area2(self) -> int:
        return sum(c.area2 for c in self.cells)

    def to_dict(self) -> dict:
        return {"u": self.u, "cells": [c.to_dict() for c in self.cells],
                "lifting": self.lifting.to_dict()}


def minkowski_area2(supports: Sequence[Sequence[LatticePoint]]) -> int:
    return minkowski_sum(*supports).area2()


def cell_vertices(cell: MixedCell) -> Tuple[LatticePoint, ...]:
    return minkowski_sum(*cell.summands).vertices


def _lower_edges(i: int, support: Sequence[LatticePoint], omega: Lifting):
    base = [p for p in support if p != R_POINT]
    chain = lower_hull((p[0], omega(i, p)) for p in base)
    vertices = [(x, 0) for x, _ in chain]
    edges = [(R_POINT, v) for v in vertices]
    edges += list(zip(vertices, vertices[1:]))
    return edges, vertices


def _face(i: int, support: Sequence[LatticePoint], omega: Lifting, gamma) -> List[LatticePoint]:
    values = {p: gamma[0] * p[0] + gamma[1] * p[1] + omega(i, p) for p in support}
    best = min(values.values())
    return sorted(p for p, v in values.items() if v == best)


def _is_collinear(points: Sequence[LatticePoint]) -> bool:
    return len(points) < 3 or all(cross(points[0], points[1], p) == 0 for p in points[2:])


def _solve(d1, r1, d2, r2):
    """gamma with <gamma, d1> = r1 and <gamma, d2> = r2."""
    det = d1[0] * d2[1] - d1[1] * d2[0]
    return (Fraction(r1 * d2[1] - r2 * d1[1]) / det, Fraction(d1[0] * r2 - d2[0] * r1) / det)


def _edge_face_ok(face: List[LatticePoint], edge) -> bool:
    if edge[0] not in face or edge[1] not in face:
        return False
    if not _is_collinear(face):
        raise NonGenericLifting(f"face {face} is two-dimensional where an edge was expected")
    return (face[0], face[-1]) == tuple(sorted(edge))


def subdivision_from_lifting(data: SameDenomData, omega: Lifting) -> MixedSubdivision:
    supports = planar_supports(data)
    lower = [_lower_edges(i, supports[i], omega) for i in range(3)]
    cells: List[MixedCell] = []

    for i in range(3):
        j, k = [x for x in range(3) if x != i]
        for ej in lower[j][0]:
            for ek in lower[k][0]:
                dj = (ej[1][0] - ej[0][0], ej[1][1] - ej[0][1])
                dk = (ek[1][0] - ek[0][0], ek[1][1] - ek[0][1])
                det = dj[0] * dk[1] - dj[1] * dk[0]
                if det == 0:
                    continue
                gamma = _solve(dj, omega(j, ej[0]) - omega(j, ej[1]),
                               dk, omega(k, ek[0]) - omega(k, ek[1]))
                faces = [_face(x, supports[x], omega, gamma) for x in range(3)]
                if not _edge_face_ok(faces[j], ej) or not _edge_face_ok(faces[k], ek):
                    continue
                if len(faces[i]) > 1:
                    raise NonGenericLifting(f"vertex summand of support {i} is not a single point: {faces[i]}")
                v = faces[i][0]
                if v != R_POINT:
                    kind = CellKind.BASE_VERTEX
                elif R_POINT in ej and R_POINT in ek:
                    kind = CellKind.TYPE_I
                else:
                    kind = CellKind.TYPE_II
                summands = [None, None, None]
                summands[i] = (v,)
                summands[j] = tuple(sorted(ej))
                summands[k] = tuple(sorted(ek))
                cells.append(MixedCell(kind, i, tuple(summands), 2 * abs(det)))

    for i in range(3):
        j, k = [x for x in range(3) if x != i]
        vertices = lower[i][1]
        for p, q in zip(vertices, vertices[1:]):
            gamma = _solve((p[0], p[1] - 1), omega(i, R_POINT) - omega(i, p),
                           (q[0], q[1] - 1), omega(i, R_POINT) - omega(i, q))
            faces = [_face(x, supports[x], omega, gamma) for x in range(3)]
            if len(faces[j]) > 1 or len(faces[k]) > 1:
                raise NonGenericLifting(f"triangle of support {i} meets a non-vertex face")
            summands = [None, None, None]
            summands[i] = (R_POINT, p, q)
            summands[j] = tuple(faces[j])
            summands[k] = tuple(faces[k])
            cells.append(MixedCell(CellKind.UNMIXED, i, tuple(summands), q[0] - p[0]))

    total = sum(c.area2 for c in cells)
    expected = minkowski_area2(supports)
    if total != expected:
        raise NonGenericLifting(f"cells cover area {Fraction(total, 2)} of {Fraction(expected, 2)}")
    return MixedSubdivision(tuple(cells), data.u, omega)


def exponent_from_subdivision(s: MixedSubdivision) -> Tuple[int, int, int]:
    e = [0, 0, 0]
    for cell in s.cells:
        if cell.kind in (CellKind.TYPE_I, CellKind.TYPE_II):
            e[cell.index] += cell.area2 // 2
    if sum(e) != s.u:
        raise DegreeInvariantViolated(f"exponent {tuple(e)} does not have degree {s.u}")
    return tuple(e)


# -- sampling ------------------------------------------------------------

def structured_liftings(data: SameDenomData, grid: Tuple[int, int] = (-3, 3)) -> Iterator[Lifting]:
    """Liftings linear on every B_i. The first support is fixed to slope and
    offset 0 since a global linear function does not change the subdivision;
    the r-points get small perturbations quadratic in the index."""
    supports = planar_supports(data)
    steps = range(grid[0], grid[1] + 1)
    for s1, s2, o1, o2 in product(steps, repeat=4):
        slopes, offsets = (0, s1, s2), (0, o1, o2)
        values = {}
        for i, support in enumerate(supports):
            for p in support:
                if p == R_POINT:
                    values[(i, p)] = offsets[i] + Fraction((i + 1) ** 2, 7000)
                else:
                    values[(i, p)] = Fraction(slopes[i] * p[0])
        yield Lifting(values)


def random_liftings(data: SameDenomData, trials: int, seed: int,
                    lift_range: int = 10_000) -> Iterator[Lifting]:
    rng = random.Random(seed)
    supports = planar_supports(data)
    for _ in range(trials):
        yield Lifting({(i, p): Fraction(rng.randint(-lift_range, lift_range))
                       for i, support in enumerate(supports) for p in support})


def sample_liftings(data: SameDenomData, trials: int, seed: int, structured: bool = True,
                    grid: Tuple[int, int] = (-3, 3), lift_range: int = 10_000) -> Iterator[Lifting]:
    if structured:
        yield from structured_liftings(data, grid)
    yield from random_liftings(data, trials, seed, lift_range)


def tight_subdivision(data: SameDenomData, omega: Lifting, attempts: int = 5) -> Optional[MixedSubdivision]:
    """The subdivision of omega, perturbing it while it is not tight."""
    current = omega
    for attempt in range(attempts + 1):
        try:
            return subdivision_from_lifting(data, current)
        except NonGenericLifting as e:
            logger.debug("Lifting not tight (%s); perturbing, attempt %d", e, attempt + 1)
            current = omega.perturbed(attempt + 1)
    logger.warning("Giving up on a lifting after %d perturbations", attempts)
    return None


def sample_lifting_points(data: SameDenomData, trials: int, seed: int, structured: bool = True,
                          grid: Tuple[int, int] = (-3, 3),
                          lift_range: int = 10_000) -> Dict[LatticePoint, Lifting]:
    """Projected exponent points reached by the sampled liftings, each with
    the first lifting that produced it."""
    witnesses: Dict[LatticePoint, Lifting] = {}
    for omega in sample_liftings(data, trials, seed, structured, grid, lift_range):
        sub = tight_subdivision(data, omega)
        if sub is None:
            continue
        e = exponent_from_subdivision(sub)
        witnesses.setdefault((e[0], e[1]), sub.lifting)
    return witnesses


def sample_lifting_hull(data: SameDenomData, trials: int, seed: int, structured: bool = True,
                        grid: Tuple[int, int] = (-3, 3), lift_range: int = 10_000) -> LatticePolygon:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    points = sample_lifting_points(data, trials, seed, structured, grid, lift_range)
    if not points:
        raise NonGenericLifting("no sampled lifting induced a tight subdivision")
    hull = convex_hull(points)
    logger.info("Lifting sampler reached %d exponent points, hull %s", len(points), list(hull.vertices))
    return hull
