"""Ground-truth implicitization for curves with concrete coefficients.

Two independent routes: interpolation of the implicit equation over a
candidate support (exact nullspace of an evaluation matrix) and the
Sylvester resultant in t with curve-vanishing factor selection. Neither
route looks at the combinatorial predictions.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import sympy
from sympy.polys.subresultants_qq_zz import sylvester

from newton_implicit.core.errors import (
    CurveParseError,
    FactorSelectionAmbiguous,
    HeldOutCheckFailed,
    KernelDimensionNotOne,
    NonGenericLifting,
    OracleError,
    ResamplingExhausted,
    ZeroResultant,
)
from newton_implicit.core.models import (
    Coefficients,
    CurveClass,
    ParametricCurve,
    SameDenomData,
    support_of,
)
from newton_implicit.curves import T, normalize
from newton_implicit.geometry import LatticePoint, LatticePolygon, convex_hull
from newton_implicit.subdivisions import R_POINT, Lifting

logger = logging.getLogger(__name__)

X, Y = sympy.symbols("x y")

CurvePoint = Tuple[Fraction, Fraction]


@dataclass(frozen=True)
class ImplicitPolynomial:
    terms: Mapping[LatticePoint, Fraction]

    @classmethod
    def from_sympy(cls, expr) -> "ImplicitPolynomial":
        poly = sympy.Poly(expr, X, Y)
        terms = {(int(m[0]), int(m[1])): Fraction(int(c.p), int(c.q))
                 for m, c in poly.terms() if c != 0}
        return cls(terms).normalized()

    def normalized(self) -> "ImplicitPolynomial":
        """Integer coefficients with gcd 1; the lexicographically largest
        exponent gets a positive coefficient."""
        terms = {e: Fraction(c) for e, c in self.terms.items() if c != 0}
        if not terms:
            raise ValueError("the zero polynomial has no normal form")
        scale = lcm(*(c.denominator for c in terms.values()))
        ints = {e: int(c * scale) for e, c in terms.items()}
        content = 0
        for v in ints.values():
            content = gcd(content, v)
        if ints[max(ints)] < 0:
            content = -content
        return ImplicitPolynomial({e: Fraction(v // content) for e, v in sorted(ints.items())})

    def same_up_to_scale(self, other: "ImplicitPolynomial") -> bool:
        return dict(self.normalized().terms) == dict(other.normalized().terms)

    def support(self) -> List[LatticePoint]:
        return sorted(self.terms)

    def to_sympy(self):
        return sum(sympy.Rational(c.numerator, c.denominator) * X ** e0 * Y ** e1
                   for (e0, e1), c in self.terms.items())

    def evaluate(self, x: Fraction, y: Fraction) -> Fraction:
        return sum((c * x ** e0 * y ** e1 for (e0, e1), c in self.terms.items()), Fraction(0))

    def to_dict(self) -> dict:
        return {"terms": {f"{e0},{e1}": str(c) for (e0, e1), c in sorted(self.terms.items())}}

    @classmethod
    def from_dict(cls, data: dict) -> "ImplicitPolynomial":
        terms = {}
        for key, value in data["terms"].items():
            e0, e1 = key.split(",")
            terms[(int(e0), int(e1))] = Fraction(value)
        return cls(terms)


def newton_polygon(p: ImplicitPolynomial) -> LatticePolygon:
    if not p.terms:
        raise ValueError("the zero polynomial has no Newton polygon")
    return convex_hull(p.terms)


# -- exact linear algebra ------------------------------------------------

def _bit_size(v: Fraction) -> int:
    return abs(v.numerator).bit_length() + v.denominator.bit_length()


class RationalMatrix:
    """Dense matrix of Fractions with exact row reduction."""

    def __init__(self, rows: Sequence[Sequence[Fraction]]):
        self.rows = [[Fraction(v) for v in row] for row in rows]
        self.n_rows = len(self.rows)
        self.n_cols = len(self.rows[0]) if self.rows else 0

    def rref(self) -> Tuple[List[List[Fraction]], List[int]]:
        """Reduced row echelon form and pivot columns. Among the candidate
        rows the pivot with the smallest bit size is chosen."""
        m = [row[:] for row in self.rows]
        pivots: List[int] = []
        r = 0
        for c in range(self.n_cols):
            if r == self.n_rows:
                break
            candidates = [i for i in range(r, self.n_rows) if m[i][c] != 0]
            if not candidates:
                continue
            p = min(candidates, key=lambda i: _bit_size(m[i][c]))
            m[r], m[p] = m[p], m[r]
            pivot = m[r][c]
            m[r] = [v / pivot for v in m[r]]
            for i in range(self.n_rows):
                if i != r and m[i][c] != 0:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        return m, pivots

    def nullspace(self) -> List[List[Fraction]]:
        m, pivots = self.rref()
        free = [c for c in range(self.n_cols) if c not in pivots]
        basis = []
        for f in free:
            vec = [Fraction(0)] * self.n_cols
            vec[f] = Fraction(1)
            for row, c in enumerate(pivots):
                vec[c] = -m[row][f]
            basis.append(vec)
        return basis


# -- sampling ------------------------------------------------------------

def _evaluate(poly: Coefficients, t: Fraction) -> Fraction:
    return sum((c * t ** e for e, c in poly.items()), Fraction(0))


def sample_curve_points(curve: ParametricCurve, count: int, seed: int, height: int = 1000) -> List[CurvePoint]:
    """count points at distinct random rational t, skipping poles."""
    if curve.supports_only:
        raise OracleError("curve has symbolic coefficients; sample generic ones first")
    rng = random.Random(seed)
    seen = set()
    points: List[CurvePoint] = []
    while len(points) < count:
        t = Fraction(rng.randint(-height, height), rng.randint(1, height))
        if t in seen:
            continue
        seen.add(t)
        q0, q1 = _evaluate(curve.denominator(0), t), _evaluate(curve.denominator(1), t)
        if q0 == 0 or q1 == 0:
            continue
        points.append((_evaluate(curve.p0, t) / q0, _evaluate(curve.p1, t) / q1))
    return points


def random_generic_coefficients(curve: ParametricCurve, bound: int, seed: int, budget: int = 50,
                                candidate_support: Optional[Iterable[LatticePoint]] = None,
                                height: int = 1000) -> ParametricCurve:
    """Nonzero integer coefficients in [-bound, bound] on the supports of
    curve, redrawn until no common factor appears, normalization leaves the
    curve unchanged and (if a candidate support is given) the interpolation
    kernel has dimension one."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    candidate = sorted(set(candidate_support)) if candidate_support is not None else None
    values = [v for v in range(-bound, bound + 1) if v != 0]
    rng = random.Random(seed)

    def draw(poly: Optional[Coefficients]) -> Optional[Coefficients]:
        if poly is None:
            return None
        return {e: Fraction(rng.choice(values)) for e in support_of(poly)}

    for attempt in range(budget):
        p0, p1 = draw(curve.p0), draw(curve.p1)
        q0 = draw(curve.q0)
        q1 = q0 if curve.curve_class is CurveClass.SAME_DENOMINATOR else draw(curve.q1)
        concrete = ParametricCurve(curve.curve_class, p0, p1, q0, q1)
        try:
            reduced = normalize(concrete)
        except CurveParseError as e:
            logger.debug("Draw %d rejected: %s", attempt, e)
            continue
        if reduced != concrete:
            logger.debug("Draw %d rejected: normalization changed the supports", attempt)
            continue
        if candidate is not None:
            rows = len(candidate) + 5
            pts = sample_curve_points(concrete, rows, seed + attempt, height)
            kernel = _kernel(candidate, pts)
            if len(kernel) != 1:
                logger.debug("Draw %d rejected: kernel dimension %d", attempt, len(kernel))
                continue
        return concrete
    raise ResamplingExhausted(f"no generic coefficients found in {budget} draws")


# -- interpolation -------------------------------------------------------

def _kernel(monomials: Sequence[LatticePoint], points: Sequence[CurvePoint]) -> List[List[Fraction]]:
    rows = [[x ** e0 * y ** e1 for e0, e1 in monomials] for x, y in points]
    return RationalMatrix(rows).nullspace()


def implicitize_interpolation(curve: ParametricCurve, candidate_support: Iterable[LatticePoint],
                              seed: int = 0, margin: int = 5, held_out: int = 20,
                              height: int = 1000) -> ImplicitPolynomial:
    monomials = sorted(set(candidate_support))
    if not monomials:
        raise ValueError("empty candidate support")
    points = sample_curve_points(curve, len(monomials) + margin + held_out, seed, height)
    fit, check = points[:len(monomials) + margin], points[len(monomials) + margin:]

    kernel = _kernel(monomials, fit)
    if len(kernel) != 1:
        raise KernelDimensionNotOne(len(kernel))
    phi = ImplicitPolynomial(dict(zip(monomials, kernel[0]))).normalized()
    for x, y in check:
        if phi.evaluate(x, y) != 0:
            raise HeldOutCheckFailed(f"interpolated polynomial does not vanish at ({x}, {y})")
    logger.info("Interpolation found a %d-term implicit equation", len(phi.terms))
    return phi


# -- resultants ----------------------------------------------------------

def _as_expr(poly: Coefficients, var=T):
    return sum(sympy.Rational(c.numerator, c.denominator) * var ** e for e, c in poly.items())


def _resultant_expr(curve: ParametricCurve):
    if curve.supports_only:
        raise OracleError("curve has symbolic coefficients; sample generic ones first")
    f0 = sympy.expand(X * _as_expr(curve.denominator(0)) - _as_expr(curve.p0))
    f1 = sympy.expand(Y * _as_expr(curve.denominator(1)) - _as_expr(curve.p1))
    matrix = sylvester(f0, f1, T)
    det = sympy.expand(matrix.det(method="bareiss"))
    if det == 0:
        raise ZeroResultant("the Sylvester resultant vanishes identically")
    return det


def sylvester_resultant(curve: ParametricCurve) -> ImplicitPolynomial:
    """Content-free resultant Res_t(x Q0 - P0, y Q1 - P1), before any factor selection."""
    return ImplicitPolynomial.from_sympy(_resultant_expr(curve))


def implicitize_sylvester(curve: ParametricCurve, seed: int = 0, checks: int = 10,
                          height: int = 1000) -> ImplicitPolynomial:
    det = _resultant_expr(curve)
    _, factors = sympy.factor_list(det, X, Y)
    factors = [f for f, _ in factors if sympy.Poly(f, X, Y).total_degree() > 0]

    points = sample_curve_points(curve, checks, seed, height)
    vanishing = []
    for f in factors:
        poly = ImplicitPolynomial.from_sympy(f)
        if all(poly.evaluate(x, y) == 0 for x, y in points):
            if not any(poly.same_up_to_scale(v) for v in vanishing):
                vanishing.append(poly)
    if len(vanishing) != 1:
        raise FactorSelectionAmbiguous(f"{len(vanishing)} resultant factors vanish on the curve samples")
    if len(factors) > 1:
        logger.info("Discarded %d extraneous resultant factors", len(factors) - 1)
    return vanishing[0]


def extreme_exponent_from_resultant(data: SameDenomData, omega: Lifting) -> Tuple[int, int, int]:
    """Exponent (e0, e1, e2) of the omega-minimal monomial of the generic
    resultant Res_t(x0 Q - x2 P0, x1 Q - x2 P1), with the extraneous power
    of x2 removed. Coefficients are symbols, so this is for small supports."""
    xs = sympy.symbols("x0 x1 x2")
    coeffs = {(i, b): sympy.Symbol(f"c{i}_{b}") for i, s in enumerate(data.supports) for b in s}
    polys = [sum(coeffs[(i, b)] * T ** b for b in s) for i, s in enumerate(data.supports)]
    f0 = sympy.expand(xs[0] * polys[2] - xs[2] * polys[0])
    f1 = sympy.expand(xs[1] * polys[2] - xs[2] * polys[1])
    res = sympy.expand(sympy.resultant(f0, f1, T))
    if res == 0:
        raise ZeroResultant("generic resultant vanishes identically")

    gens = list(xs) + [coeffs[k] for k in sorted(coeffs)]
    weights = [omega(i, R_POINT) for i in range(3)] + [omega(i, (b, 0)) for i, b in sorted(coeffs)]
    poly = sympy.Poly(res, *gens)
    shift = min(m[2] for m in poly.monoms())

    scored = []
    for m in poly.monoms():
        weight = sum(Fraction(w) * e for w, e in zip(weights, m))
        scored.append((weight, (m[0], m[1], m[2] - shift)))
    scored.sort()
    if len(scored) > 1 and scored[0][0] == scored[1][0] and scored[0][1] != scored[1][1]:
        raise NonGenericLifting("two resultant monomials share the minimal weight")
    return scored[0][1]


def verify_vanishing(phi: ImplicitPolynomial, curve: ParametricCurve) -> bool:
    """phi(P0/Q0, P1/Q1) == 0 as a rational function of t."""
    x = _as_expr(curve.p0) / _as_expr(curve.denominator(0))
    y = _as_expr(curve.p1) / _as_expr(curve.denominator(1))
    return sympy.cancel(phi.to_sympy().subs({X: x, Y: y}, simultaneous=True)) == 0
