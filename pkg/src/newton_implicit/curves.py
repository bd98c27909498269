"""Parsing, normalization and classification of parametric curve inputs.

A curve arrives either as JSON (see ParametricCurve.to_dict for the schema)
or as shorthand such as "x=(3t^2)/(1+t^3); y=(3t)/(1+t^3)". Shorthand is
parsed with sympy; coefficient letters other than t switch the curve into
supports-only mode, where only the exponents matter.
"""
from __future__ import annotations

import json
import logging
from fractions import Fraction
from math import gcd
from typing import Dict, Optional, Tuple

import sympy
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication_application,
    parse_expr,
    standard_transformations,
)

from newton_implicit.core.errors import (
    CurveParseError,
    DegreeSubstitutionDetected,
    EmptyAfterReduction,
    SelectionInvariantError,
    UnclassifiableConfiguration,
)
from newton_implicit.core.models import (
    CaseTag,
    Classification,
    Coefficients,
    CurveClass,
    ONE,
    DiffDenomData,
    ParametricCurve,
    SameDenomData,
    Selection,
    SelectionKind,
    support_of,
)

logger = logging.getLogger(__name__)

T = sympy.Symbol("t")
_TRANSFORMATIONS = standard_transformations + (implicit_multiplication_application, convert_xor)


# -- parsing -------------------------------------------------------------

def parse_curve(text: str) -> ParametricCurve:
    text = (text or "").strip()
    if not text:
        raise CurveParseError("empty curve description")
    if text.startswith("{"):
        return _parse_json(text)
    return _parse_shorthand(text)


def _parse_json(text: str) -> ParametricCurve:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise CurveParseError(f"invalid JSON: {e}") from e
    try:
        curve = ParametricCurve.from_dict(data)
    except (KeyError, ValueError, TypeError, ZeroDivisionError, AttributeError) as e:
        raise CurveParseError(f"malformed curve document: {e!r}") from e

    curve = _drop_zero_terms(curve)
    for name, poly in (("x numerator", curve.p0), ("y numerator", curve.p1),
                       ("x denominator", curve.q0), ("y denominator", curve.q1)):
        if poly is not None and not poly:
            raise CurveParseError(f"{name} is the zero polynomial")

    has_den = (curve.q0 is not None, curve.q1 is not None)
    if curve.curve_class is CurveClass.POLYNOMIAL and any(has_den):
        raise CurveParseError("a polynomial curve cannot have denominators")
    if curve.curve_class is CurveClass.SAME_DENOMINATOR and curve.q0 != curve.q1:
        raise CurveParseError("same_denominator curve with two different denominators")
    return curve


def _drop_zero_terms(curve: ParametricCurve) -> ParametricCurve:
    def clean(poly):
        return None if poly is None else {e: c for e, c in poly.items() if c != 0}

    return ParametricCurve(curve.curve_class, clean(curve.p0), clean(curve.p1),
                           clean(curve.q0), clean(curve.q1), curve.supports_only)


def _parse_shorthand(text: str) -> ParametricCurve:
    sides: Dict[str, str] = {}
    for part in text.replace("\n", ";").split(";"):
        part = part.strip()
        if not part:
            continue
        name, sep, body = part.partition("=")
        name = name.strip().lower()
        if not sep or name not in ("x", "y") or not body.strip():
            raise CurveParseError(f"expected 'x=...' or 'y=...', got {part!r}")
        if name in sides:
            raise CurveParseError(f"{name} is given twice")
        sides[name] = body.strip()
    if set(sides) != {"x", "y"}:
        raise CurveParseError("both x=... and y=... are required")

    symbolic = False
    parts = {}
    for name in ("x", "y"):
        num_expr, den_expr = _split_fraction(sides[name])
        num, sym_n = _coefficients(num_expr, f"{name} numerator")
        den, sym_d = (None, False) if den_expr is None else _coefficients(den_expr, f"{name} denominator")
        if den is not None and support_of(den) == (0,) and not sym_d:
            # a rational literal such as t/2 + 1 arrives as (t + 2)/2
            num = {e: c / den[0] for e, c in num.items()}
            den, den_expr = None, None
        symbolic = symbolic or sym_n or sym_d
        parts[name] = (num, den, den_expr)

    (p0, q0, den_x), (p1, q1, den_y) = parts["x"], parts["y"]
    if q0 is None and q1 is None:
        curve_class = CurveClass.POLYNOMIAL
    elif den_x is not None and den_y is not None and sympy.expand(den_x - den_y) == 0:
        curve_class = CurveClass.SAME_DENOMINATOR
        q1 = q0
    else:
        curve_class = CurveClass.DIFFERENT_DENOMINATORS
    curve = ParametricCurve(curve_class, p0, p1, q0, q1, supports_only=symbolic)
    logger.debug("Parsed %r as %s", text, curve.curve_class.value)
    return curve


def _split_fraction(body: str) -> Tuple[sympy.Expr, Optional[sympy.Expr]]:
    try:
        expr = parse_expr(body, local_dict={"t": T}, transformations=_TRANSFORMATIONS)
    except Exception as e:  # sympy raises a zoo of exception types on bad syntax
        raise CurveParseError(f"cannot parse {body!r}: {e}") from e
    if not isinstance(expr, sympy.Expr):
        raise CurveParseError(f"{body!r} is not an expression in t")
    num, den = sympy.fraction(sympy.together(expr))
    if den == 1:
        return num, None
    return num, den


def _coefficients(expr: sympy.Expr, what: str) -> Tuple[Coefficients, bool]:
    """Laurent coefficients of expr in t, plus whether symbolic letters occurred."""
    expanded = sympy.expand(expr)
    if expanded == 0:
        raise CurveParseError(f"{what} is the zero polynomial")
    coeffs: Dict[int, Fraction] = {}
    symbolic = False
    for term in sympy.Add.make_args(expanded):
        coeff, exp = term.as_coeff_exponent(T)
        if not exp.is_Integer or coeff.has(T):
            raise CurveParseError(f"{what}: {term} is not a monomial in t")
        if coeff.free_symbols:
            symbolic = True
            value = Fraction(1)
        elif coeff.is_Rational:
            value = Fraction(int(coeff.p), int(coeff.q))
        else:
            raise CurveParseError(f"{what}: coefficient {coeff} is not a rational literal")
        e = int(exp)
        coeffs[e] = coeffs.get(e, Fraction(0)) + value
    coeffs = {e: c for e, c in coeffs.items() if c != 0}
    if not coeffs:
        raise CurveParseError(f"{what} is the zero polynomial")
    return coeffs, symbolic


def to_json(curve: ParametricCurve) -> str:
    return json.dumps(curve.to_dict(), sort_keys=True)


def transpose(curve: ParametricCurve) -> ParametricCurve:
    """Swaps the roles of x and y."""
    return ParametricCurve(curve.curve_class, curve.p1, curve.p0, curve.q1, curve.q0,
                           curve.supports_only)


# -- normalization -------------------------------------------------------

def _shift(poly: Optional[Coefficients], by: int) -> Optional[Coefficients]:
    if poly is None:
        return None
    return {e - by: c for e, c in poly.items()}


def _to_poly(coeffs: Coefficients) -> sympy.Poly:
    expr = sum(sympy.Rational(c.numerator, c.denominator) * T ** e for e, c in coeffs.items())
    return sympy.Poly(expr, T, domain="QQ")


def _from_poly(poly: sympy.Poly) -> Coefficients:
    return {m[0]: Fraction(int(c.p), int(c.q)) for m, c in poly.as_dict().items() if c != 0}


def _reduce(p: Coefficients, q: Coefficients) -> Tuple[Coefficients, Coefficients, bool]:
    """Divides out gcd(P, Q); returns the reduced pair and whether anything changed."""
    pp, qq = _to_poly(p), _to_poly(q)
    g = sympy.gcd(pp, qq)
    if g.degree() <= 0:
        return p, q, False
    logger.debug("Dividing out common factor %s", g.as_expr())
    return _from_poly(pp.exquo(g)), _from_poly(qq.exquo(g)), True


def _laurent_shift(curve: ParametricCurve) -> ParametricCurve:
    c = curve
    if c.curve_class is CurveClass.POLYNOMIAL:
        low = [min(support_of(p)) for p in (c.p0, c.p1)]
        if min(low) >= 0:
            return c
        # negative powers of t act as monomial denominators
        q0 = dict(ONE) if low[0] < 0 else None
        q1 = dict(ONE) if low[1] < 0 else None
        same = low[0] == low[1]
        c = ParametricCurve(CurveClass.SAME_DENOMINATOR if same else CurveClass.DIFFERENT_DENOMINATORS,
                            c.p0, c.p1, q0, q1, c.supports_only)

    if c.curve_class is CurveClass.SAME_DENOMINATOR:
        m = min(min(support_of(p)) for p in (c.p0, c.p1, c.q))
        q = _shift(c.q, m)
        return ParametricCurve(c.curve_class, _shift(c.p0, m), _shift(c.p1, m), q, q, c.supports_only)

    shifted = []
    for i in (0, 1):
        num, den = c.numerator(i), c.denominator(i)
        m = min(min(support_of(num)), min(support_of(den)))
        shifted.append((_shift(num, m), _shift(den, m)))
    return ParametricCurve(c.curve_class, shifted[0][0], shifted[1][0], shifted[0][1], shifted[1][1],
                           c.supports_only)


def _is_constant(poly: Coefficients) -> bool:
    return support_of(poly) == (0,)


def normalize(curve: ParametricCurve) -> ParametricCurve:
    c = _laurent_shift(curve)

    if not c.supports_only:
        if c.curve_class is CurveClass.SAME_DENOMINATOR:
            r0 = _reduce(c.p0, c.q)
            r1 = _reduce(c.p1, c.q)
            if r0[2] or r1[2]:
                logger.info("Shared denominator has a common factor with a numerator; "
                            "treating the curve as having different denominators")
                c = _laurent_shift(ParametricCurve(CurveClass.DIFFERENT_DENOMINATORS,
                                                   r0[0], r1[0], r0[1], r1[1]))
        elif c.curve_class is CurveClass.DIFFERENT_DENOMINATORS:
            r0 = _reduce(c.p0, c.denominator(0))
            r1 = _reduce(c.p1, c.denominator(1))
            if r0[2] or r1[2]:
                c = _laurent_shift(ParametricCurve(c.curve_class, r0[0], r1[0], r0[1], r1[1]))

    for i in (0, 1):
        if _is_constant(c.numerator(i)) and _is_constant(c.denominator(i)):
            raise EmptyAfterReduction(f"{'xy'[i]} is constant after reduction")

    if c.curve_class is CurveClass.SAME_DENOMINATOR and _is_constant(c.q):
        k = c.q[0]
        c = ParametricCurve(CurveClass.POLYNOMIAL, {e: v / k for e, v in c.p0.items()},
                            {e: v / k for e, v in c.p1.items()}, supports_only=c.supports_only)
    elif (c.curve_class is CurveClass.DIFFERENT_DENOMINATORS
          and _is_constant(c.denominator(0)) and _is_constant(c.denominator(1))):
        k0, k1 = c.denominator(0)[0], c.denominator(1)[0]
        c = ParametricCurve(CurveClass.POLYNOMIAL, {e: v / k0 for e, v in c.p0.items()},
                            {e: v / k1 for e, v in c.p1.items()}, supports_only=c.supports_only)

    exps = c.all_exponents()
    step = 0
    for e in exps:
        step = gcd(step, e - exps[0])
    if step > 1:
        raise DegreeSubstitutionDetected(step)
    return c


# -- same denominator ----------------------------------------------------

def same_denom_data(b0, b1, b2) -> SameDenomData:
    """Builds classified data straight from three supports."""
    supports = (tuple(sorted(set(b0))), tuple(sorted(set(b1))), tuple(sorted(set(b2))))
    data = SameDenomData(supports=supports, u=max(s[-1] for s in supports))
    return SameDenomData(data.supports, data.u, classify_same_denom(data))


def derive_same_denom(curve: ParametricCurve) -> SameDenomData:
    if curve.curve_class is not CurveClass.SAME_DENOMINATOR:
        raise UnclassifiableConfiguration(f"expected a same-denominator curve, got {curve.curve_class.value}")
    return same_denom_data(support_of(curve.p0), support_of(curve.p1), support_of(curve.q))


def classify_same_denom(data: SameDenomData) -> Classification:
    u = data.u
    L = [data.left(i) for i in range(3)]
    R = [data.right(i) for i in range(3)]
    if min(L) != 0:
        raise UnclassifiableConfiguration(f"supports {data.supports} are not shifted to start at 0")

    full = [k for k in range(3) if L[k] == 0 and R[k] == u]
    if full:
        pairs = [(0, 1), (0, 2), (1, 2)]
        if all(min(L[a], L[b]) == 0 and max(R[a], R[b]) == u for a, b in pairs):
            return Classification(CaseTag.ONE_A, (0, 1, 2))
        k = full[0]
        i, j = [x for x in range(3) if x != k]
        if L[i] * (u - R[j]) < L[j] * (u - R[i]):
            i, j = j, i
        logger.debug("Case 2A with roles i=%d j=%d k=%d", i, j, k)
        return Classification(CaseTag.TWO_A, (i, j, k))

    reaching = [k for k in range(3) if R[k] == u]
    if len(reaching) == 2:
        inner = classify_same_denom(data.reversed())
        return Classification(inner.case, inner.roles, reversed=True)
    if len(reaching) != 1:
        raise UnclassifiableConfiguration(f"no case matches supports {data.supports}")

    i = reaching[0]
    j, k = [x for x in range(3) if x != i]
    if L[j] == 0 and L[k] == 0:
        if R[k] < R[j]:
            j, k = k, j
        return Classification(CaseTag.TWO_B, (i, j, k))
    if L[k] == 0:
        j, k = k, j
    if L[j] != 0 or L[i] <= 0:
        raise UnclassifiableConfiguration(f"no case matches supports {data.supports}")
    return Classification(CaseTag.THREE_B, (i, j, k))


# -- different denominators ----------------------------------------------

def as_different_denominators(curve: ParametricCurve) -> ParametricCurve:
    """Re-encodes any curve as x = P0/Q0, y = P1/Q1 (Q_i = 1 for polynomials)."""
    return ParametricCurve(CurveClass.DIFFERENT_DENOMINATORS, curve.p0, curve.p1,
                           dict(curve.denominator(0)), dict(curve.denominator(1)),
                           curve.supports_only)


def make_selection(curve: ParametricCurve, kind: SelectionKind) -> Selection:
    supports = []
    selected = []
    for i in (0, 1):
        num, den = set(support_of(curve.numerator(i))), set(support_of(curve.denominator(i)))
        supports.append(tuple(sorted(num | den)))
        selected.append(frozenset(den if kind is SelectionKind.SELECTION1 else den - num))

    selection = Selection(kind, supports[0], supports[1], selected[0], selected[1])
    for side in (0, 1):
        if kind is SelectionKind.SELECTION1 and not selection.selected(side):
            raise SelectionInvariantError(f"Selection1 selects nothing in A{side}")
        if kind is SelectionKind.SELECTION2 and not selection.unselected(side):
            raise SelectionInvariantError(f"{kind.name} leaves no unselected point in A{side}")
    return selection


def derive_diff_denom(curve: ParametricCurve) -> DiffDenomData:
    s1 = make_selection(curve, SelectionKind.SELECTION1)
    s2 = make_selection(curve, SelectionKind.SELECTION2)
    return DiffDenomData(a0=s1.support0, a1=s1.support1, selection1=s1, selection2=s2)
