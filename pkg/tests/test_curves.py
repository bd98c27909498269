import json
from fractions import Fraction

import pytest

from conftest import (
    CIRCLE,
    HEXAGON_DIFF,
    DIFF_SUPPORTS,
    FIVE_VERTEX,
    FIVE_VERTEX_FLIPPED,
    FOLIUM,
    LAURENT,
    LAURENT_CONCRETE,
    POLY_CUBIC_QUARTIC,
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
    CurveClass,
    ParametricCurve,
    SameDenomData,
    SelectionKind,
)
from newton_implicit.curves import (
    as_different_denominators,
    classify_same_denom,
    derive_diff_denom,
    derive_same_denom,
    make_selection,
    normalize,
    parse_curve,
    same_denom_data,
    to_json,
    transpose,
)
from newton_implicit.utils.format import format_selection

F = Fraction


# -- parsing -------------------------------------------------------------

def test_parse_folium_shorthand():
    curve = parse_curve(FOLIUM)
    assert curve.curve_class is CurveClass.SAME_DENOMINATOR
    assert curve.p0 == {2: F(3)}
    assert curve.p1 == {1: F(3)}
    assert curve.q == {0: F(1), 3: F(1)}
    assert not curve.supports_only


def test_parse_polynomial_shorthand():
    curve = parse_curve(POLY_CUBIC_QUARTIC)
    assert curve.curve_class is CurveClass.POLYNOMIAL
    assert curve.p0 == {3: F(2), 1: F(-1), 0: F(1)}
    assert curve.p1 == {4: F(1), 2: F(-2), 0: F(3)}
    assert curve.q0 is None and curve.q1 is None


def test_parse_different_denominators():
    curve = parse_curve(HEXAGON_DIFF)
    assert curve.curve_class is CurveClass.DIFFERENT_DENOMINATORS
    assert curve.supports() == ((1, 2, 3), (2, 3), (0, 1, 2), (0, 1))


def test_parse_rational_coefficients():
    curve = parse_curve("x=t/2+1; y=3t^2/4")
    assert curve.p0 == {1: F(1, 2), 0: F(1)}
    assert curve.p1 == {2: F(3, 4)}


def test_symbolic_coefficients_switch_to_supports_only():
    curve = parse_curve(LAURENT)
    assert curve.supports_only
    assert curve.curve_class is CurveClass.DIFFERENT_DENOMINATORS
    assert curve.supports() == ((0, 2), (0,), (1,), (1,))


def test_symbolic_shared_denominator_is_recognized():
    curve = parse_curve("x=(a t^2)/(b+c t^3); y=(f t)/(b+c t^3)")
    assert curve.supports_only
    assert curve.curve_class is CurveClass.SAME_DENOMINATOR


@pytest.mark.parametrize("text", [
    "",
    "x=t",
    "x=t; x=t^2",
    "x=t; y=t; z=t",
    "x=sqrt(t); y=t",
    "x=t; y=0",
    "x=t+; y=t",
    "x=1.5t; y=t",
    "x=t; y=exp(t)",
])
def test_parse_rejects_bad_shorthand(text):
    with pytest.raises(CurveParseError):
        parse_curve(text)


def test_parse_json_document():
    doc = {"class": "same_denominator",
           "x": {"num": {"2": "3"}, "den": {"0": "1", "3": "1"}},
           "y": {"num": {"1": "3"}, "den": {"0": "1", "3": "1"}}}
    assert parse_curve(json.dumps(doc)) == parse_curve(FOLIUM)


def test_json_round_trip_is_lossless():
    for text in (FOLIUM, HEXAGON_DIFF, POLY_CUBIC_QUARTIC, LAURENT, "x=t/3-2; y=5t^2/7"):
        curve = parse_curve(text)
        assert parse_curve(to_json(curve)) == curve


@pytest.mark.parametrize("doc", [
    "{not json",
    json.dumps({"class": "polynomial", "x": {"num": {"1": "1"}}}),
    json.dumps({"class": "cubic", "x": {"num": {"1": "1"}}, "y": {"num": {"1": "1"}}}),
    json.dumps({"class": "polynomial", "x": {"num": {"1": "1"}, "den": {"0": "2"}},
                "y": {"num": {"1": "1"}}}),
    json.dumps({"class": "same_denominator",
                "x": {"num": {"1": "1"}, "den": {"0": "1", "2": "1"}},
                "y": {"num": {"0": "1"}, "den": {"0": "1", "1": "1"}}}),
    json.dumps({"class": "polynomial", "x": {"num": {"1": "0"}}, "y": {"num": {"1": "1"}}}),
    json.dumps({"class": "polynomial", "x": {"num": {"1": "abc"}}, "y": {"num": {"1": "1"}}}),
])
def test_parse_rejects_malformed_json(doc):
    with pytest.raises(CurveParseError):
        parse_curve(doc)


def test_transpose_swaps_coordinates():
    curve = parse_curve(HEXAGON_DIFF)
    flipped = transpose(curve)
    assert flipped.p0 == curve.p1 and flipped.q0 == curve.q1
    assert transpose(flipped) == curve


# -- normalization -------------------------------------------------------

def test_normalize_keeps_already_normal_curves():
    for text in (FOLIUM, FIVE_VERTEX, HEXAGON_DIFF, POLY_CUBIC_QUARTIC, LAURENT_CONCRETE):
        curve = parse_curve(text)
        assert normalize(curve) == curve


def test_normalize_is_idempotent():
    for text in (FOLIUM, FIVE_VERTEX_FLIPPED, HEXAGON_DIFF, "x=t^-1+t; y=t^2"):
        once = normalize(parse_curve(text))
        assert normalize(once) == once


def test_laurent_example_shifts_to_nonnegative_supports():
    curve = normalize(parse_curve(LAURENT_CONCRETE))
    assert curve.supports() == ((0, 2), (0,), (1,), (1,))


def test_negative_powers_become_denominators():
    curve = normalize(parse_curve("x=t^-1+t; y=t^2"))
    assert curve.curve_class is CurveClass.DIFFERENT_DENOMINATORS
    assert curve.supports() == ((0, 2), (2,), (1,), (0,))


def test_shared_negative_powers_become_a_shared_denominator():
    curve = normalize(parse_curve("x=t^-2+t; y=t^-2+3"))
    assert curve.curve_class is CurveClass.SAME_DENOMINATOR
    assert curve.supports() == ((0, 3), (0, 2), (2,), (2,))


def test_common_factor_of_shared_denominator_reroutes():
    doc = {"class": "same_denominator",
           "x": {"num": {"1": "1", "2": "1"}, "den": {"0": "1", "1": "1"}},
           "y": {"num": {"0": "1"}, "den": {"0": "1", "1": "1"}}}
    curve = normalize(parse_curve(json.dumps(doc)))
    assert curve.curve_class is CurveClass.DIFFERENT_DENOMINATORS
    assert curve.p0 == {1: F(1)}
    assert curve.q1 == {0: F(1), 1: F(1)}


def test_five_vertex_flipped_shares_a_factor_with_its_denominator():
    curve = normalize(parse_curve(FIVE_VERTEX_FLIPPED))
    assert curve.curve_class is CurveClass.DIFFERENT_DENOMINATORS


def test_common_factor_divided_out_of_different_denominators():
    doc = {"class": "different_denominators",
           "x": {"num": {"1": "1", "2": "1"}, "den": {"0": "2", "1": "3", "2": "1"}},
           "y": {"num": {"1": "1"}}}
    curve = normalize(parse_curve(json.dumps(doc)))
    assert curve.p0 == {1: F(1)}
    assert curve.q0 == {0: F(2), 1: F(1)}


def test_gcd_is_not_attempted_in_supports_only_mode():
    curve = normalize(parse_curve("x=(a t+b t^2)/(c+d t); y=f t"))
    assert curve.supports() == ((1, 2), (1,), (0, 1), (0,))


def test_constant_shared_denominator_becomes_polynomial():
    doc = {"class": "same_denominator",
           "x": {"num": {"1": "2", "3": "4"}, "den": {"0": "2"}},
           "y": {"num": {"2": "6"}, "den": {"0": "2"}}}
    curve = normalize(parse_curve(json.dumps(doc)))
    assert curve.curve_class is CurveClass.POLYNOMIAL
    assert curve.p0 == {1: F(1), 3: F(2)}
    assert curve.p1 == {2: F(3)}


def test_degree_substitution_is_rejected():
    with pytest.raises(DegreeSubstitutionDetected) as excinfo:
        normalize(parse_curve("x=t^2; y=t^4"))
    assert excinfo.value.factor == 2


def test_degree_substitution_looks_at_denominators_too():
    with pytest.raises(DegreeSubstitutionDetected) as excinfo:
        normalize(parse_curve("x=t^3/(1+t^6); y=(2+t^3)/(1+t^6)"))
    assert excinfo.value.factor == 3


def test_constant_coordinate_is_rejected():
    with pytest.raises(EmptyAfterReduction):
        normalize(parse_curve("x=(1+t)/(1+t); y=t"))


# -- same-denominator classification -------------------------------------

def test_derive_folium_segments():
    data = derive_same_denom(parse_curve(FOLIUM))
    assert data.supports == ((2,), (1,), (0, 3))
    assert data.u == 3


def test_derive_five_vertex_segments():
    data = derive_same_denom(parse_curve(FIVE_VERTEX))
    assert data.supports == ((2, 6), (3, 4), (0, 7))
    assert data.u == 7


def test_derive_same_denom_rejects_other_classes():
    with pytest.raises(UnclassifiableConfiguration):
        derive_same_denom(parse_curve(HEXAGON_DIFF))


@pytest.mark.parametrize("supports,case,roles,reversed_", [
    # the folium: B2 spans [0, u]
    (((2,), (1,), (0, 3)), CaseTag.TWO_A, (0, 1, 2), False),
    (((2, 6), (3, 4), (0, 7)), CaseTag.TWO_A, (0, 1, 2), False),
    (((0, 1, 3), (0, 3, 4), (0, 2)), CaseTag.TWO_A, (0, 2, 1), False),
    # the circle
    (((1,), (0, 2), (0, 2)), CaseTag.ONE_A, (0, 1, 2), False),
    (((0, 2), (0,), (1,)), CaseTag.TWO_A, (2, 1, 0), False),
    (((1, 4), (0, 2), (0, 3)), CaseTag.TWO_B, (0, 1, 2), False),
    (((1, 4), (0, 2), (1, 3)), CaseTag.THREE_B, (0, 1, 2), False),
    (((1, 4), (2, 4), (0, 3)), CaseTag.TWO_B, (2, 1, 0), True),
])
def test_classify_same_denom(supports, case, roles, reversed_):
    data = same_denom_data(*supports)
    assert data.classification.case is case
    assert data.classification.roles == roles
    assert data.classification.reversed is reversed_


def test_classify_requires_a_support_at_zero():
    data = SameDenomData(supports=((1, 2), (1, 3), (2, 3)), u=3)
    with pytest.raises(UnclassifiableConfiguration):
        classify_same_denom(data)


def test_reversed_data_maps_exponents():
    data = SameDenomData(supports=((1, 4), (2, 4), (0, 3)), u=4)
    assert data.reversed().supports == ((0, 3), (0, 2), (1, 4))


# -- selections ----------------------------------------------------------

def test_selections_of_the_box_example():
    curve = normalize(parse_curve(DIFF_SUPPORTS))
    s1 = make_selection(curve, SelectionKind.SELECTION1)
    s2 = make_selection(curve, SelectionKind.SELECTION2)
    assert s1.support0 == (0, 2, 3, 4, 7)
    assert s1.support1 == (0, 1, 2, 4, 5)
    assert s1.selected0 == frozenset({0, 3})
    assert s1.selected1 == frozenset({0, 2, 5})
    assert s2.selected0 == frozenset({0})
    assert s2.selected1 == frozenset({0, 2})
    assert format_selection(s1.marked(0)) == "{0⁺, 2, 3⁺, 4, 7}"


def test_selections_of_the_circle():
    data = derive_diff_denom(as_different_denominators(normalize(parse_curve(CIRCLE))))
    assert data.a0 == (0, 1, 2)
    assert data.a1 == (0, 2)
    assert data.selection1.selected0 == frozenset({0, 2})
    assert data.selection1.selected1 == frozenset({0, 2})
    assert data.selection2.selected0 == frozenset({0, 2})
    assert data.selection2.selected1 == frozenset()


def test_selection_helpers():
    curve = normalize(parse_curve(DIFF_SUPPORTS))
    s2 = make_selection(curve, SelectionKind.SELECTION2)
    assert s2.unselected(0) == (2, 3, 4, 7)
    assert s2.leftmost_selected(1) == 0
    assert s2.rightmost_selected(1) == 2
    assert s2.leftmost_unselected(1) == 1
    assert s2.rightmost_unselected(1) == 5
    assert s2.is_selected(0, 0) == 1 and s2.is_selected(0, 7) == 0


def test_selection2_of_a_laurent_coordinate():
    # x = 1/t: the only denominator point is absent from the numerator
    curve = ParametricCurve(CurveClass.DIFFERENT_DENOMINATORS,
                            {0: F(1)}, {1: F(1)}, {1: F(1)}, {0: F(1)})
    s2 = make_selection(curve, SelectionKind.SELECTION2)
    assert s2.selected0 == frozenset({1})
    assert s2.unselected(0) == (0,)
    assert s2.selected1 == frozenset({0})


def test_selection1_rejects_an_empty_denominator():
    curve = ParametricCurve(CurveClass.DIFFERENT_DENOMINATORS,
                            {0: F(1)}, {1: F(1)}, {}, {0: F(1)})
    with pytest.raises(SelectionInvariantError):
        make_selection(curve, SelectionKind.SELECTION1)
