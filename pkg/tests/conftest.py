import json
import os
import sys
from fractions import Fraction

import pytest

# Make `newton_implicit` importable without an editable install.
SRC_ROOT = os.path.join(os.path.dirname(__file__), "..", "src")
sys.path.insert(0, os.path.abspath(SRC_ROOT))

from newton_implicit.core.logging_setup import reset_logging_for_tests  # noqa: E402
from newton_implicit.core.models import CurveClass, ParametricCurve  # noqa: E402

FOLIUM = "x=(3t^2)/(1+t^3); y=(3t)/(1+t^3)"
CIRCLE = "x=2t/(1+t^2); y=(1-t^2)/(1+t^2)"
# pentagon (0,3), (3,1), (6,0), (7,0), (0,7)
FIVE_VERTEX = "x=(t^6+2t^2)/(t^7+1); y=(t^4-t^3)/(t^7+1)"
# the t^2 coefficient flipped: gcd with the denominator is t + 1
FIVE_VERTEX_FLIPPED = "x=(t^6-t^2)/(t^7+1); y=(t^4-t^3)/(t^7+1)"
RATIONAL_SAME = "x=(2t^3+t+1)/(t^2+1); y=(t^4+t^3-1)/(t^2+1)"
HEXAGON_DIFF = "x=(t^3+2t^2+t)/(t^2+3t-2); y=(t^3-t^2)/(t-2)"
LAURENT = "x=(a+t^2)/(c t); y=b/(d t)"
LAURENT_CONCRETE = "x=(1+t^2)/t; y=1/t"
POLY_CUBIC_QUARTIC = "x=2t^3-t+1; y=t^4-2t^2+3"
# generic example with one corner per side of the box cut
DIFF_SUPPORTS = ("x=(a t^7+b t^4+c t^3+d t^2)/(f t^3+g); "
                 "y=(h t^5+k t^4+m t)/(w t^5+z t^2+v)")


def supports_only_curve(curve_class, p0, p1, q0=None, q1=None):
    """A curve given by its supports alone, all coefficients 1."""
    def ones(support):
        return None if support is None else {e: Fraction(1) for e in support}

    return ParametricCurve(curve_class, ones(p0), ones(p1), ones(q0), ones(q1), supports_only=True)


@pytest.fixture
def diff_supports_curve():
    """x = (t^7 + t^4 + t^3 + t^2)/(t^3 + 1), y = (t^5 + t^4 + t)/(t^5 + t^2 + 1)
    by supports; with all-one coefficients P0 and Q0 would share t + 1."""
    return supports_only_curve(CurveClass.DIFFERENT_DENOMINATORS,
                               (2, 3, 4, 7), (1, 4, 5), (0, 3), (0, 2, 5))


@pytest.fixture(autouse=True)
def _reset_logging():
    reset_logging_for_tests()
    yield
    reset_logging_for_tests()


@pytest.fixture
def cli_env(tmp_path):
    """Arguments every CLI test passes so nothing touches the user's data
    directory: a private log dir and a small settings file."""
    settings = tmp_path / "settings.json"
    settings.write_text(json.dumps({
        "seed": 0,
        "trials": 4,
        "lifting_grid": [0, 0],
        "random_lift_range": 1000,
    }), encoding="utf-8")
    return ["--log-dir", str(tmp_path / "logs"), "--settings", str(settings)]
