"""Newton polygons of implicit equations of parametric plane curves."""

__version__ = "1.0.0"
