"""Exception hierarchy shared by the library and the CLI.

Each family carries the process exit code the CLI reports for it, so
main.py can translate any library failure without a lookup table.
"""
from __future__ import annotations


class NewtonImplicitError(Exception):
    exit_code = 1


# -- input ---------------------------------------------------------------

class CurveParseError(NewtonImplicitError):
    exit_code = 2


class DegreeSubstitutionDetected(CurveParseError):
    """All exponents share a factor a > 1, i.e. the input is a curve in t^a."""

    def __init__(self, factor: int):
        super().__init__(f"every exponent difference is divisible by {factor}; "
                         f"substitute s = t^{factor} first")
        self.factor = factor


class EmptyAfterReduction(CurveParseError):
    """A coordinate function became constant once common factors were divided out."""


# -- classification ------------------------------------------------------

class ClassificationError(NewtonImplicitError):
    exit_code = 3


class UnclassifiableConfiguration(ClassificationError):
    pass


# -- violated invariants (a prediction rule or this code is wrong) -------

class InvariantViolation(NewtonImplicitError):
    exit_code = 4


class SelectionInvariantError(InvariantViolation):
    pass


class InconsistentChains(InvariantViolation):
    pass


class ChainMismatch(InvariantViolation):
    """Closed-form corners and exhaustive enumeration disagree."""

    def __init__(self, fast, enumerated):
        super().__init__(f"closed-form polygon {list(fast.vertices)} != "
                         f"enumerated polygon {list(enumerated.vertices)}")
        self.fast = fast
        self.enumerated = enumerated


class DegreeInvariantViolated(InvariantViolation):
    pass


class ContainmentViolated(InvariantViolation):
    pass


# -- oracle --------------------------------------------------------------

class OracleError(NewtonImplicitError):
    exit_code = 5


class KernelDimensionNotOne(OracleError):
    def __init__(self, dimension: int):
        hint = "candidate support too small" if dimension == 0 else "degenerate sampling"
        super().__init__(f"interpolation kernel has dimension {dimension} ({hint})")
        self.dimension = dimension


class HeldOutCheckFailed(OracleError):
    pass


class ZeroResultant(OracleError):
    pass


class FactorSelectionAmbiguous(OracleError):
    pass


class ResamplingExhausted(OracleError):
    pass


# -- enumeration ---------------------------------------------------------

class CapExceeded(NewtonImplicitError):
    exit_code = 6

    def __init__(self, count: int, cap: int):
        super().__init__(f"enumeration would generate {count} certificates "
                         f"(support sizes exceed the cap of {cap}); pass --force to run anyway")
        self.count = count
        self.cap = cap


class NonGenericLifting(NewtonImplicitError):
    """The lifting induces a subdivision that is not tight; perturb and retry."""
