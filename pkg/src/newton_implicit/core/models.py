"""Shared data types for curves, supports and selections."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, auto
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Tuple

Coefficients = Dict[int, Fraction]
Support = Tuple[int, ...]

ONE: Coefficients = {0: Fraction(1)}


class CurveClass(Enum):
    POLYNOMIAL = "polynomial"
    SAME_DENOMINATOR = "same_denominator"
    DIFFERENT_DENOMINATORS = "different_denominators"


def support_of(poly: Optional[Coefficients]) -> Support:
    """Sorted exponents of the nonzero terms; an absent denominator is 1."""
    if poly is None:
        return (0,)
    return tuple(sorted(e for e, c in poly.items() if c != 0))


def format_coefficient(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True)
class ParametricCurve:
    """x = P0/Q0, y = P1/Q1. Polynomial curves have no denominators and a
    same-denominator curve stores its shared Q in both slots."""
    curve_class: CurveClass
    p0: Coefficients
    p1: Coefficients
    q0: Optional[Coefficients] = None
    q1: Optional[Coefficients] = None
    supports_only: bool = False

    def numerator(self, i: int) -> Coefficients:
        return self.p0 if i == 0 else self.p1

    def denominator(self, i: int) -> Coefficients:
        q = self.q0 if i == 0 else self.q1
        return ONE if q is None else q

    @property
    def q(self) -> Coefficients:
        """The shared denominator (1 for polynomial curves)."""
        return self.denominator(0)

    def supports(self) -> Tuple[Support, Support, Support, Support]:
        return (support_of(self.p0), support_of(self.p1),
                support_of(self.denominator(0)), support_of(self.denominator(1)))

    def all_exponents(self) -> List[int]:
        exps = set()
        for s in self.supports():
            exps.update(s)
        return sorted(exps)

    def to_dict(self) -> dict:
        def side(num, den):
            entry = {"num": {str(e): format_coefficient(c) for e, c in sorted(num.items())}}
            if den is not None:
                entry["den"] = {str(e): format_coefficient(c) for e, c in sorted(den.items())}
            return entry

        data = {
            "class": self.curve_class.value,
            "x": side(self.p0, self.q0),
            "y": side(self.p1, self.q1),
        }
        if self.supports_only:
            data["supports_only"] = True
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "ParametricCurve":
        def coefficients(raw):
            if raw is None:
                return None
            return {int(e): Fraction(str(c)) for e, c in raw.items()}

        x, y = data["x"], data["y"]
        return cls(
            curve_class=CurveClass(data["class"]),
            p0=coefficients(x["num"]),
            p1=coefficients(y["num"]),
            q0=coefficients(x.get("den")),
            q1=coefficients(y.get("den")),
            supports_only=bool(data.get("supports_only", False)),
        )


class CaseTag(Enum):
    ONE_A = "1A"
    TWO_A = "2A"
    TWO_B = "2B"
    THREE_B = "3B"


@dataclass(frozen=True)
class Classification:
    case: CaseTag
    roles: Tuple[int, int, int]
    # case B with two supports reaching u is classified on the reversed
    # exponents b -> u - b (the substitution t -> 1/t)
    reversed: bool = False

    def to_dict(self) -> dict:
        return {"case": self.case.value, "roles": list(self.roles), "reversed": self.reversed}


@dataclass(frozen=True)
class SameDenomData:
    """Segments B0 = supp(P0), B1 = supp(P1), B2 = supp(Q) of the auxiliary
    system x_i r - P_i(t), i = 0, 1, and x_2 r - Q(t)."""
    supports: Tuple[Support, Support, Support]
    u: int
    classification: Optional[Classification] = None

    def left(self, i: int) -> int:
        return self.supports[i][0]

    def right(self, i: int) -> int:
        return self.supports[i][-1]

    def reversed(self) -> "SameDenomData":
        flipped = tuple(tuple(sorted(self.u - b for b in s)) for s in self.supports)
        return SameDenomData(supports=flipped, u=self.u)


class SelectionKind(Enum):
    SELECTION1 = auto()
    SELECTION2 = auto()


@dataclass(frozen=True)
class Selection:
    """Marks the support points of f0 = x Q0 - P0 and f1 = y Q1 - P1 whose
    coefficient involves x (resp. y)."""
    kind: SelectionKind
    support0: Support
    support1: Support
    selected0: FrozenSet[int]
    selected1: FrozenSet[int]

    def support(self, side: int) -> Support:
        return self.support0 if side == 0 else self.support1

    def selected(self, side: int) -> FrozenSet[int]:
        return self.selected0 if side == 0 else self.selected1

    def is_selected(self, side: int, exponent: int) -> int:
        """The indicator function: 1 if the point is selected, else 0."""
        return int(exponent in self.selected(side))

    def unselected(self, side: int) -> Tuple[int, ...]:
        return tuple(a for a in self.support(side) if a not in self.selected(side))

    def leftmost_selected(self, side: int) -> Optional[int]:
        return min(self.selected(side), default=None)

    def rightmost_selected(self, side: int) -> Optional[int]:
        return max(self.selected(side), default=None)

    def leftmost_unselected(self, side: int) -> Optional[int]:
        return min(self.unselected(side), default=None)

    def rightmost_unselected(self, side: int) -> Optional[int]:
        return max(self.unselected(side), default=None)

    def marked(self, side: int) -> List[Tuple[int, bool]]:
        return [(a, a in self.selected(side)) for a in self.support(side)]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.name.lower(),
            "A0": [[a, s] for a, s in self.marked(0)],
            "A1": [[a, s] for a, s in self.marked(1)],
        }


@dataclass(frozen=True)
class DiffDenomData:
    """Supports A_i = supp(Q_i) u supp(P_i) of f0 = x Q0 - P0, f1 = y Q1 - P1."""
    a0: Support
    a1: Support
    selection1: Selection
    selection2: Selection

    def selection(self, kind: SelectionKind) -> Selection:
        return self.selection1 if kind is SelectionKind.SELECTION1 else self.selection2
