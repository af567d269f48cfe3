"""Factor groups of the free product: additive subgroups Z and Q of the rationals.

Factors are identified by their 1-based position in declaration order, which is
also the total order used on the index set.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence, Union

from .errors import FactorMismatch, ParseError

Rational = Union[int, Fraction]


class FactorKind(str, Enum):
    Z = "Z"
    Q = "Q"


class Cmp(str, Enum):
    LT = "LT"
    EQ = "EQ"
    GT = "GT"

    @classmethod
    def of(cls, x: int) -> "Cmp":
        return cls.LT if x < 0 else cls.GT if x > 0 else cls.EQ


@dataclass(frozen=True, order=True)
class FactorElement:
    factor: int
    value: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", Fraction(self.value))

    def __neg__(self) -> "FactorElement":
        return FactorElement(self.factor, -self.value)


def compose(a: FactorElement, b: FactorElement) -> FactorElement:
    if a.factor != b.factor:
        raise FactorMismatch(a.factor, b.factor)
    return FactorElement(a.factor, a.value + b.value)


def factor_compare(a: FactorElement, b: FactorElement) -> Cmp:
    if a.factor != b.factor:
        raise FactorMismatch(a.factor, b.factor)
    return Cmp.of((a.value > b.value) - (a.value < b.value))


@dataclass(frozen=True)
class FactorSystem:
    """Ordered list of factor kinds; factor ids run 1..len(kinds)."""

    kinds: tuple[FactorKind, ...]

    @classmethod
    def from_spec(cls, spec: Sequence) -> "FactorSystem":
        kinds = []
        for item in spec:
            raw = item["kind"] if isinstance(item, dict) else item
            try:
                kinds.append(FactorKind(raw))
            except ValueError:
                raise ParseError(f"unknown factor kind {raw!r}") from None
        if not kinds:
            raise ParseError("at least one factor is required")
        return cls(tuple(kinds))

    @classmethod
    def free(cls, n: int) -> "FactorSystem":
        return cls((FactorKind.Z,) * n)

    def __len__(self) -> int:
        return len(self.kinds)

    def kind(self, factor: int) -> FactorKind:
        return self.kinds[factor - 1]

    def contains(self, factor: int, value: Rational) -> bool:
        if not 1 <= factor <= len(self.kinds):
            return False
        return self.kind(factor) is FactorKind.Q or Fraction(value).denominator == 1

    def element(self, factor: int, value: Rational) -> FactorElement:
        if not self.contains(factor, value):
            raise ParseError(f"{value} is not an element of factor g{factor}")
        return FactorElement(factor, Fraction(value))

    def to_json(self) -> list[dict]:
        return [{"kind": k.value} for k in self.kinds]
