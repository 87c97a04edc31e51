"""Exact arithmetic in the quadratic field Q(sqrt 3).

Elements are pairs ``(rat, sqrt3)`` standing for ``rat + sqrt3 * sqrt(3)``.
Trigonometric paths at multiples of pi/3 and their central-difference
velocities all live in this field.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from typing import Union

from .grid import format_fraction, to_fraction

Scalar = Union[int, Fraction]


@total_ordering
class QSqrt3:
    __slots__ = ("rat", "sqrt3")

    def __init__(self, rat: Scalar | str = 0, sqrt3: Scalar | str = 0):
        self.rat = to_fraction(rat)
        self.sqrt3 = to_fraction(sqrt3)

    @classmethod
    def coerce(cls, value) -> "QSqrt3":
        if isinstance(value, QSqrt3):
            return value
        return cls(value, 0)

    # arithmetic

    def __add__(self, other):
        try:
            o = QSqrt3.coerce(other)
        except Exception:
            return NotImplemented
        return QSqrt3(self.rat + o.rat, self.sqrt3 + o.sqrt3)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt3(-self.rat, -self.sqrt3)

    def __sub__(self, other):
        try:
            o = QSqrt3.coerce(other)
        except Exception:
            return NotImplemented
        return QSqrt3(self.rat - o.rat, self.sqrt3 - o.sqrt3)

    def __rsub__(self, other):
        return QSqrt3.coerce(other) - self

    def __mul__(self, other):
        try:
            o = QSqrt3.coerce(other)
        except Exception:
            return NotImplemented
        return QSqrt3(
            self.rat * o.rat + 3 * self.sqrt3 * o.sqrt3,
            self.rat * o.sqrt3 + self.sqrt3 * o.rat,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QSqrt3":
        return QSqrt3(self.rat, -self.sqrt3)

    def norm(self) -> Fraction:
        """a^2 - 3 b^2, the field norm."""
        return self.rat * self.rat - 3 * self.sqrt3 * self.sqrt3

    def __truediv__(self, other):
        try:
            o = QSqrt3.coerce(other)
        except Exception:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 3)")
        num = self * o.conjugate()
        return QSqrt3(num.rat / n, num.sqrt3 / n)

    def __rtruediv__(self, other):
        return QSqrt3.coerce(other) / self

    # ordering: sqrt(3) is irrational, so a + b sqrt3 == 0 iff a == b == 0

    def sign(self) -> int:
        a, b = self.rat, self.sqrt3
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with 3 b^2
        return sa if a * a > 3 * b * b else sb

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __eq__(self, other):
        try:
            o = QSqrt3.coerce(other)
        except Exception:
            return NotImplemented
        return self.rat == o.rat and self.sqrt3 == o.sqrt3

    def __lt__(self, other):
        try:
            o = QSqrt3.coerce(other)
        except Exception:
            return NotImplemented
        return (self - o).sign() < 0

    def __hash__(self):
        if self.sqrt3 == 0:
            return hash(self.rat)
        return hash((self.rat, self.sqrt3))

    def __bool__(self):
        return bool(self.rat) or bool(self.sqrt3)

    def __float__(self):
        return float(self.rat) + float(self.sqrt3) * math.sqrt(3)

    def is_rational(self) -> bool:
        return self.sqrt3 == 0

    def __repr__(self):
        return f"QSqrt3({format_fraction(self.rat)!r}, {format_fraction(self.sqrt3)!r})"

    def __str__(self):
        if self.sqrt3 == 0:
            return format_fraction(self.rat)
        return f"{format_fraction(self.rat)}+{format_fraction(self.sqrt3)}*sqrt3"

    def to_json(self) -> dict:
        return {"rat": format_fraction(self.rat), "sqrt3": format_fraction(self.sqrt3)}

    @classmethod
    def from_json(cls, data: dict) -> "QSqrt3":
        return cls(data["rat"], data["sqrt3"])


SQRT3 = QSqrt3(0, 1)
