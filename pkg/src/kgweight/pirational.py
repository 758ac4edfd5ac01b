"""Exact scalars of the form q * pi**k with q rational."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

__all__ = ["PiRational"]


@dataclass(frozen=True)
class PiRational:
    """``coeff * pi**pi_power``. Zero is always stored as ``(0, 0)``."""

    coeff: Fraction
    pi_power: int = 0

    def __post_init__(self):
        c = Fraction(self.coeff)
        object.__setattr__(self, "coeff", c)
        if c == 0:
            object.__setattr__(self, "pi_power", 0)

    @classmethod
    def coerce(cls, x) -> PiRational:
        if isinstance(x, PiRational):
            return x
        if isinstance(x, (int, Rational)):
            return cls(Fraction(x), 0)
        raise TypeError(f"cannot convert {type(x).__name__} to PiRational")

    def is_zero(self) -> bool:
        return self.coeff == 0

    def __add__(self, other):
        other = PiRational.coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.pi_power != other.pi_power:
            raise ValueError(
                f"cannot add pi^{self.pi_power} and pi^{other.pi_power} terms exactly"
            )
        return PiRational(self.coeff + other.coeff, self.pi_power)

    __radd__ = __add__

    def __neg__(self):
        return PiRational(-self.coeff, self.pi_power)

    def __sub__(self, other):
        return self + (-PiRational.coerce(other))

    def __rsub__(self, other):
        return PiRational.coerce(other) - self

    def __mul__(self, other):
        other = PiRational.coerce(other)
        return PiRational(self.coeff * other.coeff, self.pi_power + other.pi_power)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = PiRational.coerce(other)
        return PiRational(self.coeff / other.coeff, self.pi_power - other.pi_power)

    def __float__(self):
        if self.is_zero():
            return 0.0
        return float(self.coeff) * math.pi**self.pi_power

    def __eq__(self, other):
        try:
            other = PiRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.coeff == other.coeff and self.pi_power == other.pi_power

    def __hash__(self):
        return hash((self.coeff, self.pi_power))

    def __str__(self):
        if self.pi_power == 0:
            return str(self.coeff)
        return f"{self.coeff}*pi^{self.pi_power}"
