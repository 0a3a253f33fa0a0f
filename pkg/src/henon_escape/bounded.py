"""Complex values with a certified absolute error radius."""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["Bounded"]


@dataclass(frozen=True)
class Bounded:
    """``value`` ± ``err``; the true quantity lies in the closed disk.

    Only truncation error is tracked.  Floating-point rounding is accounted
    for separately by callers that compare against exact identities.
    An invalid Bounded (e.g. a quotient whose denominator disk contains 0)
    has ``err = inf``.
    """

    value: complex
    err: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))
        if math.isnan(self.err) or self.err < 0:
            raise ValueError(f"error radius must be >= 0, got {self.err!r}")

    @property
    def valid(self) -> bool:
        return math.isfinite(self.err)

    def contains(self, x: complex, slack: float = 0.0) -> bool:
        return abs(complex(x) - self.value) <= self.err + slack

    def __abs__(self) -> float:
        return abs(self.value)

    def __add__(self, other):
        if isinstance(other, Bounded):
            return Bounded(self.value + other.value, self.err + other.err)
        return Bounded(self.value + other, self.err)

    __radd__ = __add__

    def __neg__(self):
        return Bounded(-self.value, self.err)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Bounded):
            err = abs(self.value) * other.err + abs(other.value) * self.err + self.err * other.err
            return Bounded(self.value * other.value, err)
        return Bounded(self.value * other, abs(other) * self.err)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Bounded):
            other = Bounded(other)
        v, ev = other.value, other.err
        av = abs(v)
        if not av > ev:
            return Bounded(self.value / v if v != 0 else complex(math.nan, math.nan), math.inf)
        err = (abs(self.value) * ev + av * self.err) / (av * (av - ev))
        return Bounded(self.value / v, err)

    def __rtruediv__(self, other):
        return Bounded(other) / self
