"""Double-double arithmetic.

A double-double is an unevaluated sum ``hi + lo`` of two binary64 numbers with
``|lo| <= ulp(hi)/2``, good for about 32 significant digits.

The primitive kernels below take and return plain ``(hi, lo)`` float pairs and
use nothing but ``+ - * /``; under numba they compile for scalars, in the NumPy
fallback they also work elementwise on arrays.  :class:`DoubleDouble` wraps them
for interactive use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from ._jit import kernel

_SPLITTER = 134217729.0  # 2**27 + 1


@kernel
def two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


@kernel
def quick_two_sum(a, b):
    # requires |a| >= |b|
    s = a + b
    return s, b - (s - a)


@kernel
def split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


@kernel
def two_prod(a, b):
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


@kernel
def dd_add(ah, al, bh, bl):
    s, e = two_sum(ah, bh)
    t, f = two_sum(al, bl)
    e = e + t
    s, e = quick_two_sum(s, e)
    e = e + f
    return quick_two_sum(s, e)


@kernel
def dd_sub(ah, al, bh, bl):
    return dd_add(ah, al, -bh, -bl)


@kernel
def dd_add_d(ah, al, b):
    s, e = two_sum(ah, b)
    e = e + al
    return quick_two_sum(s, e)


@kernel
def dd_mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    e = e + (al * bl + (ah * bl + al * bh))
    return quick_two_sum(p, e)


@kernel
def dd_mul_d(ah, al, b):
    p, e = two_prod(ah, b)
    e = e + al * b
    return quick_two_sum(p, e)


@kernel
def dd_div(ah, al, bh, bl):
    q1 = ah / bh
    ph, pl = dd_mul_d(bh, bl, q1)
    rh, rl = dd_sub(ah, al, ph, pl)
    q2 = rh / bh
    ph, pl = dd_mul_d(bh, bl, q2)
    rh, rl = dd_sub(rh, rl, ph, pl)
    q3 = rh / bh
    q1, q2 = quick_two_sum(q1, q2)
    return dd_add_d(q1, q2, q3)


@kernel
def dd_sqrt(ah, al):
    """Square root of a positive scalar double-double (one Newton correction)."""
    if ah <= 0.0:
        return 0.0, 0.0
    s = math.sqrt(ah)
    ph, pl = two_prod(s, s)
    rh, rl = dd_sub(ah, al, ph, pl)
    return quick_two_sum(s, rh / (2.0 * s))


Number = Union[int, float, Fraction, "DoubleDouble"]


def _from_fraction(q: Fraction) -> tuple[float, float]:
    hi = float(q)
    lo = float(q - Fraction(hi))
    return quick_two_sum(hi, lo)


@dataclass(frozen=True)
class DoubleDouble:
    """Unevaluated sum ``hi + lo``; arithmetic renormalises after every operation.

    >>> x = DoubleDouble(1) / DoubleDouble(3)
    >>> float(x * 3)
    1.0
    """

    hi: float
    lo: float = 0.0

    def __post_init__(self):
        hi, lo = two_sum(float(self.hi), float(self.lo))
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "lo", lo)

    @classmethod
    def coerce(cls, value: Number) -> "DoubleDouble":
        if isinstance(value, DoubleDouble):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(*_from_fraction(Fraction(value)))
        return cls(float(value), 0.0)

    @classmethod
    def from_fraction(cls, value: Fraction) -> "DoubleDouble":
        return cls(*_from_fraction(value))

    def to_fraction(self) -> Fraction:
        return Fraction(self.hi) + Fraction(self.lo)

    def __float__(self) -> float:
        return self.hi + self.lo

    def __repr__(self) -> str:
        return f"DoubleDouble({self.hi!r}, {self.lo!r})"

    def __neg__(self) -> "DoubleDouble":
        return DoubleDouble(-self.hi, -self.lo)

    def __abs__(self) -> "DoubleDouble":
        return -self if self.hi < 0 or (self.hi == 0 and self.lo < 0) else self

    def __add__(self, other: Number) -> "DoubleDouble":
        o = DoubleDouble.coerce(other)
        return DoubleDouble(*dd_add(self.hi, self.lo, o.hi, o.lo))

    __radd__ = __add__

    def __sub__(self, other: Number) -> "DoubleDouble":
        o = DoubleDouble.coerce(other)
        return DoubleDouble(*dd_sub(self.hi, self.lo, o.hi, o.lo))

    def __rsub__(self, other: Number) -> "DoubleDouble":
        return DoubleDouble.coerce(other) - self

    def __mul__(self, other: Number) -> "DoubleDouble":
        o = DoubleDouble.coerce(other)
        return DoubleDouble(*dd_mul(self.hi, self.lo, o.hi, o.lo))

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "DoubleDouble":
        o = DoubleDouble.coerce(other)
        if o.hi == 0.0:
            raise ZeroDivisionError("double-double division by zero")
        return DoubleDouble(*dd_div(self.hi, self.lo, o.hi, o.lo))

    def __rtruediv__(self, other: Number) -> "DoubleDouble":
        return DoubleDouble.coerce(other) / self

    def sqrt(self) -> "DoubleDouble":
        if self.hi < 0:
            raise ValueError("square root of a negative double-double")
        return DoubleDouble(*dd_sqrt(self.hi, self.lo))

    def _key(self) -> tuple[float, float]:
        return (self.hi, self.lo)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (DoubleDouble, int, float, Fraction)):
            return NotImplemented
        return self._key() == DoubleDouble.coerce(other)._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __lt__(self, other: Number) -> bool:
        return self._key() < DoubleDouble.coerce(other)._key()

    def __le__(self, other: Number) -> bool:
        return self._key() <= DoubleDouble.coerce(other)._key()

    def __gt__(self, other: Number) -> bool:
        return self._key() > DoubleDouble.coerce(other)._key()

    def __ge__(self, other: Number) -> bool:
        return self._key() >= DoubleDouble.coerce(other)._key()


class DDArray:
    """A vector of double-doubles stored as two float64 arrays."""

    __slots__ = ("hi", "lo")

    def __init__(self, hi, lo=None):
        self.hi = np.asarray(hi, dtype=np.float64)
        self.lo = np.zeros_like(self.hi) if lo is None else np.asarray(lo, dtype=np.float64)
        if self.hi.shape != self.lo.shape:
            raise ValueError("hi and lo parts must have the same shape")

    @classmethod
    def from_values(cls, values) -> "DDArray":
        items = [DoubleDouble.coerce(v) for v in values]
        return cls([d.hi for d in items], [d.lo for d in items])

    def __len__(self) -> int:
        return len(self.hi)

    def __getitem__(self, i):
        if isinstance(i, slice) or np.ndim(i) > 0:
            return DDArray(self.hi[i], self.lo[i])
        return DoubleDouble(self.hi[i], self.lo[i])

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def to_float(self) -> np.ndarray:
        return self.hi + self.lo

    def __repr__(self) -> str:
        return f"DDArray(n={len(self)})"
