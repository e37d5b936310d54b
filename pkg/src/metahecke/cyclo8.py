"""Exact arithmetic in Q(zeta_8) on the power basis 1, z, z^2, z^3."""

from __future__ import annotations

import cmath
from fractions import Fraction
from typing import Iterable

_ZETA = cmath.exp(1j * cmath.pi / 4)


class Cyclo8:
    """c0 + c1*z + c2*z^2 + c3*z^3 with z^4 = -1 and rational c_i."""

    __slots__ = ("c",)

    def __init__(self, c0=0, c1=0, c2=0, c3=0):
        self.c = (Fraction(c0), Fraction(c1), Fraction(c2), Fraction(c3))

    @classmethod
    def coerce(cls, x) -> "Cyclo8":
        if isinstance(x, Cyclo8):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Cyclo8")

    @classmethod
    def from_coeffs(cls, coeffs: Iterable) -> "Cyclo8":
        return cls(*coeffs)

    # arithmetic

    def __add__(self, other):
        try:
            o = Cyclo8.coerce(other)
        except TypeError:
            return NotImplemented
        return Cyclo8(*(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclo8(*(-a for a in self.c))

    def __sub__(self, other):
        try:
            o = Cyclo8.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return Cyclo8.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclo8(*(a * other for a in self.c))
        if not isinstance(other, Cyclo8):
            return NotImplemented
        a, b = self.c, other.c
        out = [Fraction(0)] * 4
        for i in range(4):
            if not a[i]:
                continue
            for j in range(4):
                k = i + j
                if k < 4:
                    out[k] += a[i] * b[j]
                else:
                    out[k - 4] -= a[i] * b[j]
        return Cyclo8(*out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def galois(self, j: int) -> "Cyclo8":
        """Image under z -> z^j for odd j."""
        if j % 2 == 0:
            raise ValueError("Galois exponent must be odd")
        out = [Fraction(0)] * 4
        for i, a in enumerate(self.c):
            e = (i * j) % 8
            if e < 4:
                out[e] += a
            else:
                out[e - 4] -= a
        return Cyclo8(*out)

    def conj(self) -> "Cyclo8":
        """Complex conjugation (z -> z^-1)."""
        return self.galois(7)

    def norm(self) -> Fraction:
        n = self * self.galois(3) * self.galois(5) * self.galois(7)
        return n.c[0]

    def inv(self) -> "Cyclo8":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_8)")
        rest = self.galois(3) * self.galois(5) * self.galois(7)
        return rest * (1 / (self * rest).c[0])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * Cyclo8.coerce(other).inv()

    def __rtruediv__(self, other):
        return Cyclo8.coerce(other) * self.inv()

    # comparison and conversion

    def is_zero(self) -> bool:
        return not any(self.c)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclo8(other)
        if not isinstance(other, Cyclo8):
            return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __complex__(self):
        return sum(complex(float(a)) * _ZETA**i for i, a in enumerate(self.c))

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def to_json(self) -> list[str]:
        return [str(a) for a in self.c]

    @classmethod
    def from_json(cls, data) -> "Cyclo8":
        return cls(*(Fraction(s) for s in data))

    def __repr__(self):
        return f"Cyclo8({', '.join(str(a) for a in self.c)})"

    def __str__(self):
        names = ("", "z", "z^2", "z^3")
        terms = []
        for a, name in zip(self.c, names):
            if not a:
                continue
            if not name:
                terms.append(str(a))
            elif a == 1:
                terms.append(name)
            elif a == -1:
                terms.append(f"-{name}")
            else:
                terms.append(f"{a}*{name}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


ZERO = Cyclo8()
ONE = Cyclo8(1)
ZETA8 = Cyclo8(0, 1)


def sqrt2() -> Cyclo8:
    return Cyclo8(0, 1, 0, -1)


def i4(sign: int = 1) -> Cyclo8:
    """A primitive fourth root of unity: z^2 for sign +1, -z^2 for -1."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return Cyclo8(0, 0, sign, 0)


SQRT2 = sqrt2()
INV_SQRT2 = SQRT2.inv()


def zeta_from_iota(iota: Cyclo8) -> Cyclo8:
    """(1 + iota)/sqrt(2), the value attached to w(1)."""
    return (ONE + iota) * INV_SQRT2
