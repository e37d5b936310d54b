"""2-adic helpers on exact rationals.

Every matrix entry that shows up in the level-8 computations is a rational
number, viewed inside Q_2.  Entries like 1/3 (from h(3)) are 2-adic units, so
the working scalar type is :class:`fractions.Fraction`; this module supplies
valuations, unit parts, residues and the 2-adic Hilbert symbol on top of it.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]

INF = math.inf

UNIT_PRECISION = 6


def _v2_int(n: int) -> int:
    return (n & -n).bit_length() - 1


def val2(x: Rational) -> float | int:
    """2-adic valuation; ``math.inf`` for zero."""
    x = Fraction(x)
    if x == 0:
        return INF
    return _v2_int(x.numerator) - _v2_int(x.denominator)


def unit_part(x: Rational) -> Fraction:
    """The unit u with x = 2^val2(x) * u."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero has no unit part")
    v = val2(x)
    return x / Fraction(2) ** v


def is_integral(x: Rational) -> bool:
    """True when x lies in Z_2 (odd denominator)."""
    return Fraction(x).denominator % 2 == 1


def residue(x: Rational, m: int) -> int:
    """x mod 2^m as an integer in [0, 2^m), for x in Z_2."""
    x = Fraction(x)
    if not is_integral(x):
        raise ValueError(f"{x} is not 2-adically integral")
    mod = 1 << m
    return (x.numerator * pow(x.denominator, -1, mod)) % mod


def reduce_mod(x: Rational, e: int) -> Fraction:
    """Canonical representative of x modulo 2^e Z_2.

    The result is 0 or 2^v * r with v = val2(x) < e and r in [1, 2^(e-v)) odd,
    so two rationals are congruent mod 2^e exactly when their reductions agree.
    """
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    v = val2(x)
    if v >= e:
        return Fraction(0)
    u = unit_part(x)
    r = residue(u, e - v)
    return Fraction(r) * Fraction(2) ** v


def congruent(x: Rational, y: Rational, e: int) -> bool:
    return val2(Fraction(x) - Fraction(y)) >= e


@dataclass(frozen=True)
class UnitClass:
    """Residue class of a 2-adic unit modulo 2^precision."""

    residue: int
    precision: int = UNIT_PRECISION

    def __post_init__(self):
        if self.residue % 2 == 0:
            raise ValueError("unit classes have odd residues")
        object.__setattr__(self, "residue", self.residue % (1 << self.precision))

    @classmethod
    def of(cls, u: Rational, precision: int = UNIT_PRECISION) -> "UnitClass":
        if Fraction(u) == 0 or val2(u) != 0:
            raise ValueError(f"{u} is not a 2-adic unit")
        return cls(residue(u, precision), precision)

    def mod8(self) -> int:
        return self.residue % 8


def _eps(u: int) -> int:
    return ((u - 1) // 2) % 2


def _omega(u: int) -> int:
    return ((u * u - 1) // 8) % 2


def hilbert2(a: Rational, b: Rational) -> int:
    """2-adic Hilbert symbol (a, b)_2 for nonzero rationals."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("hilbert2 is undefined at 0")
    alpha, beta = val2(a), val2(b)
    u = residue(unit_part(a), 3)
    v = residue(unit_part(b), 3)
    e = _eps(u) * _eps(v) + alpha * _omega(v) + beta * _omega(u)
    return -1 if e % 2 else 1


def kronecker2(m: int) -> int:
    """Kronecker symbol (2 / m) for odd m."""
    if m % 2 == 0:
        raise ValueError("kronecker2 needs an odd argument")
    return 1 if m % 8 in (1, 7) else -1


_DYADIC_RE = re.compile(r"^\s*([+-]?\d+)(?:/(\d+))?\s*(?:\*\s*2\^\(?([+-]?\d+)\)?)?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"3"``, ``"-1/4"``, ``"3*2^-2"`` or ``"5/3*2^4"``."""
    m = _DYADIC_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse rational {text!r}")
    num, den, exp = m.groups()
    x = Fraction(int(num), int(den) if den else 1)
    if exp is not None:
        x *= Fraction(2) ** int(exp)
    return x


def format_dyadic(x: Rational) -> str:
    """Inverse of :func:`parse_rational`, in the ``unit*2^exp`` form."""
    x = Fraction(x)
    if x == 0:
        return "0"
    v = val2(x)
    u = unit_part(x)
    body = str(u.numerator) if u.denominator == 1 else f"{u.numerator}/{u.denominator}"
    return body if v == 0 else f"{body}*2^{v}"
