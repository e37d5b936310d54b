"""Congruence subgroups K0(8), K1(8), K0(4) and the genuine characters chi_1, chi_2.

A character is evaluated through the triangular decomposition

    (A, eps) = (x(s),1) (h(u),1) (y(t),1) (I, eps*delta),

so chi(A, eps) = chi(h(u), 1) * chi(I, eps*delta), with chi(I, -1) = iota^2 = -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cyclo8 import ONE, Cyclo8, i4
from .dyadic import is_integral, residue, val2
from .metaplectic import GL2, SL2, Mat2, MetaElement, h, lift, meta_prod, x, y

CHI1 = "chi1"
CHI2 = "chi2"


def _integral(g: Mat2) -> bool:
    return all(is_integral(e) for e in g.entries())


def in_K0(g: Mat2, level: int = 8) -> bool:
    """g in SL2(Z_2) with lower-left entry in level*Z_2."""
    if g.det() != 1 or not _integral(g):
        return False
    return val2(g.c) >= val2(level)


def in_K0_8(g: Mat2) -> bool:
    return in_K0(g, 8)


def in_K1_8(g: Mat2) -> bool:
    return in_K0_8(g) and residue(g.a, 3) == 1


def in_K0_4_gl2(g: Mat2) -> bool:
    """g in GL2(Z_2), unit determinant, lower-left entry in 4*Z_2."""
    if not _integral(g):
        return False
    det = g.det()
    return det != 0 and val2(det) == 0 and val2(g.c) >= 2


@dataclass(frozen=True)
class TriangularDecomposition:
    s: Fraction
    u: Fraction
    t: Fraction
    delta: int


def triangular_decompose(g: Mat2) -> TriangularDecomposition:
    """Write g = x(s) h(u) y(t); delta is the sign of the lifted product."""
    if g.flavor != SL2 or g.det() != 1:
        raise ValueError("triangular decomposition needs an SL2 matrix")
    if g.d == 0 or val2(g.d) != 0:
        raise ValueError(f"lower-right entry of {g!r} is not a 2-adic unit")
    s, u, t = g.b / g.d, 1 / g.d, g.c / g.d
    prod = meta_prod(lift(x(s)), lift(h(u)), lift(y(t)))
    assert prod.g == g
    return TriangularDecomposition(s, u, t, prod.eps)


@dataclass(frozen=True)
class GenuineCharacter:
    """chi_1 or chi_2 on the inverse image of K0(8), with iota = chi((-I, 1))."""

    variant: str
    iota: Cyclo8

    def __post_init__(self):
        if self.variant not in (CHI1, CHI2):
            raise ValueError(f"unknown character {self.variant!r}")
        if self.iota * self.iota != -ONE:
            raise ValueError("iota must be a primitive fourth root of unity")

    def on_torus(self, u) -> Cyclo8:
        """chi((h(u), 1)) for a 2-adic unit u, read from the mod-8 tables."""
        r = residue(u, 3)
        if self.variant == CHI1:
            return ONE if r in (1, 5) else self.iota
        return {1: ONE, 7: self.iota, 5: -ONE, 3: -self.iota}[r]

    def __call__(self, el: MetaElement) -> Cyclo8:
        return eval_char(self, el)


def make_character(variant: str, iota_sign: int = 1) -> GenuineCharacter:
    return GenuineCharacter(variant, i4(iota_sign))


def eval_char(chi: GenuineCharacter, el: MetaElement) -> Cyclo8:
    if not in_K0_8(el.g):
        raise ValueError(f"{el.g!r} is not in K0(8)")
    td = triangular_decompose(el.g)
    value = chi.on_torus(td.u)
    if el.eps * td.delta == -1:
        value = -value
    return value


def eval_char_conj(chi: GenuineCharacter, el: MetaElement) -> Cyclo8:
    return eval_char(chi, el).conj()


__all__ = [
    "CHI1",
    "CHI2",
    "GL2",
    "GenuineCharacter",
    "TriangularDecomposition",
    "eval_char",
    "eval_char_conj",
    "in_K0",
    "in_K0_4_gl2",
    "in_K0_8",
    "in_K1_8",
    "make_character",
    "triangular_decompose",
]
