"""SL_2(Q_2) / GL_2(Q_2) matrices and the double cover of SL_2(Q_2).

The cover is SL_2(Q_2) x {+1, -1} with the product

    (g, e1)(h, e2) = (gh, e1 e2 sigma(g, h)),

where sigma is the Kubota cocycle built from 2-adic Hilbert symbols.
"""

from __future__ import annotations

from fractions import Fraction

from .dyadic import format_dyadic, hilbert2, parse_rational, val2

SL2 = "SL2"
GL2 = "GL2"


class Mat2:
    """2x2 matrix [[a, b], [c, d]] with rational entries."""

    __slots__ = ("a", "b", "c", "d", "flavor")

    def __init__(self, a, b, c, d, flavor: str = SL2, check: bool = True):
        self.a, self.b, self.c, self.d = Fraction(a), Fraction(b), Fraction(c), Fraction(d)
        self.flavor = flavor
        if check:
            det = self.det()
            if flavor == SL2 and det != 1:
                raise ValueError(f"determinant {det} != 1 for an SL2 matrix")
            if flavor == GL2 and det == 0:
                raise ValueError("singular GL2 matrix")

    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def entries(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, o: "Mat2") -> "Mat2":
        flavor = GL2 if GL2 in (self.flavor, o.flavor) else SL2
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
            flavor,
            check=False,
        )

    def inv(self) -> "Mat2":
        if self.flavor == SL2:
            return Mat2(self.d, -self.b, -self.c, self.a, SL2, check=False)
        det = self.det()
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det, GL2, check=False)

    def scale(self, t) -> "Mat2":
        t = Fraction(t)
        return Mat2(t * self.a, t * self.b, t * self.c, t * self.d, GL2, check=False)

    def as_gl2(self) -> "Mat2":
        return Mat2(self.a, self.b, self.c, self.d, GL2, check=False)

    def minval(self):
        return min(val2(x) for x in self.entries())

    def __eq__(self, o):
        return isinstance(o, Mat2) and self.entries() == o.entries()

    def __hash__(self):
        return hash(self.entries())

    def __repr__(self):
        a, b, c, d = (str(x) for x in self.entries())
        return f"[[{a},{b}],[{c},{d}]]"

    def to_json(self) -> list[str]:
        return [format_dyadic(x) for x in self.entries()]

    @classmethod
    def from_json(cls, data, flavor: str = SL2) -> "Mat2":
        return cls(*(parse_rational(s) for s in data), flavor=flavor)

    @classmethod
    def parse(cls, text: str, flavor: str = SL2) -> "Mat2":
        """Parse ``"[[a,b],[c,d]]"`` with rational/dyadic entries."""
        body = text.replace("[", " ").replace("]", " ").replace(",", " ").split()
        if len(body) != 4:
            raise ValueError(f"expected four entries in {text!r}")
        return cls(*(parse_rational(s) for s in body), flavor=flavor)


IDENTITY = Mat2(1, 0, 0, 1)
MINUS_I = Mat2(-1, 0, 0, -1)


def _nonzero(t, name):
    t = Fraction(t)
    if t == 0:
        raise ValueError(f"{name}(0) is undefined")
    return t


def x(s) -> Mat2:
    return Mat2(1, s, 0, 1, check=False)


def y(t) -> Mat2:
    return Mat2(1, 0, t, 1, check=False)


def h(t) -> Mat2:
    t = _nonzero(t, "h")
    return Mat2(t, 0, 0, 1 / t, check=False)


def w(t) -> Mat2:
    """The SL2 Weyl element [[0, t], [-1/t, 0]]."""
    t = _nonzero(t, "w")
    return Mat2(0, t, -1 / t, 0, check=False)


def d(t) -> Mat2:
    t = _nonzero(t, "d")
    return Mat2(t, 0, 0, 1, GL2, check=False)


def z(t) -> Mat2:
    t = _nonzero(t, "z")
    return Mat2(t, 0, 0, t, GL2, check=False)


def w_gl(t) -> Mat2:
    """The GL2 Weyl-type element [[0, -1], [t, 0]]."""
    t = _nonzero(t, "w_gl")
    return Mat2(0, -1, t, 0, GL2, check=False)


# cocycle


def tau(g: Mat2) -> Fraction:
    return g.c if g.c != 0 else g.d


def s2(g: Mat2) -> int:
    if g.c != 0 and g.d != 0 and val2(g.c) % 2 == 1:
        return hilbert2(g.c, g.d)
    return 1


def sigma2(g: Mat2, hh: Mat2, gh: Mat2 | None = None) -> int:
    """Kubota cocycle sigma_2(g, h); pass ``gh`` to skip the product."""
    if gh is None:
        gh = g * hh
    t = tau(gh)
    return hilbert2(t * tau(g), t * tau(hh)) * s2(g) * s2(hh) * s2(gh)


class MetaElement:
    """Element (g, eps) of the double cover."""

    __slots__ = ("g", "eps")

    def __init__(self, g: Mat2, eps: int = 1):
        if g.flavor != SL2:
            raise ValueError("the cover is over SL2 only")
        if eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        self.g = g
        self.eps = eps

    def __mul__(self, o: "MetaElement") -> "MetaElement":
        return meta_mul(self, o)

    def inv(self) -> "MetaElement":
        return meta_inv(self)

    def __eq__(self, o):
        return isinstance(o, MetaElement) and self.g == o.g and self.eps == o.eps

    def __hash__(self):
        return hash((self.g, self.eps))

    def __repr__(self):
        return f"({self.g!r}, {self.eps:+d})"


def meta_mul(p: MetaElement, q: MetaElement) -> MetaElement:
    gh = p.g * q.g
    return MetaElement(gh, p.eps * q.eps * sigma2(p.g, q.g, gh))


def meta_inv(p: MetaElement) -> MetaElement:
    gi = p.g.inv()
    return MetaElement(gi, p.eps * sigma2(p.g, gi, IDENTITY))


def meta_prod(*elements: MetaElement) -> MetaElement:
    out = MetaElement(IDENTITY, 1)
    for e in elements:
        out = meta_mul(out, e)
    return out


def lift(g: Mat2) -> MetaElement:
    """g-bar = (g, 1)."""
    return MetaElement(g, 1)


META_ONE = MetaElement(IDENTITY, 1)
CENTRAL = MetaElement(MINUS_I, 1)
