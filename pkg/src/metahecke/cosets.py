"""Double cosets K0\\G/K0 for K0 = K0(8) in SL2(Q_2) and K0 = K0(4) in GL2(Q_2).

A right coset K0*g is identified by the pair of lattices g^-1 L_0, g^-1 L_e with
L_0 = Z_2^2 and L_e = Z_2 + 2^e Z_2 (e = 3 for SL2, e = 2 for GL2), because
K0 is exactly the joint stabilizer of (L_0, L_e).  Lattices are compared via a
Hermite normal form, so equality of right cosets is decided exactly.

The single cosets inside K0*r*K0 are enumerated as the orbit of K0*r under
right multiplication by topological generators of K0.  That orbit is complete,
so counts coming from it certify completeness as well as distinctness.
"""

from __future__ import annotations

import os
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .dyadic import format_dyadic, reduce_mod, unit_part, val2
from .characters import in_K0_4_gl2, in_K0_8
from .metaplectic import (
    GL2,
    IDENTITY,
    SL2,
    Mat2,
    MetaElement,
    d,
    h,
    lift,
    meta_prod,
    w,
    w_gl,
    x,
    y,
    z,
)

DEFAULT_WINDOW = 6


def window() -> int:
    """Classification window N, overridable through ``HECKE_WINDOW``."""
    raw = os.environ.get("HECKE_WINDOW")
    return int(raw) if raw else DEFAULT_WINDOW


class OutOfWindowError(ValueError):
    """Element lies outside every double coset with parameter |n| <= N."""


class LabelError(ValueError):
    pass


def level_exponent(flavor: str) -> int:
    return 3 if flavor == SL2 else 2


def in_K0(g: Mat2, flavor: str) -> bool:
    return in_K0_8(g) if flavor == SL2 else in_K0_4_gl2(g)


# labels

# shape -> (tokens, predicate on the parameter n); None marks a shape without n.
_SL2_SHAPES: dict[str, tuple[tuple[str, ...], object]] = {
    "H": (("H",), lambda n: True),
    "W": (("W",), lambda n: True),
    "Y4": (("Y4",), None),
    "H*Y4": (("H", "Y4"), lambda n: n >= 1),
    "Y4*H": (("Y4", "H"), lambda n: n <= -1),
    "W*Y4": (("W", "Y4"), lambda n: n >= 2),
    "Y4*W": (("Y4", "W"), lambda n: n >= 2),
    "Y4*W*Y4": (("Y4", "W", "Y4"), lambda n: n >= 2),
    "Y2": (("Y2",), None),
    "H*Y2": (("H", "Y2"), lambda n: n >= 1),
    "Y2*H": (("Y2", "H"), lambda n: n <= -1),
    "W*Y2": (("W", "Y2"), lambda n: n >= 1),
    "Y2*W": (("Y2", "W"), lambda n: n >= 1),
    "Y2*W*Y2": (("Y2", "W", "Y2"), lambda n: n >= 1),
    "Y2*W*Y4": (("Y2", "W", "Y4"), lambda n: n >= 2),
    "Y4*W*Y2": (("Y4", "W", "Y2"), lambda n: n >= 2),
    "Y2*W*Y6": (("Y2", "W", "Y6"), lambda n: n == 1),
}

_GL2_SHAPES: dict[str, tuple[tuple[str, ...], object]] = {
    "D": (("D",), lambda n: True),
    "W": (("W",), lambda n: True),
    "Y2": (("Y2",), None),
    "D*Y2": (("D", "Y2"), lambda n: n >= 1),
    "Y2*D": (("Y2", "D"), lambda n: n <= -1),
    "Y2*W": (("Y2", "W"), lambda n: n >= 2),
    "W*Y2": (("W", "Y2"), lambda n: n >= 2),
    "Y2*W*Y2": (("Y2", "W", "Y2"), lambda n: n >= 2),
}


def shapes(flavor: str) -> dict[str, tuple[tuple[str, ...], object]]:
    return _SL2_SHAPES if flavor == SL2 else _GL2_SHAPES


@dataclass(frozen=True, order=True)
class CosetLabel:
    """A double coset representative in normal form.

    SL2: ``H(n)`` is h(2^n) and ``W(n)`` is w(2^-n); GL2: ``D(n)`` is d(2^n),
    ``W(n)`` is [[0,-1],[2^n,0]] and ``center`` m multiplies by z(2^m).
    """

    flavor: str
    shape: str
    n: int | None = None
    center: int = 0

    def __post_init__(self):
        table = shapes(self.flavor)
        if self.shape not in table:
            raise LabelError(f"unknown {self.flavor} shape {self.shape!r}")
        _, pred = table[self.shape]
        if pred is None:
            if self.n is not None:
                raise LabelError(f"shape {self.shape} takes no parameter")
        elif self.n is None or not pred(self.n):
            raise LabelError(f"parameter {self.n} out of range for {self.shape}")
        if self.center and self.flavor != GL2:
            raise LabelError("only GL2 labels carry a central factor")

    @property
    def tokens(self) -> tuple[str, ...]:
        return shapes(self.flavor)[self.shape][0]

    def factors(self) -> list[tuple[str, int]]:
        out = []
        for tok in self.tokens:
            if tok[0] == "Y":
                out.append(("Y", int(tok[1:])))
            else:
                out.append((tok, self.n))
        return out

    @property
    def size(self) -> int:
        """Largest |parameter|, used for window checks."""
        return abs(self.n) if self.n is not None else 0

    def is_identity(self) -> bool:
        return self.shape in ("H", "D") and self.n == 0

    def __str__(self):
        body = "*".join(f"{k}({v})" if k != "Y" else f"Y{v}" for k, v in self.factors())
        if self.flavor == GL2 and self.center:
            return f"Z({self.center})" if self.is_identity() else f"Z({self.center})*{body}"
        return body

    def __repr__(self):
        return f"CosetLabel({self})"


_FACTOR_RE = re.compile(r"^(H|W|D|Z)\((-?\d+)\)$|^Y(\d+)$")


def parse_label(text: str, flavor: str = SL2) -> CosetLabel:
    """Parse strings such as ``"H(1)"``, ``"Y4*W(2)*Y4"`` or ``"Z(1)*Y2"``."""
    cleaned = text.replace("·", "*").replace(" ", "")
    if cleaned in ("1", "I", ""):
        return identity_label(flavor)
    center = 0
    tokens: list[str] = []
    n = None
    for part in cleaned.split("*"):
        m = _FACTOR_RE.match(part)
        if not m:
            raise LabelError(f"cannot parse factor {part!r} in {text!r}")
        kind, val, yval = m.groups()
        if yval is not None:
            tokens.append(f"Y{yval}")
            continue
        if kind == "Z":
            if flavor != GL2 or tokens:
                raise LabelError(f"central factor misplaced in {text!r}")
            center = int(val)
            continue
        if n is not None and int(val) != n:
            raise LabelError(f"mixed parameters in {text!r}")
        n = int(val)
        tokens.append(kind)
    if not tokens:
        return CosetLabel(flavor, "D", 0, center)
    return CosetLabel(flavor, "*".join(tokens), n, center)


def identity_label(flavor: str = SL2) -> CosetLabel:
    return CosetLabel(flavor, "H", 0) if flavor == SL2 else CosetLabel(GL2, "D", 0)


def all_labels(flavor: str = SL2, bound: int | None = None, center: int = 0) -> list[CosetLabel]:
    """Every label with |n| <= bound (GL2: with the given central power)."""
    bound = window() if bound is None else bound
    out = []
    for shape, (_, pred) in shapes(flavor).items():
        if pred is None:
            out.append(CosetLabel(flavor, shape, None, center))
            continue
        for n in range(-bound, bound + 1):
            if pred(n):
                out.append(CosetLabel(flavor, shape, n, center))
    return out


def factor_matrix(kind: str, val: int, flavor: str) -> Mat2:
    two = Fraction(2)
    if flavor == SL2:
        if kind == "H":
            return h(two**val)
        if kind == "W":
            return w(two**-val)
        if kind == "Y":
            return y(val)
    else:
        if kind == "D":
            return d(two**val)
        if kind == "W":
            return w_gl(two**val)
        if kind == "Y":
            return y(val).as_gl2()
        if kind == "Z":
            return z(two**val)
    raise LabelError(f"no factor {kind} for {flavor}")


def rep_matrix(label: CosetLabel) -> Mat2:
    mats = [factor_matrix(k, v, label.flavor) for k, v in label.factors()]
    if label.flavor == GL2:
        out = z(Fraction(2) ** label.center)
    else:
        out = IDENTITY
    for m in mats:
        out = out * m
    return out


def base_point(label: CosetLabel) -> MetaElement:
    """The lifted word: product of (factor, +1) in the cover."""
    if label.flavor != SL2:
        raise LabelError("base points in the cover exist for SL2 labels only")
    return meta_prod(*(lift(factor_matrix(k, v, SL2)) for k, v in label.factors()))


# right-coset keys


def _hnf(m: Mat2) -> tuple:
    """Column-lattice invariant (alpha, gamma, r) of [[2^alpha, 0], [r, 2^gamma]]."""
    cols = [(m.a, m.c), (m.b, m.d)]
    v0, v1 = val2(cols[0][0]), val2(cols[1][0])
    p, q = (cols[0], cols[1]) if v0 <= v1 else (cols[1], cols[0])
    ratio = q[0] / p[0]
    e = q[1] - ratio * p[1]
    alpha = val2(p[0])
    lower = p[1] / unit_part(p[0])
    gamma = val2(e)
    return (alpha, gamma, reduce_mod(lower, gamma))


def left_key(g: Mat2, flavor: str = SL2) -> tuple:
    """Invariant of the left coset g*K0."""
    e = level_exponent(flavor)
    return (_hnf(g), _hnf(g * Mat2(1, 0, 0, 2**e, GL2, check=False)))


def right_key(g: Mat2, flavor: str = SL2) -> tuple:
    """Invariant of the right coset K0*g."""
    return left_key(g.inv(), flavor)


def same_right_coset(g: Mat2, g2: Mat2, flavor: str = SL2) -> bool:
    """True iff K0*g == K0*g2, decided by exact membership of g2*g^-1."""
    return in_K0(g2 * g.inv(), flavor)


def k0_generators(flavor: str) -> list[Mat2]:
    if flavor == SL2:
        return [x(1), y(8), h(-1), h(5)]
    return [
        x(1).as_gl2(),
        y(4).as_gl2(),
        Mat2(-1, 0, 0, 1, GL2),
        Mat2(5, 0, 0, 1, GL2),
        Mat2(1, 0, 0, -1, GL2),
        Mat2(1, 0, 0, 5, GL2),
    ]


@dataclass
class Orbit:
    """Right cosets K0*rep*tail making up K0*rep*K0, keyed by right_key."""

    rep: Mat2
    flavor: str
    tails: dict[tuple, Mat2] = field(default_factory=dict)

    def __len__(self):
        return len(self.tails)

    def tail_for(self, g: Mat2) -> Mat2 | None:
        return self.tails.get(right_key(g, self.flavor))


def right_orbit(rep: Mat2, flavor: str = SL2, limit: int = 1 << 18) -> Orbit:
    gens = k0_generators(flavor)
    one = IDENTITY if flavor == SL2 else IDENTITY.as_gl2()
    orbit = Orbit(rep, flavor)
    orbit.tails[right_key(rep, flavor)] = one
    queue = deque([one])
    while queue:
        tail = queue.popleft()
        for gen in gens:
            nt = tail * gen
            key = right_key(rep * nt, flavor)
            if key not in orbit.tails:
                orbit.tails[key] = nt
                queue.append(nt)
                if len(orbit.tails) > limit:
                    raise OutOfWindowError(f"orbit of {rep!r} exceeds {limit} cosets")
    return orbit


@lru_cache(maxsize=None)
def label_orbit(label: CosetLabel) -> Orbit:
    """Orbit of the uncentered representative (GL2 centers are factored out)."""
    base = CosetLabel(label.flavor, label.shape, label.n) if label.center else label
    return right_orbit(rep_matrix(base), label.flavor)


def right_tails(label: CosetLabel) -> list[Mat2]:
    """Tails k_j in K0 with K0*rep*K0 = union of K0*rep*k_j (orbit order)."""
    return list(label_orbit(label).tails.values())


def left_tails(label: CosetLabel) -> list[Mat2]:
    """Tails k in K0 with K0*rep*K0 = union of k*rep*K0."""
    inv = right_orbit(rep_matrix(label).inv(), label.flavor)
    return [t.inv() for t in inv.tails.values()]


# classification


def profile(g: Mat2, flavor: str = SL2) -> tuple:
    """Double-coset invariant: minimal valuations of diag(1,2^-j) g diag(1,2^i)."""
    e = level_exponent(flavor)
    out = []
    for j in range(e + 1):
        for i in range(e + 1):
            m = Mat2(g.a, g.b * 2**i, g.c / 2**j, g.d * Fraction(2) ** (i - j), GL2, check=False)
            out.append(m.minval())
    if flavor == GL2:
        out.append(val2(g.det()))
    return tuple(out)


@lru_cache(maxsize=None)
def _profile_index(flavor: str, bound: int) -> dict[tuple, list[CosetLabel]]:
    index: dict[tuple, list[CosetLabel]] = {}
    for lab in all_labels(flavor, bound):
        index.setdefault(profile(rep_matrix(lab), flavor), []).append(lab)
    return index


def _classify_uncentered(g: Mat2, flavor: str, bound: int) -> CosetLabel | None:
    for lab in _profile_index(flavor, bound).get(profile(g, flavor), []):
        if label_orbit(lab).tail_for(g) is not None:
            return lab
    return None


_CLASSIFY_CACHE: dict[tuple, CosetLabel] = {}


def classify(el: MetaElement | Mat2, flavor: str | None = None, bound: int | None = None) -> CosetLabel:
    """The label L with el in K0*rep(L)*K0; raises OutOfWindowError otherwise."""
    g = el.g if isinstance(el, MetaElement) else el
    flavor = flavor or g.flavor
    bound = window() if bound is None else bound
    key = (flavor, bound, right_key(g, flavor))
    hit = _CLASSIFY_CACHE.get(key)
    if hit is not None:
        return hit
    if flavor == SL2:
        found = _classify_uncentered(g, SL2, bound)
    else:
        found = None
        g = g.as_gl2()
        mv, vd = g.minval(), val2(g.det())
        for m in dict.fromkeys((mv, vd - mv)):
            lab = _classify_uncentered(g.scale(Fraction(2) ** -m), GL2, bound)
            if lab is not None:
                found = CosetLabel(GL2, lab.shape, lab.n, m)
                break
    if found is None:
        raise OutOfWindowError(f"{g!r} is outside the window |n| <= {bound}")
    _CLASSIFY_CACHE[key] = found
    return found


def locate(g: Mat2, label: CosetLabel) -> Mat2 | None:
    """Tail k_j with g in K0*rep*k_j (rep includes the center), or None."""
    if label.flavor == GL2 and label.center:
        g = g.scale(Fraction(2) ** -label.center)
    return label_orbit(label).tail_for(g)


# witness search


def _affine_solve(mat_of, flavor: str, bits: int) -> Fraction | None:
    """Find integer b in [0, 2^bits) with mat_of(b) in K0, or None."""
    for b in range(1 << bits):
        if in_K0(mat_of(b), flavor):
            return Fraction(b)
    return None


def witness_membership(A: Mat2, B: Mat2, flavor: str = SL2, bits: int = 10) -> Mat2 | None:
    """Search k in K0 with A*k*B^-1 in K0 (so K0*A*K0 == K0*B*K0).

    Tries the identity, the one-parameter families x(b), y(2^e b) and h(u) x(b)
    through residue brute force, then a bounded grid x(s) h(u) y(2^e t).
    Returns None when nothing is found; that is not a proof of non-membership.
    """
    Binv = B.inv()
    one = IDENTITY if flavor == SL2 else IDENTITY.as_gl2()
    if in_K0(A * Binv, flavor):
        return one
    lvl = 2 ** level_exponent(flavor)

    def cast(m: Mat2) -> Mat2:
        return m.as_gl2() if flavor == GL2 else m

    for fam in (lambda b: x(b), lambda b: y(lvl * b)):
        b = _affine_solve(lambda b: A * cast(fam(b)) * Binv, flavor, bits)
        if b is not None:
            return cast(fam(b))
    for u in range(1, 64, 2):
        for sign in (1, -1):
            hu = cast(h(sign * u)) if flavor == SL2 else Mat2(sign * u, 0, 0, 1, GL2)
            b = _affine_solve(lambda b: A * hu * cast(x(b)) * Binv, flavor, 6)
            if b is not None:
                return hu * cast(x(b))
    for s in range(-8, 9):
        for u in (1, -1, 3, -3, 5, -5, 7, -7):
            hu = cast(h(u)) if flavor == SL2 else Mat2(u, 0, 0, 1, GL2)
            for t in range(-8, 9):
                k = cast(x(s)) * hu * cast(y(lvl * t))
                if in_K0(A * k * Binv, flavor):
                    return k
    return None


# transcribed decomposition tables


@dataclass(frozen=True)
class TableEntry:
    """One item of the decomposition tables, as a function of n."""

    item: str
    flavor: str
    shape: str
    n_range: tuple[int | None, int | None]
    sign: int  # parameter of the label is sign*n
    right: object  # n -> list of coset matrices alpha with cosets K0*alpha
    left: object  # n -> list of matrices beta with cosets beta*K0
    count: object  # n -> expected number of single cosets


def _r(k: int) -> range:
    return range(1 << k) if k >= 0 else range(0)


def _sl2_table() -> list[TableEntry]:
    two = Fraction(2)
    W = lambda n: w(two**-n)  # noqa: E731
    H = lambda n: h(two**n)  # noqa: E731
    Y = y
    X = x
    return [
        TableEntry("a", SL2, "H", (0, None), 1,
                   lambda n: [H(n) * Y(8 * s) for s in _r(2 * n)],
                   lambda n: [X(s) * H(n) for s in _r(2 * n)],
                   lambda n: 2 ** (2 * n)),
        TableEntry("b", SL2, "H", (1, None), -1,
                   lambda n: [H(-n) * X(s) for s in _r(2 * n)],
                   lambda n: [Y(8 * s) * H(-n) for s in _r(2 * n)],
                   lambda n: 2 ** (2 * n)),
        TableEntry("c", SL2, "W", (2, None), 1,
                   lambda n: [W(n) * Y(8 * s) for s in _r(2 * n - 3)],
                   lambda n: [Y(8 * s) * W(n) for s in _r(2 * n - 3)],
                   lambda n: 2 ** (2 * n - 3)),
        TableEntry("d", SL2, "W", (1, 1), 1,
                   lambda n: [W(1) * X(s) for s in _r(1)],
                   lambda n: [X(s) * W(1) for s in _r(1)],
                   lambda n: 2),
        TableEntry("e", SL2, "W", (0, None), -1,
                   lambda n: [W(-n) * X(s) for s in _r(2 * n + 3)],
                   lambda n: [X(s) * W(-n) for s in _r(2 * n + 3)],
                   lambda n: 2 ** (2 * n + 3)),
        TableEntry("f", SL2, "Y4", (None, None), 1,
                   lambda n: [Y(4)],
                   lambda n: [Y(4)],
                   lambda n: 1),
        TableEntry("g", SL2, "H*Y4", (1, None), 1,
                   lambda n: [H(n) * Y(4 + 8 * s) for s in _r(2 * n)],
                   lambda n: [X(s) * H(n) * Y(4) for s in _r(2 * n)],
                   lambda n: 2 ** (2 * n)),
        TableEntry("h", SL2, "Y4*H", (1, None), -1,
                   lambda n: [Y(4) * H(-n) * X(s) for s in _r(2 * n)],
                   lambda n: [Y(4 + 8 * s) * H(-n) for s in _r(2 * n)],
                   lambda n: 2 ** (2 * n)),
        TableEntry("i", SL2, "W*Y4", (2, None), 1,
                   lambda n: [W(n) * Y(4 + 8 * s) for s in _r(2 * n - 3)],
                   lambda n: [Y(8 * s) * W(n) * Y(4) for s in _r(2 * n - 3)],
                   lambda n: 2 ** (2 * n - 3)),
        TableEntry("j", SL2, "Y4*W", (2, None), 1,
                   lambda n: [Y(4) * W(n) * Y(8 * s) for s in _r(2 * n - 3)],
                   lambda n: [Y(4 + 8 * s) * W(n) for s in _r(2 * n - 3)],
                   lambda n: 2 ** (2 * n - 3)),
        TableEntry("k", SL2, "Y4*W*Y4", (2, None), 1,
                   lambda n: [Y(4) * W(n) * Y(4 + 8 * s) for s in _r(2 * n - 3)],
                   lambda n: [Y(4 + 8 * s) * W(n) * Y(4) for s in _r(2 * n - 3)],
                   lambda n: 2 ** (2 * n - 3)),
        TableEntry("l", SL2, "Y2", (None, None), 1,
                   lambda n: [Y(2) * X(s) for s in _r(1)],
                   lambda n: [X(s) * Y(2) for s in _r(1)],
                   lambda n: 2),
        TableEntry("m", SL2, "Y2*W", (1, 1), 1,
                   lambda n: [Y(2) * W(1) * X(s) for s in _r(1)],
                   lambda n: [X(s) * Y(2) * W(1) for s in _r(1)],
                   lambda n: 2),
        TableEntry("n", SL2, "W*Y2", (1, 1), 1,
                   lambda n: [W(1) * Y(2) * X(s) for s in _r(1)],
                   lambda n: [X(s) * W(1) * Y(2) for s in _r(1)],
                   lambda n: 2),
        TableEntry("o", SL2, "Y2*W*Y2", (1, 1), 1,
                   lambda n: [Y(2) * W(1) * Y(2)],
                   lambda n: [Y(2) * W(1) * Y(2)],
                   lambda n: 1),
        TableEntry("p", SL2, "Y2*W", (2, None), 1,
                   lambda n: [Y(2) * W(n) * Y(8 * s) for s in _r(2 * n - 2)],
                   lambda n: [Y(2 + 4 * s) * W(n) for s in _r(2 * n - 2)],
                   lambda n: 2 ** (2 * n - 2)),
        TableEntry("q", SL2, "W*Y2", (2, None), 1,
                   lambda n: [W(n) * Y(2 + 4 * s) for s in _r(2 * n - 2)],
                   lambda n: [Y(8 * s) * W(n) * Y(2) for s in _r(2 * n - 2)],
                   lambda n: 2 ** (2 * n - 2)),
        TableEntry("r", SL2, "H*Y2", (1, None), 1,
                   lambda n: [H(n) * Y(2 + 4 * s) for s in _r(2 * n)]
                   + [Y(4) * H(n) * Y(2 + 4 * s) for s in _r(2 * n)],
                   lambda n: [X(s) * H(n) * Y(2) for s in _r(2 * n + 1)],
                   lambda n: 2 ** (2 * n + 1)),
        TableEntry("s", SL2, "Y2*H", (1, None), -1,
                   lambda n: [Y(2) * H(-n) * X(s) for s in _r(2 * n + 1)],
                   lambda n: [Y(2 + 4 * s) * H(-n) for s in _r(2 * n)]
                   + [Y(2 + 4 * s) * H(-n) * Y(4) for s in _r(2 * n)],
                   lambda n: 2 ** (2 * n + 1)),
        TableEntry("t", SL2, "Y2*W*Y2", (2, None), 1,
                   lambda n: [Y(2) * W(n) * Y(2 + 4 * s) for s in _r(2 * n - 2)]
                   + [Y(6) * W(n) * Y(2 + 4 * s) for s in _r(2 * n - 2)],
                   lambda n: [Y(2 + 4 * s) * W(n) * Y(2) for s in _r(2 * n - 2)]
                   + [Y(2 + 4 * s) * W(n) * Y(6) for s in _r(2 * n - 2)],
                   lambda n: 2 * 2 ** (2 * n - 2)),
    ]


def _gl2_table() -> list[TableEntry]:
    two = Fraction(2)
    D = lambda n: d(two**n)  # noqa: E731
    W = lambda n: w_gl(two**n)  # noqa: E731
    X = lambda s: x(s).as_gl2()  # noqa: E731
    Y = lambda t: y(t).as_gl2()  # noqa: E731
    return [
        TableEntry("a", GL2, "D", (0, None), 1,
                   lambda n: [D(n) * Y(4 * s) for s in _r(n)],
                   lambda n: [X(s) * D(n) for s in _r(n)],
                   lambda n: 2**n),
        TableEntry("b", GL2, "D", (1, None), -1,
                   lambda n: [D(-n) * X(s) for s in _r(n)],
                   lambda n: [Y(4 * s) * D(-n) for s in _r(n)],
                   lambda n: 2**n),
        TableEntry("c", GL2, "W", (2, None), 1,
                   lambda n: [W(n) * Y(4 * s) for s in _r(n - 2)],
                   lambda n: [Y(4 * s) * W(n) for s in _r(n - 2)],
                   lambda n: 2 ** (n - 2)),
        TableEntry("d", GL2, "W", (None, 1), 1,
                   lambda n: [W(n) * X(s) for s in _r(2 - n)],
                   lambda n: [X(s) * W(n) for s in _r(2 - n)],
                   lambda n: 2 ** (2 - n)),
    ]


SL2_TABLE = {e.item: e for e in _sl2_table()}
GL2_TABLE = {e.item: e for e in _gl2_table()}


def table(flavor: str = SL2) -> dict[str, TableEntry]:
    return SL2_TABLE if flavor == SL2 else GL2_TABLE


def entry_params(entry: TableEntry, bound: int = 4) -> list[int | None]:
    lo, hi = entry.n_range
    if lo is None and hi is None:
        return [None]
    lo = -bound if lo is None else lo
    hi = bound if hi is None else hi
    return [n for n in range(lo, hi + 1) if abs(n) <= bound]


def entry_label(entry: TableEntry, n: int | None) -> CosetLabel:
    return CosetLabel(entry.flavor, entry.shape, None if n is None else entry.sign * n)


def find_entry(label: CosetLabel) -> tuple[TableEntry, int | None]:
    for entry in table(label.flavor).values():
        if entry.shape != label.shape:
            continue
        if label.n is None:
            return entry, None
        n = label.n * entry.sign
        lo, hi = entry.n_range
        if (lo is None or n >= lo) and (hi is None or n <= hi):
            return entry, n
    raise KeyError(f"no table entry for {label}")


@dataclass
class CosetDecomposition:
    label: CosetLabel
    rep: Mat2
    right_tails: list[Mat2]
    left_tails: list[Mat2]
    item: str | None = None

    @property
    def count(self) -> int:
        return len(self.right_tails)

    def to_json(self) -> dict:
        return {
            "schema": "metahecke.decomposition/1",
            "label": str(self.label),
            "item": self.item,
            "rep": self.rep.to_json(),
            "right_tails": [t.to_json() for t in self.right_tails],
            "left_tails": [t.to_json() for t in self.left_tails],
            "count": self.count,
        }


def decomposition_table(label: CosetLabel | str, flavor: str = SL2) -> CosetDecomposition:
    """The transcribed table entry for ``label``, tails normalized against rep."""
    if isinstance(label, str):
        label = parse_label(label, flavor)
    entry, n = find_entry(label)
    rep = rep_matrix(CosetLabel(label.flavor, label.shape, label.n))
    rinv = rep.inv()
    right = [rinv * a for a in entry.right(n)]
    left = [b * rinv for b in entry.left(n)]
    return CosetDecomposition(label, rep, right, left, entry.item)


def orbit_decomposition(label: CosetLabel) -> CosetDecomposition:
    """Decomposition derived from the K0-orbit; available for every label."""
    rep = rep_matrix(CosetLabel(label.flavor, label.shape, label.n))
    return CosetDecomposition(label, rep, right_tails(label), left_tails(label))


# verification

CERTIFIED = "certified"
FAILED = "failed"
INCONCLUSIVE = "inconclusive"


@dataclass
class VerificationReport:
    label: CosetLabel
    item: str | None
    status: str
    count: int
    expected_count: int
    orbit_count: int
    distinct: bool
    members: int
    witness_methods: dict[str, int]
    problems: list[str]

    def to_json(self) -> dict:
        return {
            "label": str(self.label),
            "item": self.item,
            "status": self.status,
            "count": self.count,
            "expected_count": self.expected_count,
            "orbit_count": self.orbit_count,
            "distinct": self.distinct,
            "members": self.members,
            "witness_methods": self.witness_methods,
            "problems": self.problems,
        }


def _member_witness(rep: Mat2, alpha: Mat2, flavor: str, orbit: Orbit, search: bool):
    """k in K0 with rep^-1 * k * alpha in K0, plus the method that found it."""
    if search:
        k = witness_membership(rep, alpha, flavor, bits=8)
        if k is not None:
            # rep k alpha^-1 in K0  <=>  rep^-1 k' alpha in K0 with k' = (rep k alpha^-1)^-1
            kk = (rep * k * alpha.inv()).inv()
            if in_K0(kk, flavor) and in_K0(rep.inv() * kk * alpha, flavor):
                return kk, "search"
    tail = orbit.tail_for(alpha)
    if tail is None:
        return None, None
    k1 = alpha * (rep * tail).inv()
    kk = k1.inv()
    if in_K0(kk, flavor) and in_K0(rep.inv() * kk * alpha, flavor):
        return kk, "orbit"
    return None, None


def verify_decomposition(label: CosetLabel | str, flavor: str = SL2, search: bool = False) -> VerificationReport:
    """Certify distinctness, membership and count of a transcribed table entry.

    Membership witnesses come from the bounded search when ``search`` is set,
    otherwise (and as fallback) from the K0-orbit, and every witness is
    re-checked by exact membership tests.  The orbit size also certifies
    that no single coset is missing.
    """
    if isinstance(label, str):
        label = parse_label(label, flavor)
    flavor = label.flavor
    entry, n = find_entry(label)
    rep = rep_matrix(label)
    alphas = entry.right(n)
    betas = entry.left(n)
    expected = entry.count(n)
    orbit = label_orbit(label)
    problems: list[str] = []

    rkeys = [right_key(a, flavor) for a in alphas]
    lkeys = [left_key(b, flavor) for b in betas]
    distinct = len(set(rkeys)) == len(rkeys) and len(set(lkeys)) == len(lkeys)
    if not distinct:
        problems.append("listed cosets are not pairwise distinct")

    methods: dict[str, int] = {}
    members = 0
    for a in alphas:
        kk, how = _member_witness(rep, a, flavor, orbit, search)
        if kk is None:
            problems.append(f"right coset K0*{a!r} not in the double coset")
        else:
            members += 1
            methods[how] = methods.get(how, 0) + 1
    rinv_orbit = right_orbit(rep.inv(), flavor)
    for b in betas:
        if rinv_orbit.tail_for(b.inv()) is None:
            problems.append(f"left coset {b!r}*K0 not in the double coset")
        else:
            members += 1
            methods["orbit"] = methods.get("orbit", 0) + 1

    if len(alphas) != expected or len(betas) != expected:
        problems.append(f"listed {len(alphas)}/{len(betas)} cosets, expected {expected}")
    if len(orbit) != expected:
        problems.append(f"double coset has {len(orbit)} right cosets, expected {expected}")
    status = CERTIFIED if not problems else FAILED
    return VerificationReport(label, entry.item, status, len(alphas), expected, len(orbit),
                              distinct, members, methods, problems)


def table_labels(flavor: str = SL2, bound: int = 4) -> Iterator[tuple[str, CosetLabel]]:
    for item, entry in table(flavor).items():
        for n in entry_params(entry, bound):
            yield item, entry_label(entry, n)


def verify_all(bound: int = 4, search: bool = False) -> list[VerificationReport]:
    reports = []
    for flavor in (SL2, GL2):
        for _, lab in table_labels(flavor, bound):
            reports.append(verify_decomposition(lab, flavor, search=search))
    return reports


def format_matrix(m: Mat2) -> str:
    a, b, c, dd = (format_dyadic(v) for v in m.entries())
    return f"[[{a},{b}],[{c},{dd}]]"
