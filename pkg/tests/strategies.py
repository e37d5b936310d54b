"""Hypothesis strategies shared by the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from metahecke.metaplectic import Mat2, MetaElement, h, w, x, y

dyadic = st.builds(lambda n, e: Fraction(n) * Fraction(2) ** e,
                   st.integers(-40, 40), st.integers(-4, 4))
unit_rat = st.builds(lambda n, e, s: s * Fraction(n) * Fraction(2) ** e,
                     st.integers(1, 40), st.integers(-4, 4), st.sampled_from([1, -1])).filter(lambda t: t != 0)
odd = st.integers(-31, 31).filter(lambda n: n % 2)


@st.composite
def sl2(draw) -> Mat2:
    """Words in x, y, h, w with dyadic parameters."""
    g = Mat2(1, 0, 0, 1)
    for _ in range(draw(st.integers(1, 4))):
        kind = draw(st.sampled_from("xyhw"))
        if kind == "x":
            g = g * x(draw(dyadic))
        elif kind == "y":
            g = g * y(draw(dyadic))
        elif kind == "h":
            g = g * h(draw(unit_rat))
        else:
            g = g * w(draw(unit_rat))
    return g


@st.composite
def k0_8(draw) -> Mat2:
    """Elements of K0(8): x(s) h(u) y(8t) with integral s, t and odd u."""
    s = draw(st.integers(-64, 64))
    t = draw(st.integers(-64, 64))
    u = Fraction(draw(odd), draw(odd))
    return x(s) * h(u) * y(8 * t)


meta = st.builds(MetaElement, sl2(), st.sampled_from([1, -1]))
meta_k0 = st.builds(MetaElement, k0_8(), st.sampled_from([1, -1]))
