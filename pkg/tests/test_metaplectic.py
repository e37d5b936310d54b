from fractions import Fraction

import pytest
from hypothesis import given

from metahecke.metaplectic import (
    CENTRAL,
    GL2,
    IDENTITY,
    META_ONE,
    Mat2,
    MetaElement,
    d,
    h,
    lift,
    meta_inv,
    meta_mul,
    sigma2,
    w,
    w_gl,
    x,
    y,
    z,
)

from .strategies import meta, sl2


def test_builders():
    assert x(2) * x(3) == x(5)
    assert w(1) * w(1) == Mat2(-1, 0, 0, -1)
    assert h(2).inv() == h(Fraction(1, 2))
    assert d(4).det() == 4 and z(2).det() == 4
    assert w_gl(4).flavor == GL2 and w_gl(4).det() == 4
    with pytest.raises(ValueError):
        h(0)
    with pytest.raises(ValueError):
        Mat2(1, 1, 1, 1)


def test_parse_and_json():
    g = Mat2.parse("[[0,1/2],[-2,0]]")
    assert g == w(Fraction(1, 2))
    assert Mat2.from_json(g.to_json()) == g


@given(sl2(), sl2(), sl2())
def test_cocycle_identity(g, k, m):
    assert sigma2(g, k) * sigma2(g * k, m) == sigma2(g, k * m) * sigma2(k, m)


@given(sl2())
def test_sigma_normalized(g):
    assert sigma2(IDENTITY, g) == 1 == sigma2(g, IDENTITY)


@given(meta, meta, meta)
def test_cover_associative(a, b, c):
    assert meta_mul(meta_mul(a, b), c) == meta_mul(a, meta_mul(b, c))


@given(meta)
def test_cover_inverse(a):
    assert meta_mul(a, meta_inv(a)) == META_ONE
    assert meta_mul(meta_inv(a), a) == META_ONE


@given(meta)
def test_sign_is_central(a):
    minus = MetaElement(IDENTITY, -1)
    assert meta_mul(minus, a) == meta_mul(a, minus)


def test_unipotent_lifts_are_homomorphic():
    for s in (Fraction(1, 4), 3, -5):
        for t in (Fraction(1, 8), 7):
            assert lift(x(s)) * lift(x(t)) == lift(x(s + t))
            assert lift(y(s)) * lift(y(t)) == lift(y(s + t))


def test_central_element_order_four():
    c2 = CENTRAL * CENTRAL
    assert c2.g == IDENTITY and c2.eps == -1
    assert (c2 * c2) == META_ONE


def test_cover_rejects_gl2():
    with pytest.raises(ValueError):
        MetaElement(d(2))
