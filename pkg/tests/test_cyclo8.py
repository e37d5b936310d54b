import cmath
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from metahecke.cyclo8 import INV_SQRT2, ONE, SQRT2, ZERO, ZETA8, Cyclo8, i4, zeta_from_iota

rat = st.fractions(min_value=-20, max_value=20, max_denominator=12)
cyc = st.builds(Cyclo8, rat, rat, rat, rat)


def test_roots():
    assert ZETA8 ** 8 == ONE and ZETA8 ** 4 == -ONE
    assert SQRT2 * SQRT2 == Cyclo8(2)
    assert SQRT2 * INV_SQRT2 == ONE
    assert i4(1) * i4(1) == -ONE and i4(-1) == -i4(1)
    assert zeta_from_iota(i4(1)) == ZETA8
    assert zeta_from_iota(i4(-1)) == ZETA8.conj()


@given(cyc, cyc, cyc)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == ZERO


@given(cyc)
def test_inverse_and_conj(a):
    if not a.is_zero():
        assert a * a.inv() == ONE
        assert (ONE / a) * a == ONE
    assert a.conj().conj() == a
    r = a * a.conj()
    assert r.conj() == r
    assert a.norm() == (r * r.galois(3)).c[0]


@given(cyc, cyc)
def test_complex_embedding_is_homomorphism(a, b):
    assert cmath.isclose(complex(a * b), complex(a) * complex(b), abs_tol=1e-6)
    assert cmath.isclose(complex(a.conj()), complex(a).conjugate(), abs_tol=1e-9)


@given(cyc)
def test_json_roundtrip(a):
    assert Cyclo8.from_json(a.to_json()) == a


def test_coerce():
    assert Cyclo8.coerce(Fraction(1, 2)) + Fraction(1, 2) == ONE
