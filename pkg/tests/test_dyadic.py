from fractions import Fraction
from functools import lru_cache
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from metahecke.dyadic import (
    UnitClass,
    congruent,
    format_dyadic,
    hilbert2,
    is_integral,
    kronecker2,
    parse_rational,
    reduce_mod,
    residue,
    unit_part,
    val2,
)

nonzero = st.fractions(max_denominator=1 << 10).filter(lambda x: x != 0)


def test_val2_basics():
    assert val2(8) == 3
    assert val2(Fraction(3, 4)) == -2
    assert val2(-12) == 2
    assert val2(0) == float("inf")


def test_unit_part_and_residue():
    assert unit_part(Fraction(-24)) == -3
    assert residue(Fraction(1, 3), 3) == 3  # 3 * 3 = 9 = 1 mod 8
    assert residue(-1, 3) == 7
    assert is_integral(Fraction(5, 3)) and not is_integral(Fraction(1, 2))


def test_reduce_mod_and_congruent():
    assert reduce_mod(Fraction(1, 3), 3) == 3
    assert congruent(Fraction(1, 3), 11, 3)
    assert not congruent(1, 3, 3)


def test_unit_class():
    assert UnitClass.of(Fraction(-1, 3)).mod8() == 5
    with pytest.raises(ValueError):
        UnitClass.of(2)


@given(nonzero)
def test_unit_part_is_unit(x):
    u = unit_part(x)
    assert val2(u) == 0
    assert u * Fraction(2) ** val2(x) == x


@given(nonzero)
def test_format_parse_roundtrip(x):
    assert parse_rational(format_dyadic(x)) == x


def test_parse_forms():
    assert parse_rational("3*2^-2") == Fraction(3, 4)
    assert parse_rational("-1/4") == Fraction(-1, 4)
    assert parse_rational("5/3*2^4") == Fraction(80, 3)
    with pytest.raises(ValueError):
        parse_rational("1/")


def test_kronecker2():
    assert [kronecker2(m) for m in (1, 3, 5, 7, -1, 9)] == [1, -1, -1, 1, 1, 1]
    with pytest.raises(ValueError):
        kronecker2(4)


# brute-force oracle: (a, b)_2 = 1 iff z^2 = a x^2 + b y^2 has a primitive
# solution mod 2^5, after reducing a, b to square classes 2^{0,1} * (u mod 8)

MOD = 32


def _square_class(q: Fraction) -> int:
    return (2 if val2(q) % 2 else 1) * residue(unit_part(q), 3)


@lru_cache(maxsize=None)
def _oracle(a: int, b: int) -> int:
    squares = {z * z % MOD for z in range(MOD)}
    odd_squares = {z * z % MOD for z in range(1, MOD, 2)}
    for xx, yy in product(range(MOD), repeat=2):
        v = (a * xx * xx + b * yy * yy) % MOD
        if (xx % 2 or yy % 2) and v in squares:
            return 1
        if v in odd_squares:
            return 1
    return -1


GRID = [Fraction(n) * Fraction(2) ** e for n in range(-15, 16) if n for e in range(-3, 4)]


def test_hilbert_matches_oracle_on_grid():
    for a in GRID:
        for b in GRID[::3]:
            assert hilbert2(a, b) == _oracle(_square_class(a), _square_class(b)), (a, b)


@given(nonzero, nonzero, nonzero)
def test_hilbert_bimultiplicative(a, b, c):
    assert hilbert2(a * b, c) == hilbert2(a, c) * hilbert2(b, c)


@given(nonzero, nonzero)
def test_hilbert_symmetric_and_norm(a, b):
    assert hilbert2(a, b) == hilbert2(b, a)
    assert hilbert2(a, -a) == 1
    if a != 1:
        assert hilbert2(a, 1 - a) == 1


def test_hilbert_zero_raises():
    with pytest.raises(ValueError):
        hilbert2(0, 3)
