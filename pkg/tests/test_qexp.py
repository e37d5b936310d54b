import json
import re
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from metahecke.cyclo8 import SQRT2, Cyclo8
from metahecke.dyadic import kronecker2
from metahecke.qexp import (
    FIXTURE_NAMES,
    QExpansion,
    ScaledQExpansion,
    block_eigen_checks,
    export_fixtures,
    fixture_blocks,
    iota_sign_for_weight,
    legendre,
    load_fixture,
    load_fixtures,
    load_qexp,
    minus_member,
    p8_coeff,
    plus_member,
    project_complement,
    project_plus,
    proportionality,
    t_p2,
    u4,
)

# printed expansions, kept verbatim as TeX so the bundled JSON is checked
# against an independent parse
PRINTED = {
    "f1": r"q+ q^5 - 2q^6 - q^9 - q^{17} + 2q^{25} + 2q^{30} + 2q^{42} - 3q^{45} + O(q^{50})",
    "f2": r"q^4 - 2q^{11} - 2q^{16} + 2q^{19} + q^{20} - 2q^{24} + 3q^{28} + 2q^{35} - q^{36} + O(q^{40})",
    "f3": r"q^7 - q^{11} - 2q^{16} + q^{19} + 2q^{28} + q^{35} - 2q^{39} - q^{43} + 2q^{44} - q^{47} + O(q^{50})",
    "g1": r"q - 2q^5 + q^6 + 2q^9 - q^{17} - q^{25} - 3q^{26} - 4q^{30} + 3q^{38} + 5q^{42} + O(q^{50})",
    "g2": r"q^4 + q^7 - q^{16} - 2q^{20} - 3q^{23} + q^{24} - q^{28} + 2q^{36} + q^{39} + 2q^{47} + O(q^{50})",
    "h1": r"q^2 + 2q^{10} - 3q^{13} - q^{14} - 2q^{18} - q^{21} + 2q^{22} + q^{29} + O(q^{30})",
    "h2": r"q^3 - q^8 + q^{12} - q^{19} - q^{27} - q^{32} - 2q^{40} + q^{48} + O(q^{50})",
    "k1": r"q^2 - q^{10} - q^{14} + q^{18} + 2q^{21} - q^{22} - 2q^{29} - 2q^{33} - q^{34} + 2q^{37} + q^{38} - 2q^{41} + O(q^{50})",
}

_TERM = re.compile(r"([+-]?)\s*(\d*)\s*q(?:\^\{?(\d+)\}?)?")


def parse_printed(text: str) -> tuple[int, dict[int, int]]:
    body, order = text.split("O(q^{")
    N = int(order.rstrip("})")) - 1
    out = {}
    for sign, c, e in _TERM.findall(body.replace(" ", "")):
        out[int(e or 1)] = (-1 if sign == "-" else 1) * int(c or 1)
    return N, out


def qe(coeffs: dict, N: int = 40, k: int = 1) -> QExpansion:
    return QExpansion.make(k, 4, N, coeffs)


sparse = st.builds(
    lambda k, N, d: QExpansion.make(k, 4, N, {n: v for n, v in d.items() if n <= N}),
    st.integers(1, 3), st.integers(1, 60),
    st.dictionaries(st.integers(1, 60), st.fractions(-9, 9, max_denominator=5), max_size=12),
)


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixture_matches_print(name):
    N, coeffs = parse_printed(PRINTED[name])
    f = load_fixture(name)
    assert (f.k, f.level, f.N) == (1, 152, N)
    assert f.as_dict() == {n: Fraction(v) for n, v in coeffs.items()}


def test_fixture_spot_values():
    assert load_fixture("f1").a(5) == 1
    assert load_fixture("h2").a(8) == -1
    assert load_fixture("k1").a(2) == 1
    with pytest.raises(KeyError):
        load_fixture("f4")
    with pytest.raises(IndexError):
        load_fixture("h1").a(35)


def test_blocks():
    blocks = fixture_blocks()
    assert sorted(len(v) for v in blocks.values()) == [1, 2, 2, 3]
    assert sum(len(v) for v in blocks.values()) == 8


def test_u4():
    assert u4(qe({1: 1, 4: 1, 8: 1})) == qe({1: 1, 2: 1}, 10)
    assert u4(qe({})).is_zero()
    k1 = load_fixture("k1")
    assert u4(k1).is_zero() and u4(k1).N == 12


def test_membership_examples():
    fx = load_fixtures()
    assert plus_member(fx["f2"])
    assert minus_member(fx["k1"]) and not plus_member(fx["k1"])
    assert sorted(n for n, f in fx.items() if plus_member(f)) == ["f2", "f3", "g2", "h2"]


def test_minus_condition_on_fixtures():
    # forms outside the plus space whose indices all avoid (-1)^k n = 0, 1 mod 4
    fx = load_fixtures()
    assert sorted(n for n, f in fx.items() if minus_member(f)) == ["f1", "g1", "h1", "k1"]


def test_projection_examples():
    fx = load_fixtures()
    assert project_plus(fx["f2"]) == fx["f2"]
    assert project_plus(fx["k1"]).is_zero()


@given(sparse)
def test_projection_partition(f):
    p, c = project_plus(f), project_complement(f)
    assert p + c == f
    assert project_plus(p) == p
    assert not set(p.as_dict()) & set(c.as_dict())
    assert plus_member(f) == (p == f)
    assert minus_member(f) == p.is_zero()


@given(sparse)
def test_p8_square(f):
    assert p8_coeff(p8_coeff(f)) == f.scale(2)


@given(sparse)
def test_p8_vs_projections(f):
    lhs = p8_coeff(f)
    kappa = kronecker2(2 * f.k + 1)
    rescaled = ScaledQExpansion(lhs.scalar * SQRT2.inv() * kappa, lhs.body)
    assert rescaled == project_plus(f) - project_complement(f)


def test_p8_examples():
    fx = load_fixtures()
    out = p8_coeff(fx["f2"])
    assert out == ScaledQExpansion(SQRT2 * kronecker2(3), fx["f2"])
    assert p8_coeff(fx["k1"]) == ScaledQExpansion(-SQRT2 * kronecker2(3), fx["k1"])
    assert out.coeff(4) == Cyclo8(-1) * SQRT2


def test_t_p2_basics():
    assert t_p2(qe({}), 3).is_zero()
    with pytest.raises(ValueError):
        t_p2(qe({1: 1}), 9)
    with pytest.raises(ValueError):
        t_p2(qe({1: 1}), 2)
    assert legendre(2, 3) == -1 and legendre(4, 5) == 1 and legendre(10, 5) == 0


def test_t_p2_formula_by_hand():
    # k = 1, p = 3: b_1 = a_9 + (-1/3) a_1, b_9 = a_81 + 0 + 3^(2k-1) a_1
    f = QExpansion.make(1, 4, 90, {1: 2, 9: 5, 81: 7})
    b = t_p2(f, 3)
    assert b.N == 10
    assert b.a(1) == 5 + legendre(-1, 3) * 2
    assert b.a(9) == 7 + 3 * 2


@pytest.mark.parametrize("name", FIXTURE_NAMES)
@pytest.mark.parametrize("p", [3, 5])
def test_eigen_proportionality(name, p):
    f = load_fixture(name)
    img = t_p2(f, p)
    base = f.truncate(img.N)
    lam = proportionality(base, img)
    if base.is_zero():
        assert img.is_zero()
    else:
        assert lam is not None
        assert img.agrees(base.scale(lam))


def test_block_constants_shared():
    assert all(b.consistent for b in block_eigen_checks())


def test_hecke_commutes_with_projection():
    for f in load_fixtures().values():
        for p in (3, 5):
            assert t_p2(project_plus(f), p) == project_plus(t_p2(f, p))


def test_iota_sign():
    assert [iota_sign_for_weight(k) for k in (1, 2, 3)] == [1, -1, 1]


def test_json_and_export(tmp_path):
    paths = export_fixtures(tmp_path)
    assert len(paths) == 9
    k1 = load_qexp(tmp_path / "k1.json")
    assert k1 == load_fixture("k1")
    data = json.loads((tmp_path / "k1.json").read_text())
    assert data["schema"] == "metahecke.qexpansion/1"


def test_str():
    assert str(qe({1: 1, 5: -2}, 9)) == "q - 2q^5 + O(q^10)"


def test_validation():
    with pytest.raises(ValueError):
        QExpansion.make(1, 4, 5, {0: 1})
