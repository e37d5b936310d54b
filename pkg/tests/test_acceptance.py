"""Acceptance suite: one printed PASS/FAIL line per criterion.

Sample sizes and seeds are pinned here; every check is exact.
"""

import random
import time
from fractions import Fraction

import pytest

from metahecke import cosets, hecke, qexp
from metahecke.characters import CHI1, CHI2, make_character
from metahecke.cosets import base_point, parse_label
from metahecke.cyclo8 import ONE, SQRT2, i4
from metahecke.dyadic import kronecker2
from metahecke.metaplectic import IDENTITY, MetaElement, Mat2, h, lift, meta_mul, sigma2, w, x, y

SEED = 20240
COCYCLE_TRIPLES = 10_000
CHARACTER_PAIRS = 10_000
RANDOM_EXPANSIONS = 1_000
COCYCLE_SECONDS = 10.0


@pytest.fixture
def report(capsys):
    def emit(number: int, title: str, ok: bool, detail: str = ""):
        with capsys.disabled():
            tail = f" ({detail})" if detail else ""
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}{tail}")
        assert ok, detail
    return emit


def _dyadic(rng):
    return Fraction(rng.randint(-64, 64)) * Fraction(2) ** rng.randint(-5, 5)


def _unit(rng):
    while True:
        t = _dyadic(rng)
        if t:
            return t


def _random_sl2(rng) -> Mat2:
    g = IDENTITY
    for _ in range(rng.randint(1, 4)):
        kind = rng.choice("xyhw")
        g = g * {"x": lambda: x(_dyadic(rng)), "y": lambda: y(_dyadic(rng)),
                 "h": lambda: h(_unit(rng)), "w": lambda: w(_unit(rng))}[kind]()
    return g


def _random_k0(rng) -> MetaElement:
    u = Fraction(rng.randrange(-63, 64, 2), rng.randrange(-63, 64, 2))
    g = x(rng.randint(-200, 200)) * h(u) * y(8 * rng.randint(-200, 200))
    return MetaElement(g, rng.choice([1, -1]))


def test_c1_cocycle(report):
    rng = random.Random(SEED)
    start = time.perf_counter()
    bad = 0
    for _ in range(COCYCLE_TRIPLES):
        a, b, c = (_random_sl2(rng) for _ in range(3))
        if sigma2(a, b) * sigma2(a * b, c) != sigma2(a, b * c) * sigma2(b, c):
            bad += 1
    secs = time.perf_counter() - start
    report(1, "cocycle identity", bad == 0 and secs < COCYCLE_SECONDS,
           f"{COCYCLE_TRIPLES} triples, {bad} failures, {secs:.1f}s")


def test_c2_characters(report):
    rng = random.Random(SEED + 1)
    problems = []
    for sign in (1, -1):
        iota = i4(sign)
        chis = [make_character(CHI1, sign), make_character(CHI2, sign)]
        for _ in range(CHARACTER_PAIRS):
            a, b = _random_k0(rng), _random_k0(rng)
            ab = meta_mul(a, b)
            for chi in chis:
                if chi(ab) != chi(a) * chi(b):
                    problems.append(f"{chi.variant} not multiplicative on {a}, {b}")
        for chi in chis:
            if chi(MetaElement(IDENTITY, -1)) != -ONE:
                problems.append(f"{chi.variant} not genuine")
        tables = {CHI1: {1: ONE, 3: iota, 5: ONE, 7: iota},
                  CHI2: {1: ONE, 3: -iota, 5: -ONE, 7: iota}}
        for chi in chis:
            for u, val in tables[chi.variant].items():
                if chi(lift(h(u))) != val:
                    problems.append(f"{chi.variant}(h({u})) mismatch")
    report(2, "character validity", not problems,
           f"{CHARACTER_PAIRS} pairs per iota; " + ("; ".join(problems[:3]) or "tables exact"))


def test_c3_cosets(report):
    reports = cosets.verify_all(bound=4)
    bad = [f"{r.label.flavor} ({r.item}) {r.label}: {r.problems}" for r in reports
           if r.status != cosets.CERTIFIED]
    items = {(r.label.flavor, r.item) for r in reports}
    spot = {
        "a": lambda n: 2 ** (2 * n), "c": lambda n: 2 ** (2 * n - 3), "t": lambda n: 2 * 2 ** (2 * n - 2),
    }
    for r in reports:
        if r.label.flavor == cosets.SL2 and r.item in spot and r.orbit_count != spot[r.item](abs(r.label.n)):
            bad.append(f"count formula ({r.item}) at {r.label}")
    complete = len({i for f, i in items if f == cosets.SL2}) == 20 and len({i for f, i in items if f != cosets.SL2}) == 4
    report(3, "coset certification", not bad and complete,
           f"{len(reports)} decompositions, {len(bad)} problems" + (f": {bad[:2]}" if bad else ""))


def _suite(kind):
    out = []
    for sign in ((1,) if kind == hecke.GL2_ALG else (1, -1)):
        out += hecke.run_suite(kind, sign, bound=3)
    return out


def test_c4_chi1(report):
    res = _suite(hecke.CHI1)
    bad = [f"{r.name} (iota {r.iota_sign:+d})" for r in res if not r.holds]
    report(4, "chi1 relation suite", not bad, f"{len(res)} relations" + (f", failing {bad[:3]}" if bad else ""))


def test_c5_chi2(report):
    res = _suite(hecke.CHI2)
    bad = [f"{r.name} (iota {r.iota_sign:+d})" for r in res if not r.holds]
    report(5, "chi2 relation suite", not bad, f"{len(res)} relations" + (f", failing {bad[:3]}" if bad else ""))


def test_c6_gl2(report):
    res = _suite(hecke.GL2_ALG) + hecke.center_check()
    bad = [r.name for r in res if not r.holds]
    report(6, "GL2 suite and center", not bad, f"{len(res)} relations" + (f", failing {bad[:3]}" if bad else ""))


def test_c7_isomorphism(report):
    res = []
    for sign in (1, -1):
        res += hecke.shimura_isomorphism_check(sign).results
    bad = [r.name for r in res if not r.holds]
    report(7, "isomorphism with GL2 at Z = 1", not bad,
           f"{len(res)} relation images" + (f", failing {bad[:3]}" if bad else ""))


def test_c8_vanishing_witness(report):
    B = Mat2(-3, 2, -8, 5)
    chi = make_character(CHI1)
    seen = []
    for n in (1, 2, 3):
        g = base_point(parse_label(f"Y2*W({n})"))
        c = hecke.commutator(lift(B), g)
        seen.append((n, c.eps, chi(c)))
    ok = all(eps == -1 and v == -ONE for _, eps, v in seen)
    report(8, "commutator witness", ok, ", ".join(f"n={n}: sign {e:+d}, chi1 {v}" for n, e, v in seen))


def test_c9_fixtures(report):
    fx = qexp.load_fixtures()
    plus = sorted(n for n, f in fx.items() if qexp.plus_member(f))
    minus = sorted(n for n, f in fx.items() if qexp.minus_member(f))
    checks = {
        "eight fixtures": len(fx) == 8,
        "plus set": plus == ["f2", "f3", "g2", "h2"],
        "minus set": minus == ["k1"],
        "project_plus(k1)=0": qexp.project_plus(fx["k1"]).is_zero(),
        "u4(k1)=0": qexp.u4(fx["k1"]).is_zero(),
        "T9/T25 blocks": all(b.consistent for b in qexp.block_eigen_checks((3, 5))),
    }
    failed = [k for k, v in checks.items() if not v]
    report(9, "fixture suite", not failed,
           f"plus={plus}, minus={minus}" + (f"; failing {failed}" if failed else ""))


def test_c10_operators(report):
    rng = random.Random(SEED + 2)
    bad = 0
    for i in range(RANDOM_EXPANSIONS):
        k = (1, 2, 3)[i % 3]
        N = rng.randint(1, 80)
        coeffs = {rng.randint(1, N): Fraction(rng.randint(-20, 20), rng.randint(1, 6))
                  for _ in range(rng.randint(0, 15))}
        f = qexp.QExpansion.make(k, 4, N, coeffs)
        p = qexp.project_plus(f)
        scaled = qexp.p8_coeff(f)
        ok = (qexp.project_plus(p) == p
              and qexp.p8_coeff(scaled) == f.scale(2)
              and qexp.ScaledQExpansion(scaled.scalar * SQRT2.inv() * kronecker2(2 * k + 1), scaled.body)
              == p - qexp.project_complement(f))
        bad += not ok
    report(10, "coefficient operator identities", bad == 0, f"{RANDOM_EXPANSIONS} expansions, {bad} failures")
