"""Truncated q-expansions of weight k + 1/2 cusp forms and coefficient operators.

Coefficients a_1..a_N are exact rationals; N is the largest index known, and
every operator reports the largest index its output is valid for.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .cyclo8 import SQRT2, Cyclo8
from .dyadic import kronecker2

FIXTURE_NAMES = ("f1", "f2", "f3", "g1", "g2", "h1", "h2", "k1")


@dataclass(frozen=True)
class QExpansion:
    """sum_{n=1}^{N} a_n q^n + O(q^(N+1)); zero coefficients are not stored."""

    k: int
    level: int
    N: int
    coeffs: tuple[tuple[int, Fraction], ...]

    @classmethod
    def make(cls, k: int, level: int, N: int, coeffs: dict) -> "QExpansion":
        if k < 1 or level < 1 or N < 0:
            raise ValueError("k and level must be positive, N non-negative")
        items = []
        for n, a in coeffs.items():
            n, a = int(n), Fraction(a)
            if n < 1:
                raise ValueError("cusp forms start at q^1")
            if n <= N and a:
                items.append((n, a))
        return cls(k, level, N, tuple(sorted(items)))

    def a(self, n: int) -> Fraction:
        if n > self.N:
            raise IndexError(f"a_{n} is beyond the truncation O(q^{self.N + 1})")
        return self.as_dict().get(n, Fraction(0))

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.coeffs)

    def _with(self, coeffs: dict, N: int | None = None) -> "QExpansion":
        return QExpansion.make(self.k, self.level, self.N if N is None else N, coeffs)

    def truncate(self, N: int) -> "QExpansion":
        return self._with(self.as_dict(), min(N, self.N))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, o: "QExpansion") -> "QExpansion":
        N = min(self.N, o.N)
        out = self.as_dict()
        for n, a in o.coeffs:
            out[n] = out.get(n, 0) + a
        return self._with(out, N)

    def __neg__(self):
        return self._with({n: -a for n, a in self.coeffs})

    def __sub__(self, o):
        return self + (-o)

    def scale(self, c) -> "QExpansion":
        c = Fraction(c)
        return self._with({n: c * a for n, a in self.coeffs})

    def agrees(self, o: "QExpansion") -> bool:
        """Equality over the common valid range."""
        N = min(self.N, o.N)
        return self.truncate(N).coeffs == o.truncate(N).coeffs

    def __str__(self):
        terms = []
        for n, a in self.coeffs:
            mono = "q" if n == 1 else f"q^{n}"
            if a == 1:
                terms.append(f"+ {mono}")
            elif a == -1:
                terms.append(f"- {mono}")
            else:
                terms.append(f"{'-' if a < 0 else '+'} {abs(a)}{mono}")
        body = " ".join(terms).lstrip("+ ") if terms else "0"
        if body.startswith("- "):
            body = "-" + body[2:]
        return f"{body} + O(q^{self.N + 1})"

    def to_json(self) -> dict:
        return {
            "schema": "metahecke.qexpansion/1",
            "k": self.k,
            "level": self.level,
            "N": self.N,
            "coeffs": [[n, str(a)] for n, a in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "QExpansion":
        return cls.make(data["k"], data["level"], data["N"], {n: Fraction(a) for n, a in data["coeffs"]})


def load_qexp(path: str | Path) -> QExpansion:
    return QExpansion.from_json(json.loads(Path(path).read_text()))


# index classes


def plus_class(n: int, k: int) -> bool:
    """True when (-1)^k n = 0, 1 mod 4 (the indices kept by the plus projection)."""
    return ((-1) ** k * n) % 4 in (0, 1)


def u4(f: QExpansion) -> QExpansion:
    """b_n = a_{4n}."""
    d = f.as_dict()
    N = f.N // 4
    return f._with({n: d.get(4 * n, 0) for n in range(1, N + 1)}, N)


def plus_member(f: QExpansion) -> bool:
    return all(plus_class(n, f.k) for n, _ in f.coeffs)


def minus_member(f: QExpansion) -> bool:
    return not any(plus_class(n, f.k) for n, _ in f.coeffs)


def project_plus(f: QExpansion) -> QExpansion:
    return f._with({n: a for n, a in f.coeffs if plus_class(n, f.k)})


def project_complement(f: QExpansion) -> QExpansion:
    return f._with({n: a for n, a in f.coeffs if not plus_class(n, f.k)})


@dataclass(frozen=True)
class ScaledQExpansion:
    """scalar * body with a Q(zeta_8) scalar kept exact."""

    scalar: Cyclo8
    body: QExpansion

    def coeff(self, n: int) -> Cyclo8:
        return self.scalar * self.body.a(n)

    def values(self) -> dict[int, Cyclo8]:
        return {n: self.scalar * a for n, a in self.body.coeffs}

    def __eq__(self, o):
        if isinstance(o, QExpansion):
            o = ScaledQExpansion(Cyclo8(1), o)
        if not isinstance(o, ScaledQExpansion):
            return NotImplemented
        return self.body.N == o.body.N and self.values() == o.values()

    def __hash__(self):
        return hash((self.body.N, tuple(self.values().items())))


def p8_coeff(f: QExpansion | ScaledQExpansion) -> ScaledQExpansion:
    """sqrt(2) (2/(2k+1)) (sum^(1) - sum^(2)) at the coefficient level."""
    if isinstance(f, ScaledQExpansion):
        inner = p8_coeff(f.body)
        return ScaledQExpansion(f.scalar * inner.scalar, inner.body)
    body = project_plus(f) - project_complement(f)
    return ScaledQExpansion(SQRT2 * kronecker2(2 * f.k + 1), body)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def t_p2(f: QExpansion, p: int) -> QExpansion:
    """Hecke operator T_{p^2} for an odd prime p, trivial character.

    b_n = a_{p^2 n} + ((-1)^k n / p) p^(k-1) a_n + p^(2k-1) a_{n/p^2}.
    """
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"T_p^2 needs an odd prime, got {p}")
    k, d = f.k, f.as_dict()
    pp = p * p
    N = f.N // pp
    out = {}
    for n in range(1, N + 1):
        v = Fraction(d.get(pp * n, 0))
        v += legendre((-1) ** k * n, p) * Fraction(p) ** (k - 1) * d.get(n, 0)
        if n % pp == 0:
            v += Fraction(p) ** (2 * k - 1) * d.get(n // pp, 0)
        out[n] = v
    return f._with(out, N)


def proportionality(f: QExpansion, g: QExpansion) -> Fraction | None:
    """lambda with g = lambda*f on the common range, or None if there is none.

    Zero f on the common range makes any lambda consistent only when g is zero
    there too; the value returned is then 0.
    """
    N = min(f.N, g.N)
    fd, gd = f.truncate(N).as_dict(), g.truncate(N).as_dict()
    lam = None
    for n in range(1, N + 1):
        a = fd.get(n, 0)
        if a:
            lam = Fraction(gd.get(n, 0)) / a
            break
    if lam is None:
        return Fraction(0) if not gd else None
    ok = all(gd.get(n, 0) == lam * fd.get(n, 0) for n in range(1, N + 1))
    return lam if ok else None


def iota_sign_for_weight(k: int) -> int:
    """gamma((-I,1)) = -i^(2k+1) = (-1)^(k+1) i, returned as the sign of i."""
    return 1 if k % 2 == 1 else -1


# fixtures


def _fixture_data() -> dict:
    text = resources.files("metahecke").joinpath("data/level152.json").read_text()
    return json.loads(text)


def load_fixture(name: str) -> QExpansion:
    forms = _fixture_data()["forms"]
    if name not in forms:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURE_NAMES)}")
    return QExpansion.from_json(forms[name])


def load_fixtures() -> dict[str, QExpansion]:
    return {name: load_fixture(name) for name in FIXTURE_NAMES}


def fixture_blocks() -> dict[str, list[str]]:
    return dict(_fixture_data()["blocks"])


def export_fixtures(directory: str | Path) -> list[Path]:
    """Write one QExpansion JSON per fixture plus the bundled file."""
    out_dir = Path(directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, f in load_fixtures().items():
        p = out_dir / f"{name}.json"
        p.write_text(json.dumps(f.to_json(), indent=1))
        paths.append(p)
    bundle = out_dir / "level152.json"
    bundle.write_text(json.dumps(_fixture_data(), indent=1))
    paths.append(bundle)
    return paths


@dataclass
class BlockCheck:
    block: str
    p: int
    lam: Fraction | None
    consistent: bool
    forms: dict[str, bool]


def block_eigen_checks(primes: tuple[int, ...] = (3, 5)) -> list[BlockCheck]:
    """Within each block, T_{p^2} f = lambda f with one lambda for the block.

    lambda comes from the first form with a nonzero coefficient in its valid
    range; a block with no such coefficient is reported with lambda None.
    """
    fx = load_fixtures()
    out = []
    for block, names in fixture_blocks().items():
        for p in primes:
            images = {n: t_p2(fx[n], p) for n in names}
            lam = None
            for n in names:
                lam = proportionality(fx[n].truncate(images[n].N), images[n]) if any(
                    fx[n].truncate(images[n].N).coeffs) else None
                if lam is not None:
                    break
            per = {}
            for n in names:
                f = fx[n].truncate(images[n].N)
                if lam is None:
                    per[n] = images[n].is_zero() or proportionality(f, images[n]) is not None
                else:
                    per[n] = images[n].agrees(f.scale(lam))
            out.append(BlockCheck(block, p, lam, all(per.values()), per))
    return out
