"""``metahecke`` command line: relation suites, cosets, convolution, q-expansions.

Exit status is 0 unless some check failed; inconclusive checks do not fail.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from . import cosets, hecke, qexp
from .metaplectic import GL2, SL2, Mat2

DEFAULT_SEED = 152
REPORT_SCHEMA = "metahecke.run_report/1"

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass
class RunReport:
    command: list[str]
    checks: list[dict] = field(default_factory=list)
    payload: dict | None = None
    text: str | None = None
    started: float = field(default_factory=time.perf_counter)

    def add(self, name: str, status: str, **extra):
        self.checks.append({"name": name, "status": status, **extra})

    @property
    def failed(self) -> bool:
        return any(c["status"] == FAIL for c in self.checks)

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "schema": REPORT_SCHEMA,
            "command": self.command,
            "ok": not self.failed,
            "checks": sorted(self.checks, key=lambda c: c["name"]),
        }
        if self.payload is not None:
            out["result"] = self.payload
        if timing:
            out["seconds"] = round(time.perf_counter() - self.started, 3)
        return out

    def render(self, timing: bool = False) -> str:
        lines = []
        if self.text is not None:
            lines.append(self.text)
        elif self.payload is not None:
            lines.append(json.dumps(self.payload, indent=1))
        width = max((len(c["name"]) for c in self.checks), default=0)
        for c in self.checks:
            note = f"  {c['detail']}" if c.get("detail") else ""
            lines.append(f"{c['status'].upper():<12} {c['name']:<{width}}{note}")
        if self.checks:
            n_fail = sum(c["status"] == FAIL for c in self.checks)
            n_inc = sum(c["status"] == INCONCLUSIVE for c in self.checks)
            lines.append(f"{len(self.checks)} checks, {n_fail} failed, {n_inc} inconclusive")
        if timing:
            lines.append(f"{time.perf_counter() - self.started:.2f}s")
        return "\n".join(lines)


def _iotas(choice: str) -> list[int]:
    return {"plus": [1], "minus": [-1], "both": [1, -1]}[choice]


def _flavor(name: str) -> str:
    return GL2 if name.lower() == "gl2" else SL2


# subcommands


def cmd_verify_relations(args, rep: RunReport):
    kinds = hecke.ALGEBRAS if args.algebra == "all" else (args.algebra,)
    for kind in kinds:
        iotas = [1] if kind == hecke.GL2_ALG else _iotas(args.iota)
        for s in iotas:
            results = hecke.run_suite(kind, s, bound=args.bound)
            if kind == hecke.GL2_ALG:
                results += hecke.center_check()
            for r in results:
                tag = kind if kind == hecke.GL2_ALG else f"{kind}[{'+' if s == 1 else '-'}i]"
                extra = {} if r.holds else {"detail": r.error or f"lhs={r.lhs} rhs={r.rhs}",
                                            "counterexample": r.to_json()}
                rep.add(f"{tag} {r.name}", PASS if r.holds else FAIL, **extra)
    if args.iso:
        for s in _iotas(args.iota):
            for r in hecke.shimura_isomorphism_check(s).results:
                extra = {} if r.holds else {"counterexample": r.to_json()}
                rep.add(f"iso[{'+' if s == 1 else '-'}i] {r.name}", PASS if r.holds else FAIL, **extra)


def cmd_cosets(args, rep: RunReport):
    flavor = _flavor(args.flavor)
    if args.verify_all:
        status_map = {cosets.CERTIFIED: PASS, cosets.FAILED: FAIL, cosets.INCONCLUSIVE: INCONCLUSIVE}
        for r in cosets.verify_all(bound=args.bound, search=args.search):
            detail = f"{r.count} cosets" if not r.problems else "; ".join(r.problems)
            rep.add(f"{r.label.flavor} ({r.item}) {r.label}", status_map[r.status],
                    detail=detail, report=r.to_json())
    elif args.classify:
        g = Mat2.parse(args.classify, flavor=flavor)
        lab = cosets.classify(g, flavor)
        rep.payload = {"schema": "metahecke.classification/1", "matrix": g.to_json(), "label": str(lab)}
        rep.text = str(lab)
    else:
        lab = cosets.parse_label(args.decompose, flavor)
        try:
            dec = cosets.decomposition_table(lab, flavor)
        except KeyError:
            dec = cosets.orbit_decomposition(lab)
        rep.payload = dec.to_json()


def cmd_convolve(args, rep: RunReport):
    alg = hecke.HeckeAlgebra(args.algebra, _iotas(args.iota)[0])
    el = hecke.evaluate_sexpr(alg, args.expr)
    rep.payload = el.to_json()
    rep.text = "\n".join(f"{lab}: {v}" for lab, v in el.coeffs.items()) or "0"


def cmd_support(args, rep: RunReport):
    for kind in (hecke.CHI1, hecke.CHI2):
        alg = hecke.HeckeAlgebra(kind, _iotas(args.iota)[0])
        r = hecke.commutator_support_test(alg, args.label, samples=args.samples, seed=args.seed)
        rep.add(f"{kind} {r.label}", PASS, detail="vanishing" if r.vanishing else "no obstruction found",
                report=r.to_json())


def _fixture_suite(rep: RunReport):
    fx = qexp.load_fixtures()
    plus = sorted(n for n, f in fx.items() if qexp.plus_member(f))
    minus = sorted(n for n, f in fx.items() if qexp.minus_member(f))
    rep.add("fixture count", PASS if len(fx) == 8 else FAIL, detail=f"{len(fx)} forms")
    rep.add("plus set", PASS if plus == ["f2", "f3", "g2", "h2"] else FAIL, detail=",".join(plus))
    rep.add("minus set", PASS if minus == ["k1"] else FAIL, detail=",".join(minus))
    k1 = fx["k1"]
    rep.add("project_plus(k1) = 0", PASS if qexp.project_plus(k1).is_zero() else FAIL)
    rep.add("u4(k1) = 0", PASS if qexp.u4(k1).is_zero() else FAIL, detail=f"through q^{k1.N // 4}")
    for b in qexp.block_eigen_checks():
        lam = "n/a" if b.lam is None else str(b.lam)
        rep.add(f"T_{b.p}^2 on {b.block}", PASS if b.consistent else FAIL, detail=f"lambda={lam}")


def cmd_qexp(args, rep: RunReport):
    if args.fixtures:
        _fixture_suite(rep)
    elif args.export_fixtures:
        paths = qexp.export_fixtures(args.export_fixtures)
        rep.payload = {"schema": "metahecke.export/1", "files": [str(p) for p in paths]}
    elif args.project_plus:
        rep.payload = qexp.project_plus(qexp.load_qexp(args.project_plus)).to_json()
    elif args.check:
        which, path = args.check
        if which not in ("plus", "minus"):
            raise ValueError("--check takes plus or minus")
        f = qexp.load_qexp(path)
        ok = qexp.plus_member(f) if which == "plus" else qexp.minus_member(f)
        rep.add(f"{which}_member {path}", PASS if ok else FAIL)
    else:
        p, path = args.hecke
        f = qexp.load_qexp(path)
        img = qexp.t_p2(f, int(p))
        lam = qexp.proportionality(f.truncate(img.N), img)
        rep.payload = {"schema": "metahecke.hecke_image/1", "p": int(p), "image": img.to_json(),
                       "eigenvalue": None if lam is None else str(lam)}
        rep.add(f"T_{p}^2 eigenform through q^{img.N}", PASS if lam is not None else INCONCLUSIVE,
                detail="" if lam is None else f"lambda={lam}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"sampling seed (default {DEFAULT_SEED})")
    common.add_argument("--timing", action="store_true", help="report elapsed time")

    p = argparse.ArgumentParser(prog="metahecke", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify-relations", parents=[common], help="run the relation suites")
    s.add_argument("--algebra", choices=[*hecke.ALGEBRAS, "all"], default="all")
    s.add_argument("--iota", choices=["plus", "minus", "both"], default="both")
    s.add_argument("--bound", type=int, default=3, help="index range for T/U relations")
    s.add_argument("--iso", action="store_true", help="also check the isomorphism with GL2")
    s.set_defaults(func=cmd_verify_relations)

    s = sub.add_parser("cosets", parents=[common], help="coset tables and classification")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--verify-all", action="store_true")
    g.add_argument("--classify", metavar="MATRIX", help='e.g. "[[0,1/2],[-2,0]]"')
    g.add_argument("--decompose", metavar="LABEL", help='e.g. "H(1)" or "Y2*W(1)"')
    s.add_argument("--flavor", choices=["sl2", "gl2"], default="sl2")
    s.add_argument("--bound", type=int, default=4)
    s.add_argument("--search", action="store_true", help="try the bounded witness search first")
    s.set_defaults(func=cmd_cosets)

    s = sub.add_parser("convolve", parents=[common], help="evaluate an s-expression")
    s.add_argument("expr")
    s.add_argument("--algebra", choices=list(hecke.ALGEBRAS), default=hecke.CHI1)
    s.add_argument("--iota", choices=["plus", "minus"], default="plus")
    s.set_defaults(func=cmd_convolve)

    s = sub.add_parser("support", parents=[common], help="commutator obstruction test for a label")
    s.add_argument("label")
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--iota", choices=["plus", "minus"], default="plus")
    s.set_defaults(func=cmd_support)

    s = sub.add_parser("qexp", parents=[common], help="q-expansion tools")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--fixtures", action="store_true")
    g.add_argument("--project-plus", metavar="FILE")
    g.add_argument("--check", nargs=2, metavar=("plus|minus", "FILE"))
    g.add_argument("--hecke", nargs=2, metavar=("P", "FILE"))
    g.add_argument("--export-fixtures", metavar="DIR")
    s.set_defaults(func=cmd_qexp)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    rep = RunReport(command=["metahecke", *argv])
    try:
        args.func(args, rep)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        rep.add(args.command, FAIL, detail=f"{type(exc).__name__}: {exc}")
    if args.json:
        print(json.dumps(rep.to_json(args.timing), indent=1))
    else:
        print(rep.render(args.timing))
    return 1 if rep.failed else 0


if __name__ == "__main__":
    sys.exit(main())
