"""Command-line front end.

Exit codes: 0 success, 1 parse or analysis failure, 2 an internal cap was hit.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from . import __version__
from .access import NotAccessible, RankDegeneracy, flat_basis, strong_accessibility
from .diffiety import NormalizationFailure, ParseError, load_system, validate_full_control
from .flow import (ClosureCapExceeded, SingularityEncountered, close_finite_system, equivariance_check,
                   group_law_check, rk4_flow)
from .integrab import integrability_verdict, tame_test
from .orderbound import DepthExceeded, analyze_A_ideal, d_iterates, order_constraints
from .orderbound.gb import GBCapExceeded
from .symsolve import (Ansatz, AnsatzTooSmall, CompletionCapExceeded, derive_constraints, groebner_complete,
                       solve_polynomial_ansatz, verify_symmetry)
from .vfield import parse_vfield

SCHEMA = 1
FIXTURES = Path(__file__).parent / "fixtures"

CAP_ERRORS = (DepthExceeded, GBCapExceeded, CompletionCapExceeded, ClosureCapExceeded)


class AnalysisFailure(Exception):
    pass


def resolve_path(name: str) -> Path:
    p = Path(name)
    if p.exists():
        return p
    stem = p.name[:-4] if p.name.endswith(".sys") else p.name
    q = FIXTURES / f"{stem}.sys"
    if q.exists():
        return q
    raise FileNotFoundError(f"no such file or fixture: {name}")


def read_system(name: str):
    return load_system(resolve_path(name).read_text())


def _system_echo(ns) -> dict:
    return {"name": ns.name, "n": ns.n, "m": ns.m, "free": list(ns.free), "dep": list(ns.dep),
            "equations": {f"{v}'": str(ns.f[v]) for v in ns.dep}}


# subcommands: each returns a JSON-ready dict and a text rendering

def cmd_parse(args):
    ns = read_system(args.system)
    rep = validate_full_control(ns)
    out = {"system": _system_echo(ns), "validation": rep.to_json()}
    return out, ns.describe() + f"\n{rep.message}"


def cmd_accessibility(args):
    ns = read_system(args.system)
    rep = strong_accessibility(ns, random.Random(args.seed))
    text = f"Lie algebra dimension {rep.lie_algebra_dim} of {rep.n + rep.m}: " + (
        "strongly accessible" if rep.accessible else "not strongly accessible")
    return {"system": _system_echo(ns), "accessibility": rep.to_json()}, text


def _bound(ns, depth=None):
    br = analyze_A_ideal(d_iterates(ns, depth))
    return br


def cmd_rouchon(args):
    ns = read_system(args.system)
    br = _bound(ns, args.depth)
    cs = order_constraints(br, ns)
    lines = [f"verdict: {br.verdict}"]
    for b in br.branches:
        j = b.to_json()
        lines.append("  branch: zero " + ", ".join(j["zero"]) + ("; " + "; ".join(j["relations"]) if j["relations"] else ""))
    lines += [f"  {t}" for t in br.trace]
    lines += [f"note: {n}" for n in cs.notes]
    out = br.to_json()
    out["constraints"] = cs.to_json()
    return {"system": _system_echo(ns), "rouchon": out}, "\n".join(lines)


def cmd_linearize(args):
    ns = read_system(args.system)
    rep = flat_basis(ns, random.Random(args.seed))
    j = rep.to_json()
    lines = [f"r = {j['r']}", f"s = {j['s']}", "zeta = " + ", ".join(j["zeta"])]
    lines += [f"{k} = {v}" for k, v in j["parametrization"].items()]
    if j["assumptions"]:
        lines.append("assuming " + ", ".join(j["assumptions"]))
    lines.append(f"round trip: {'ok' if j['roundtrip'] else 'FAILED'}")
    return {"system": _system_echo(ns), "flat_basis": j}, "\n".join(lines)


def _ansatzes(ns, order: int, ansatz_file: str | None):
    """(label, Ansatz) pairs plus the order-bound section."""
    if ansatz_file:
        return [("user", Ansatz.parse(ns, Path(ansatz_file).read_text()))], None
    if order == 0:
        return [("states", Ansatz.state_only(ns))], None
    br = _bound(ns)
    cs = order_constraints(br, ns, order)
    if cs.state_only:
        return [("states", Ansatz.state_only(ns))], cs
    if cs.branch_ansatz:
        return [(f"branch {k}", Ansatz.from_constraints(ns, cs, order, k)) for k in range(len(cs.branch_ansatz))], cs
    return [(f"order {order}", Ansatz.from_constraints(ns, cs, order))], cs


def symmetries_section(ns, order: int, degree: int, ansatz_file=None, complete=False) -> tuple:
    pairs, cs = _ansatzes(ns, order, ansatz_file)
    sections = []
    lines = []
    for label, an in pairs:
        pde = derive_constraints(ns, an, max(1, an.max_order + 1))
        basis = solve_polynomial_ansatz(ns, an, degree)
        for vf in basis.basis:
            if not verify_symmetry(ns, vf):
                raise AnalysisFailure(f"basis member {vf} failed re-verification")
        sec = {"label": label, "constraints": pde.to_json(), "symmetries": basis.to_json()}
        lines.append(f"[{label}] ansatz: " + "; ".join(f"{k}({', '.join(v)})" for k, v in an.to_json().items()))
        lines += [f"  {e}" for e in sec["constraints"]["equations"]]
        if complete:
            g = groebner_complete(pde)
            sec["completed"] = g.to_json()
            lines.append("  completed:")
            lines += [f"    {e}" for e in sec["completed"]["equations"]]
        lines.append(f"  dimension {basis.dimension} at degree {degree}")
        for p, vf in zip(basis.parameters, basis.basis):
            lines.append(f"  {p}: " + ", ".join(f"{k} = {v}" for k, v in vf.to_json().items()))
        sections.append(sec)
    out = {"order": order, "degree": degree, "ansatzes": sections}
    if cs is not None:
        out["order_bound"] = cs.to_json()
        lines.insert(0, f"order bound: {cs.verdict}")
    return out, lines


def cmd_symmetries(args):
    ns = read_system(args.system)
    out, lines = symmetries_section(ns, args.order, args.degree, args.ansatz, args.complete)
    return {"system": _system_echo(ns), "symmetries": out}, "\n".join(lines)


def _field(ns, path: str):
    return parse_vfield(ns, Path(path).read_text())


def cmd_check_integrable(args):
    ns = read_system(args.system)
    vf = _field(ns, args.field)
    v = integrability_verdict(ns, vf, args.cap, seed=args.seed)
    out = {"symmetry": verify_symmetry(ns, vf), "field": vf.to_json(), "integrability": v.to_json()}
    if out["symmetry"] and v.status == "IntegrableEvidence":
        out["tame"] = tame_test(ns, vf)
    text = [f"symmetry: {'yes' if out['symmetry'] else 'no'}", f"verdict: {v.status} ({v.witness})",
            f"ranks: {v.ranks}"]
    if "tame" in out:
        text.append(f"tame test: {out['tame']['verdict']} (dim L = {out['tame']['dim_L']})")
    return {"system": _system_echo(ns), "check": out}, "\n".join(text)


def cmd_verify_flow(args):
    ns = read_system(args.system)
    vf = _field(ns, args.field)
    ff = close_finite_system(ns, vf)
    point = json.loads(args.point)
    missing = [c for c in ff.names if c not in point]
    if missing:
        raise AnalysisFailure("point misses coordinates: " + ", ".join(missing))
    res = rk4_flow(ff, point, args.s, args.steps)
    gl = group_law_check(ff, point, args.s / 2, args.s / 2, args.steps, args.tol)
    inv = group_law_check(ff, point, args.s, -args.s, args.steps, args.tol)
    out = {"closure": ff.to_json(), "endpoint": dict(zip(ff.names, res.end)), "group_law": gl,
           "inverse": inv}
    ok = gl["passed"] and inv["passed"]
    if args.controls:
        ctrl = json.loads(args.controls)
        dep0 = {v: point[v] for v in ns.dep}
        eq = equivariance_check(ns, vf, dep0, ctrl, T=args.T, s=args.s, tol=args.tol, steps=args.steps)
        out["equivariance"] = eq
        ok = ok and eq["passed"]
    out["passed"] = ok
    text = [f"coordinates: {', '.join(ff.names)}",
            "endpoint: " + ", ".join(f"{k} = {v:.12g}" for k, v in out["endpoint"].items()),
            f"group law: {'pass' if gl['passed'] else 'FAIL'} (error {gl['error']:.3e})",
            f"inverse: {'pass' if inv['passed'] else 'FAIL'} (error {inv['error']:.3e})"]
    if "equivariance" in out:
        e = out["equivariance"]
        text.append(f"equivariance: {'pass' if e['passed'] else 'FAIL'} "
                    f"(endpoint {e['endpoint_error']:.3e}, residual {e['residual']:.3e})")
    if not ok:
        raise AnalysisFailure("\n".join(text))
    return {"system": _system_echo(ns), "flow": out}, "\n".join(text)


def cmd_analyze(args):
    ns = read_system(args.system)
    rng = random.Random(args.seed)
    report = {"system": _system_echo(ns)}
    lines = [ns.describe()]
    acc = strong_accessibility(ns, rng)
    report["accessibility"] = acc.to_json()
    lines.append(f"accessibility: dimension {acc.lie_algebra_dim} of {acc.n + acc.m}, "
                 + ("accessible" if acc.accessible else "not accessible"))
    if acc.accessible:
        fb = flat_basis(ns, random.Random(args.seed))
        report["flat_basis"] = fb.to_json()
        lines.append("flat basis: zeta = " + ", ".join(report["flat_basis"]["zeta"]))
    br = _bound(ns)
    cs = order_constraints(br, ns)
    report["rouchon"] = br.to_json()
    report["rouchon"]["constraints"] = cs.to_json()
    lines.append(f"order bound: {br.verdict}")
    lines += [f"  note: {n}" for n in cs.notes]
    sym, sym_lines = symmetries_section(ns, 0, args.degree)
    report["symmetries"] = sym
    lines += sym_lines
    integ = []
    for sec in sym["ansatzes"]:
        for p, g in zip(sec["symmetries"]["parameters"], sec["symmetries"]["basis"]):
            vf = parse_vfield(ns, "".join(f"{k} = {v};" for k, v in g.items()))
            v = integrability_verdict(ns, vf, seed=args.seed)
            integ.append({"parameter": p, "status": v.status, "witness": v.witness})
            lines.append(f"  {p}: {v.status}")
    report["integrability"] = integ
    return report, "\n".join(lines)


COMMANDS = {
    "parse": cmd_parse,
    "accessibility": cmd_accessibility,
    "rouchon-bound": cmd_rouchon,
    "linearize-basis": cmd_linearize,
    "symmetries": cmd_symmetries,
    "check-integrable": cmd_check_integrable,
    "verify-flow": cmd_verify_flow,
    "analyze": cmd_analyze,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="diffsym", description="Symmetries of control systems on jet spaces.")
    ap.add_argument("--version", action="version", version=f"diffsym {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("system", help="system file or fixture name")
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--seed", type=int, default=0, help="seed for random evaluation points")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("parse", parents=[common], help="parse, normalize and validate a system")
    sub.add_parser("accessibility", parents=[common], help="strong accessibility rank test")
    p = sub.add_parser("rouchon-bound", parents=[common], help="order bound from the D-operator criterion")
    p.add_argument("--depth", type=int, default=None)
    sub.add_parser("linearize-basis", parents=[common], help="flat basis of the linearized system")
    p = sub.add_parser("symmetries", parents=[common], help="polynomial symmetry basis")
    p.add_argument("--order", type=int, default=0, help="jet order allowed in the generators")
    p.add_argument("--degree", type=int, default=2, help="polynomial degree of the ansatz")
    p.add_argument("--ansatz", default=None, help="file declaring the variables of each a_i")
    p.add_argument("--complete", action="store_true", help="also print the completed PDE system")
    p = sub.add_parser("check-integrable", parents=[common], help="integrability verdict for a field")
    p.add_argument("--field", required=True)
    p.add_argument("--cap", type=int, default=None, help="iteration cap K")
    p = sub.add_parser("verify-flow", parents=[common], help="numeric flow checks")
    p.add_argument("--field", required=True)
    p.add_argument("--point", required=True, help="JSON object of coordinate values")
    p.add_argument("--s", type=float, default=0.5)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--controls", default=None, help="JSON map free variable -> polynomial coefficients in t")
    p.add_argument("--T", type=float, default=1.0)
    p = sub.add_parser("analyze", parents=[common], help="run the whole pipeline")
    p.add_argument("--degree", type=int, default=2)
    return ap


def _error(kind: str, exc: Exception) -> dict:
    err = {"type": kind, "message": str(exc)}
    if isinstance(exc, ParseError):
        err["line"] = exc.line
        err["column"] = exc.col
    return err


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    t0 = time.perf_counter()
    code = 0
    try:
        body, text = COMMANDS[args.command](args)
    except CAP_ERRORS as exc:
        code, body, text = 2, {"error": _error(type(exc).__name__, exc)}, f"cap exceeded: {exc}"
    except (ParseError, NormalizationFailure, FileNotFoundError, NotAccessible, RankDegeneracy, AnsatzTooSmall,
            SingularityEncountered, AnalysisFailure, ValueError) as exc:
        code, body, text = 1, {"error": _error(type(exc).__name__, exc)}, f"error: {exc}"
    if args.json:
        report = {"schema": SCHEMA, "command": args.command, "version": __version__, **body}
        if args.timing:
            report["timing"] = {"seconds": round(time.perf_counter() - t0, 6)}
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        stream = sys.stderr if code else sys.stdout
        print(text, file=stream)
        if args.timing:
            print(f"time: {time.perf_counter() - t0:.3f} s")
    return code


def main():
    sys.exit(run())
