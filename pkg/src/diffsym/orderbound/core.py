"""The D-operator criterion bounding the order of symmetries.

``D = sum_i A_i d/dx_i'`` with the A_i constant for D is iterated on the
implicit equations ``x_i' - f_i``.  The resulting generators are
homogeneous in A.  If the only common zero is A = 0, every symmetry is of
order zero.  Surviving branches record which A_i vanish.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..diffiety import NormalSystem
from ..symcore import Expr, S, ZERO_E, aux_A, jet, square_free_factors
from ..symcore.derivation import MapDerivation
from ..symcore.symbols import sym_id
from ..symcore import poly as P
from .gb import GBCapExceeded, from_dpoly, only_trivial_zero, to_dpoly


class DepthExceeded(Exception):
    pass


@dataclass
class AIdeal:
    ns: NormalSystem
    generators: list  # (ell, variable name, Expr)
    depth: int

    @property
    def A(self) -> list:
        return [aux_A(i) for i in range(1, self.ns.n + 1)]

    def exprs(self) -> list:
        return [g for _, _, g in self.generators]


def default_depth(ns: NormalSystem) -> int:
    dots = [jet(v, 1) for v in ns.free]
    deg = 0
    for v in ns.dep:
        deg = max(deg, ns.f[v].numerator().degree_in(dots))
    return 1 + deg


def d_iterates(ns: NormalSystem, depth: int | None = None) -> AIdeal:
    if depth is None:
        depth = default_depth(ns)
    if depth < 1:
        raise ValueError("depth must be at least 1")
    D = MapDerivation({jet(ns.var(i), 1): S(aux_A(i)) for i in range(1, ns.n + 1)})
    gens = []
    for v in ns.dep:
        e = S(jet(v, 1)) - ns.f[v]
        for ell in range(1, depth + 1):
            e = D.apply(e)
            if e.is_zero():
                break
            gens.append((ell, v, e))
    return AIdeal(ns, gens, depth)


@dataclass
class Branch:
    zero: list  # indices i with A_i = 0
    relations: dict  # index k -> Expr value of A_k
    residual: list = field(default_factory=list)  # remaining nonlinear relations (Expr)

    def key(self):
        return (tuple(sorted(self.zero)), tuple(sorted((k, str(v)) for k, v in self.relations.items())),
                tuple(sorted(str(r) for r in self.residual)))

    def to_json(self) -> dict:
        rel = []
        for k in sorted(self.relations):
            v = self.relations[k]
            vs = str(v)
            if len(v.num) > 1 or not v.is_polynomial():
                vs = f"({vs})"
            if vs.startswith("-"):
                rel.append(f"A{k} + {vs[1:]}")
            else:
                rel.append(f"A{k} - {vs}")
        rel.extend(f"{r}" for r in self.residual)
        return {"zero": [f"A{i}" for i in sorted(self.zero)], "relations": rel}


@dataclass
class BranchReport:
    verdict: str
    branches: list
    trace: list
    n: int
    nodes: int = 0

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "branches": [b.to_json() for b in self.branches],
                "trace": list(self.trace)}


def _reduce_gen(g: Expr, a_ids: set) -> Expr | None:
    """Square-free part keeping only factors that involve A."""
    g = g.numerator()
    if g.is_zero():
        return None
    if not (g.ids() & a_ids):
        return g  # a nonzero jet expression: the branch is contradictory
    out = Expr.const(1)
    for f, _ in square_free_factors(g):
        if f.ids() & a_ids:
            out = out * f
    return out


def analyze_A_ideal(ideal: AIdeal, node_cap: int = 10 ** 4, gb_pairs: int = 400) -> BranchReport:
    n = ideal.ns.n
    A = ideal.A
    a_ids = {sym_id(a) for a in A}
    idx_of = {sym_id(a): i + 1 for i, a in enumerate(A)}
    trace: list = []
    leaves: list = []
    state = {"nodes": 0, "inconclusive": False}

    def bindings(zero, rel):
        b = {A[i - 1]: ZERO_E for i in zero}
        for k, v in rel.items():
            b[A[k - 1]] = v
        return b

    def label(zero, rel):
        parts = [f"A{i}=0" for i in sorted(zero)] + [f"A{k}={v}" for k, v in sorted(rel.items())]
        return "{" + ", ".join(parts) + "}"

    def add_relation(zero, rel, k, value):
        zero = set(zero)
        rel = dict(rel)
        if value.is_zero():
            zero.add(k)
            b = {A[k - 1]: ZERO_E}
        else:
            b = {A[k - 1]: value}
        rel = {j: v.subs(b) for j, v in rel.items()}
        for j in [j for j, v in rel.items() if v.is_zero()]:
            zero.add(j)
            del rel[j]
        if not value.is_zero():
            rel[k] = value
        return zero, rel

    def explore(gens, zero, rel):
        state["nodes"] += 1
        if state["nodes"] > node_cap:
            raise DepthExceeded(f"branch tree exceeds {node_cap} nodes")
        b = bindings(zero, rel)
        cur = []
        seen = set()
        for g in gens:
            g2 = _reduce_gen(g.subs(b) if b else g, a_ids)
            if g2 is None:
                continue
            if not (g2.ids() & a_ids):
                trace.append(f"{label(zero, rel)}: nonzero jet expression {g2} forces A = 0")
                free = [i for i in range(1, n + 1) if i not in zero and i not in rel]
                leaves.append(("trivial", zero | set(free), {}))
                return
            if g2 not in seen:
                seen.add(g2)
                cur.append(g2)
        free = [i for i in range(1, n + 1) if i not in zero and i not in rel]
        if not free:
            trace.append(f"{label(zero, rel)}: all A vanish")
            leaves.append(("trivial", zero, rel))
            return
        if not cur:
            trace.append(f"{label(zero, rel)}: survives with free {', '.join(f'A{i}' for i in free)}")
            leaves.append(("branch", zero, rel, []))
            return
        # linear generators: substitute
        for g in cur:
            if g.num and all(sum(e for v, e in zip(m[0::2], m[1::2]) if v in a_ids) == 1 for m in g.num):
                coeffs = g.coeffs_in([A[i - 1] for i in free])
                best = None
                for m, c in coeffs.items():
                    if not m:
                        continue
                    k = idx_of[m[0]]
                    score = (0 if c.is_const() else 1, -k)
                    if best is None or score < best[0]:
                        best = (score, k, c)
                _, k, c = best
                value = -(g - c * S(A[k - 1])) / c
                trace.append(f"{label(zero, rel)}: solve {g} = 0 for A{k}")
                z2, r2 = add_relation(zero, rel, k, value)
                explore(cur, z2, r2)
                return
        # monomial A-factors: branch
        ranked = []
        for pos, g in enumerate(cur):
            mono = P.common_mono({m: 1 for m in P.split_by(g.num, a_ids)})
            if mono:
                rest = g / Expr.from_poly({mono: 1})
                pure = not (rest.ids() & a_ids)
                ranked.append((0 if pure else 1, pos, mono, rest))
        if ranked:
            ranked.sort(key=lambda t: (t[0], t[1]))
            rank, pos, mono, rest = ranked[0]
            pure = rank == 0
            ks = [idx_of[mono[i]] for i in range(0, len(mono), 2)]
            trace.append(f"{label(zero, rel)}: branch on " + " or ".join(f"A{k}=0" for k in ks)
                         + ("" if pure else f" or {rest} = 0"))
            for k in ks:
                z2, r2 = add_relation(zero, rel, k, ZERO_E)
                explore(cur, z2, r2)
            if not pure:
                explore(cur[:pos] + [rest] + cur[pos + 1:], zero, rel)
            return
        # no rule applies: decide with a Groebner basis in the free A's
        ids = [sym_id(A[i - 1]) for i in free]
        try:
            trivial, G = only_trivial_zero([to_dpoly(g, ids) for g in cur], len(ids), gb_pairs)
        except GBCapExceeded:
            trace.append(f"{label(zero, rel)}: inconclusive (Groebner cap)")
            state["inconclusive"] = True
            leaves.append(("inconclusive", zero, rel))
            return
        if trivial:
            trace.append(f"{label(zero, rel)}: Groebner basis has pure powers of every free A")
            leaves.append(("trivial", zero | set(free), {}))
        else:
            res = [from_dpoly(g, [S(A[i - 1]) for i in free]) for g in G]
            trace.append(f"{label(zero, rel)}: nontrivial zeros remain (Groebner basis of {len(G)} elements)")
            leaves.append(("branch", zero, rel, res))

    explore(ideal.exprs(), set(), {})
    branches = {}
    for leaf in leaves:
        if leaf[0] == "branch":
            br = Branch(sorted(leaf[1]), dict(leaf[2]), list(leaf[3]))
            branches[br.key()] = br
    blist = [branches[k] for k in sorted(branches)]
    if state["inconclusive"]:
        verdict = "Inconclusive"
    elif blist:
        verdict = "Branches"
    else:
        verdict = "OnlyTrivial"
    return BranchReport(verdict, blist, trace, n, state["nodes"])


@dataclass
class ConstraintSet:
    """Dependency restrictions for the symmetry ansatz.

    ``order_zero`` lists variables whose iterated images must be of order 0.
    ``branch_ansatz`` gives one allowed-variable map per surviving branch.
    """
    verdict: str
    order_zero: list
    state_only: bool
    notes: list
    branch_ansatz: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "state_only": self.state_only,
                "order_zero": [f"x{i}" for i in self.order_zero], "notes": list(self.notes),
                "branch_ansatz": [{f"a{i}": [str(s) for s in allowed] for i, allowed in b.items()}
                                  for b in self.branch_ansatz]}


def order_constraints(br: BranchReport, ns: NormalSystem, order: int = 1) -> ConstraintSet:
    states = [ns.x(i) for i in range(1, ns.n + 1)]
    everything = list(range(1, ns.n + 1))
    if ns.m <= 1:
        note = "one free variable: integrable symmetries are of order 0"
        return ConstraintSet(br.verdict, everything, True, [note])
    if br.verdict == "OnlyTrivial":
        return ConstraintSet(br.verdict, everything, True, ["only the trivial zero: every a_i depends on states only"])
    if br.verdict == "Inconclusive":
        return ConstraintSet(br.verdict, [], False, ["criterion inconclusive: use an explicit order cap"])
    common = set(everything)
    for b in br.branches:
        common &= set(b.zero)
    ansatz = []
    for b in br.branches:
        Z = set(b.zero)
        zjets = [jet(ns.var(j), k) for k in range(1, order + 1) for j in sorted(Z) if j <= ns.m]
        allowed = {}
        for i in everything:
            if i in Z:
                allowed[i] = [ns.x(j) for j in sorted(Z)] if zjets else list(states)
            else:
                allowed[i] = list(states) + zjets
        ansatz.append(allowed)
    notes = ["order 0 forced for " + (", ".join(ns.var(i) for i in sorted(common)) if common else "no variable"),
             "branch ansatz: vanishing A_i keep states of vanishing variables; others may carry their jets"]
    return ConstraintSet(br.verdict, sorted(common), False, notes, ansatz)
