"""Linear PDE systems for symmetry generators and their completion.

An equation is a map ``{U: coefficient}`` where each U is a partial
derivative symbol of some unknown ``a_i``; it stands for ``sum c*U = 0``.
Coefficients are rational functions of the ansatz variables.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from ..diffiety import CartanField, NormalSystem
from ..symcore import Expr, S, ZERO_E, Sym, sym_id, sym_of, unknown, unknown_diff
from ..symcore.derivation import MapDerivation
from ..symcore import poly as P
from .ansatz import Ansatz
from .errors import AnsatzTooSmall, CoefficientVanishes, CompletionCapExceeded


def func_index(s: Sym) -> int:
    return int(s.name[1:])


@dataclass
class LinearPDESystem:
    unknowns: dict  # func name -> tuple of allowed Syms
    equations: list  # list of {U Sym: Expr}
    var_order: list  # D-module variables, highest first in the lex comparison
    assumptions: list = field(default_factory=list)

    def __post_init__(self):
        self._pos = {v: k for k, v in enumerate(self.var_order)}

    def term_key(self, u: Sym) -> tuple:
        exps = [0] * len(self.var_order)
        for v, k in u.deriv:
            exps[self._pos[v]] = k
        return (sum(exps), tuple(exps), func_index(u))

    def lead(self, eq: dict) -> Sym:
        return max(eq, key=self.term_key)

    def monic(self, eq: dict) -> dict:
        u = self.lead(eq)
        c = eq[u]
        if c.is_zero():
            raise CoefficientVanishes(f"leading coefficient of {u} vanishes", str(u))
        if not c.is_const():
            note = f"{c} != 0"
            if note not in self.assumptions:
                self.assumptions.append(note)
        if c.is_const() and c.const_value() == 1:
            return dict(eq)
        return {k: v / c for k, v in eq.items()}

    def sorted_terms(self, eq: dict) -> list:
        return sorted(eq.items(), key=lambda t: self.term_key(t[0]), reverse=True)

    def as_expr(self, eq: dict) -> Expr:
        out = ZERO_E
        for u, c in eq.items():
            out = out + c * S(u)
        return out

    def eq_str(self, eq: dict) -> str:
        terms = self.sorted_terms(eq)
        lead, c0 = terms[0]
        lhs = str(S(lead)) if c0 == 1 else str(c0 * S(lead))
        rest = ZERO_E
        for u, c in terms[1:]:
            rest = rest - c * S(u)
        return f"{lhs} = {rest}"

    def canonical(self) -> list:
        return [tuple(sorted(((str(u), str(c)) for u, c in e.items()))) for e in self.equations]

    def __eq__(self, other):
        return isinstance(other, LinearPDESystem) and sorted(self.canonical()) == sorted(other.canonical())

    def to_json(self) -> dict:
        return {"unknowns": {k: [str(s) for s in v] for k, v in sorted(self.unknowns.items())},
                "equations": [self.eq_str(e) for e in self.equations],
                "assumptions": list(self.assumptions)}

    def to_text(self) -> str:
        return "".join(self.eq_str(e) + "\n" for e in self.equations)


def module_variables(ns: NormalSystem, an: Ansatz) -> list:
    return sorted(an.all_syms(), key=lambda s: (s.order, ns.index(s.name)))


def delta_of_unknowns(ns: NormalSystem, an: Ansatz, tauU: CartanField, syms, prolong_order: int) -> MapDerivation:
    images = {}
    for s in syms:
        if s.ns != "x":
            continue
        i = ns.index(s.name)
        U = S(unknown(an.func(i)))
        if s.order > prolong_order:
            raise AnsatzTooSmall(f"{s} needs prolongation order {s.order}, got {prolong_order}")
        images[s] = tauU.power(U, s.order)
    return MapDerivation(images)


def exact_residuals(ns: NormalSystem, an: Ansatz, prolong_order: int = 1) -> list:
    """E_i = tau a_i - delta f_i with a_i replaced by unknown-function symbols."""
    tauU = CartanField(ns, an.unknowns())
    syms = set()
    for v in ns.dep:
        syms |= ns.f[v].symbols()
    delta = delta_of_unknowns(ns, an, tauU, syms, prolong_order)
    out = []
    for v in ns.dep:
        i = ns.index(v)
        out.append(tauU.apply(S(unknown(an.func(i)))) - delta.apply(ns.f[v]))
    return out


def derive_constraints(ns: NormalSystem, an: Ansatz, prolong_order: int = 1) -> LinearPDESystem:
    residuals = exact_residuals(ns, an, prolong_order)
    allowed = set(an.all_syms())
    var_order = module_variables(ns, an)
    system = LinearPDESystem(an.unknowns(), [], var_order)
    seen = set()
    for E in residuals:
        E = E.numerator()
        free = sorted({s for s in E.symbols() if s.ns == "x" and s not in allowed},
                      key=lambda s: (s.order, ns.index(s.name)))
        for _, coeff in sorted(E.coeffs_in(free).items()):
            eq = _linear_form(coeff)
            if not eq:
                continue
            eq = system.monic(eq)
            key = tuple(sorted((str(u), str(c)) for u, c in eq.items()))
            if key not in seen:
                seen.add(key)
                system.equations.append(eq)
    system.equations.sort(key=lambda e: system.term_key(system.lead(e)))
    return system


def _linear_form(e: Expr) -> dict:
    u_ids = {i for i in e.ids() if sym_of(i).ns == "U"}
    out = {}
    for m, rest in P.split_by(e.num, u_ids).items():
        if not rest:
            continue
        if len(m) != 2 or m[1] != 1:
            raise ValueError(f"equation is not linear in the unknowns: {e}")
        c = Expr(rest, e.den)
        if not c.is_zero():
            out[sym_of(m[0])] = c
    return out


# completion

def _add(acc: dict, u: Sym, c: Expr):
    v = acc.get(u)
    v = c if v is None else v + c
    if v.is_zero():
        acc.pop(u, None)
    else:
        acc[u] = v


def prolong(system: LinearPDESystem, eq: dict, v: Sym) -> dict:
    out: dict = {}
    for u, c in eq.items():
        dc = c.diff(v)
        if not dc.is_zero():
            _add(out, u, dc)
        if v in system.unknowns[u.name]:
            _add(out, unknown_diff(u, v), c)
    return out


class _Completion:
    def __init__(self, system: LinearPDESystem, max_steps: int):
        self.sys = system
        self.G: list = []
        self.leads: list = []
        self.cache: dict = {}
        self.queue: list = []
        self.counter = 0
        self.max_steps = max_steps

    def shifted(self, gi: int, beta: tuple) -> dict:
        """Apply prod d_v^beta_v to G[gi]; beta indexed like var_order."""
        key = (gi, beta)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        if not any(beta):
            return self.G[gi]
        k = max(i for i, b in enumerate(beta) if b)
        prev = list(beta)
        prev[k] -= 1
        out = prolong(self.sys, self.shifted(gi, tuple(prev)), self.sys.var_order[k])
        self.cache[key] = out
        return out

    def exps(self, u: Sym) -> tuple:
        return self.sys.term_key(u)[1]

    def divisor(self, u: Sym):
        ue = self.exps(u)
        for gi, L in enumerate(self.leads):
            if L.name == u.name:
                le = self.exps(L)
                if all(a >= b for a, b in zip(ue, le)):
                    return gi, tuple(a - b for a, b in zip(ue, le))
        return None

    def reduce(self, eq: dict, skip: int | None = None) -> dict:
        eq = dict(eq)
        tk = self.sys.term_key
        while eq:
            target = None
            for u in sorted(eq, key=tk, reverse=True):
                d = self.divisor_skip(u, skip)
                if d is not None:
                    target = (u, d)
                    break
            if target is None:
                return eq
            u, (gi, beta) = target
            c = eq[u]
            for w, cw in self.shifted(gi, beta).items():
                _add(eq, w, -c * cw)
        return eq

    def divisor_skip(self, u, skip):
        if skip is None:
            return self.divisor(u)
        ue = self.exps(u)
        for gi, L in enumerate(self.leads):
            if gi == skip or L.name != u.name:
                continue
            le = self.exps(L)
            if all(a >= b for a, b in zip(ue, le)):
                return gi, tuple(a - b for a, b in zip(ue, le))
        return None

    def push(self, key, item):
        self.counter += 1
        heapq.heappush(self.queue, (key, self.counter, item))

    def add(self, eq: dict):
        r = self.reduce(eq)
        if not r:
            return
        r = self.sys.monic(r)
        gi = len(self.G)
        L = self.sys.lead(r)
        self.G.append(r)
        self.leads.append(L)
        le = self.exps(L)
        for gj, M in enumerate(self.leads[:-1]):
            if M.name != L.name:
                continue
            me = self.exps(M)
            lcm = tuple(max(a, b) for a, b in zip(le, me))
            self.push((sum(lcm), lcm, func_index(L)), ("S", gj, gi, lcm))
        allowed = set(self.sys.unknowns[L.name])
        for k, v in enumerate(self.sys.var_order):
            if v not in allowed:
                self.push(self.sys.term_key(L), ("D", gi, k))

    def run(self, equations):
        for eq in sorted(equations, key=lambda e: self.sys.term_key(self.sys.lead(e))):
            self.add(eq)
        steps = 0
        while self.queue:
            steps += 1
            if steps > self.max_steps:
                raise CompletionCapExceeded(f"completion exceeded {self.max_steps} steps")
            _, _, item = heapq.heappop(self.queue)
            if item[0] == "S":
                _, gj, gi, lcm = item
                a = self.shifted(gi, tuple(x - y for x, y in zip(lcm, self.exps(self.leads[gi]))))
                b = self.shifted(gj, tuple(x - y for x, y in zip(lcm, self.exps(self.leads[gj]))))
                s = dict(a)
                for w, cw in b.items():
                    _add(s, w, -cw)
            else:
                _, gi, k = item
                s = prolong(self.sys, self.G[gi], self.sys.var_order[k])
            if s:
                self.add(s)
        return self.finish()

    def finish(self) -> list:
        tk = self.sys.term_key
        order = sorted(range(len(self.G)), key=lambda i: tk(self.leads[i]))
        keep = []
        for i in order:
            li = self.leads[i]
            ie = self.exps(li)
            dominated = False
            for j in keep:
                lj = self.leads[j]
                if lj.name == li.name and all(a >= b for a, b in zip(ie, self.exps(lj))):
                    dominated = True
                    break
            if not dominated:
                keep.append(i)
        self.G = [self.G[i] for i in keep]
        self.leads = [self.leads[i] for i in keep]
        self.cache = {}
        out = []
        for i in range(len(self.G)):
            g = self.G[i]
            L = self.leads[i]
            tail = {u: c for u, c in g.items() if u != L}
            red = self.reduce(tail, skip=i)
            red[L] = g[L]
            out.append(red)
        return out


def groebner_complete(system: LinearPDESystem, max_steps: int = 5000) -> LinearPDESystem:
    out = LinearPDESystem(dict(system.unknowns), [], list(system.var_order), list(system.assumptions))
    eqs = _Completion(out, max_steps).run(system.equations)
    out.equations = sorted(eqs, key=lambda e: out.term_key(out.lead(e)))
    return out
