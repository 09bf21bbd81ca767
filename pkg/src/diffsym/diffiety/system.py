"""Normalized implicit systems and their Cartan field."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..symcore import Expr, Sym, jet, order_in, S, ZERO_E
from ..symcore.derivation import Derivation
from ..symcore.linalg import ff_rank
from ..symcore.symbols import sym_of, unknown_diff
from .errors import NormalizationFailure
from .parser import SystemDef


@dataclass
class NormalSystem:
    """``x_i' = f_i(x, x_1', ..., x_m')`` for the dependent variables.

    ``free`` holds x_1..x_m, ``dep`` holds x_{m+1}..x_n.  Canonical
    coordinates are all jets of free variables plus the dependent variables
    at order zero.
    """
    name: str
    free: tuple
    dep: tuple
    f: dict
    source: SystemDef | None = None
    _tau: "CartanField" = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.free = tuple(self.free)
        self.dep = tuple(self.dep)
        self._tau = CartanField(self)

    @property
    def names(self) -> tuple:
        return self.free + self.dep

    @property
    def n(self) -> int:
        return len(self.free) + len(self.dep)

    @property
    def m(self) -> int:
        return len(self.free)

    def index(self, name: str) -> int:
        return self.names.index(name) + 1

    def var(self, i: int) -> str:
        return self.names[i - 1]

    def x(self, i: int, k: int = 0) -> Sym:
        return jet(self.var(i), k)

    def X(self, i: int, k: int = 0) -> Expr:
        return S(jet(self.var(i), k))

    def rhs(self, i: int) -> Expr:
        return self.f[self.var(i)]

    def is_free(self, name: str) -> bool:
        return name in self.free

    def is_canonical(self, s: Sym) -> bool:
        if s.ns != "x":
            return True
        return s.name in self.free or (s.name in self.dep and s.order == 0)

    def canonicalize(self, e: Expr) -> Expr:
        """Replace x_i^(k), i > m, k >= 1, by tau^(k-1) f_i."""
        bad = {}
        for i in e.ids():
            s = sym_of(i)
            if not self.is_canonical(s):
                bad[s] = self._tau.power(self.f[s.name], s.order - 1)
        return e.subs(bad) if bad else e

    def tau(self, e: Expr) -> Expr:
        return self._tau.apply(e)

    def tau_power(self, e: Expr, k: int) -> Expr:
        return self._tau.power(e, k)

    def order_in(self, e: Expr, i: int):
        return order_in(e, self.var(i))

    def explicit_form(self) -> tuple:
        """States, control symbols and right-hand sides of x' = F(x, u) with u_j = x_j'."""
        controls = [jet(v, 1) for v in self.free]
        F = [S(c) for c in controls] + [self.f[v] for v in self.dep]
        return list(self.names), controls, F

    def describe(self) -> str:
        lines = [f"system {self.name}: n={self.n}, m={self.m}"]
        lines.append("  free: " + " ".join(self.free))
        if self.dep:
            lines.append("  dep: " + " ".join(self.dep))
        for v in self.dep:
            lines.append(f"  {v}' = {self.f[v]}")
        return "\n".join(lines)

    def to_text(self) -> str:
        out = [f"system {self.name};", "free " + " ".join(self.free) + ";"]
        if self.dep:
            out.append("dep " + " ".join(self.dep) + ";")
        for v in self.dep:
            out.append(f"eq {v}' = {self.f[v]};")
        return "\n".join(out) + "\n"


class CartanField(Derivation):
    """tau on canonical coordinates, extended to auxiliary namespaces.

    ``unknowns`` maps an unknown-function name to its argument symbols, so
    that tau of a partial d^alpha a equals sum_v d^(alpha+e_v) a * tau(v).
    """

    def __init__(self, ns: NormalSystem, unknowns: dict | None = None):
        super().__init__()
        self.ns = ns
        self.unknowns = unknowns or {}

    def coeff(self, s: Sym):
        ns = self.ns
        if s.ns == "x":
            if s.name in ns.free:
                return S(jet(s.name, s.order + 1))
            if s.name in ns.dep:
                e = ns.f[s.name]
                return self.power(e, s.order) if s.order else e
            return None
        if s.ns in ("z", "b"):
            return S(Sym(s.ns, s.name, s.order + 1, s.deriv))
        if s.ns == "U" and s.name in self.unknowns:
            out = ZERO_E
            for v in self.unknowns[s.name]:
                tv = self.image_sym(v)
                if tv is not None:
                    out = out + S(unknown_diff(s, v)) * tv
            return out
        return None

    def image_sym(self, s: Sym):
        from ..symcore.symbols import sym_id
        return self.image(sym_id(s))


def tau_apply(ns: NormalSystem, e: Expr) -> Expr:
    return ns.tau(e)


def tau_power(ns: NormalSystem, e: Expr, k: int) -> Expr:
    if k < 0:
        raise ValueError("k must be non-negative")
    return ns.tau_power(e, k)


# normalization

def _check_rhs(ns_free, ns_dep, e: Expr, where: str):
    for s in e.symbols():
        if s.name in ns_dep and s.order > 0:
            raise NormalizationFailure(f"{where}: derivative {s} of a dependent variable")
        if s.name in ns_free and s.order > 1:
            raise NormalizationFailure(f"{where}: order {s.order} in free variable {s.name}")


def normalize(sd: SystemDef) -> NormalSystem:
    if sd.explicit:
        return _normalize_explicit(sd)
    free = list(sd.free_names)
    dep = list(sd.dep_names)
    f = {}
    for eq in sd.equations:
        if eq.lhs in free:
            raise NormalizationFailure(f"line {eq.line}: free variable {eq.lhs} cannot have an equation")
        if eq.lhs_order != 1:
            raise NormalizationFailure(f"line {eq.line}: left-hand side must be {eq.lhs}'")
        _check_rhs(free, dep, eq.rhs, f"line {eq.line}")
        f[eq.lhs] = eq.rhs
    missing = [d for d in dep if d not in f]
    if missing:
        raise NormalizationFailure("no equation for " + ", ".join(missing))
    if not free and not dep:
        raise NormalizationFailure("system declares no variables")
    return NormalSystem(sd.name, free, dep, f, sd)


def _normalize_explicit(sd: SystemDef) -> NormalSystem:
    states = sd.state_names
    controls = list(sd.control_names)
    F = {}
    for eq in sd.equations:
        if eq.lhs in controls:
            raise NormalizationFailure(f"line {eq.line}: control {eq.lhs} cannot have an equation")
        if eq.lhs_order != 1:
            raise NormalizationFailure(f"line {eq.line}: left-hand side must be {eq.lhs}'")
        for s in eq.rhs.symbols():
            if s.order:
                raise NormalizationFailure(f"line {eq.line}: explicit right-hand sides must not contain derivatives")
        F[eq.lhs] = eq.rhs
    missing = [x for x in states if x not in F]
    if missing:
        raise NormalizationFailure("no equation for " + ", ".join(missing))
    free: list[str] = []
    pending = dict(F)
    subs: dict = {}
    for u in controls:
        us = jet(u)
        best = None
        for x in states:
            if x in free:
                continue
            e = pending[x].subs(subs)
            if e.denominator().depends_on(us) or e.degree_in([us]) != 1:
                continue
            parts = e.coeffs_in([us])
            beta = parts.get((_sid(us), 1))
            alpha = parts.get((), ZERO_E)
            if beta is None or any(s.name in controls for s in beta.symbols()):
                continue
            if any(s.name in controls and s.name != u for s in alpha.symbols()):
                continue
            score = (0 if beta.is_const() and alpha.is_zero() else 1 if beta.is_const() else 2)
            if best is None or score < best[0]:
                best = (score, x, alpha, beta)
        if best is None:
            w = _fresh(u, set(states) | set(controls) | set(free))
            free.append(w)
            subs[us] = S(jet(w, 1))
        else:
            _, x, alpha, beta = best
            free.append(x)
            subs[us] = (S(jet(x, 1)) - alpha) / beta
    dep = [x for x in states if x not in free]
    f = {}
    for x in dep:
        e = F[x].subs(subs)
        _check_rhs(free, dep, e, f"equation for {x}")
        f[x] = e
    return NormalSystem(sd.name, free, dep, f, sd)


def _sid(s):
    from ..symcore.symbols import sym_id
    return sym_id(s)


def _fresh(u: str, used: set) -> str:
    w = f"{u}_int"
    while w in used:
        w += "_"
    return w


@dataclass
class ValidationReport:
    rank: int
    m: int
    passed: bool
    message: str

    def to_json(self) -> dict:
        return {"rank": self.rank, "m": self.m, "passed": self.passed, "message": self.message}


def validate_full_control(ns: NormalSystem) -> ValidationReport:
    """Generic rank of dF/du on the explicit form."""
    sd = ns.source
    if sd is not None and sd.explicit:
        controls = [jet(u) for u in sd.control_names]
        F = {eq.lhs: eq.rhs for eq in sd.equations}
        rows = [[F[x].diff(u) for u in controls] for x in sd.state_names]
        m = len(controls)
    else:
        _, controls, F = ns.explicit_form()
        rows = [[e.diff(u) for u in controls] for e in F]
        m = ns.m
    r = ff_rank(rows, m) if m else 0
    if r == m:
        return ValidationReport(r, m, True, f"rank {r} = m")
    return ValidationReport(r, m, False,
                            f"rank {r} < m = {m}: keep {r} independent controls and add the "
                            "derivatives of the others as new controls, absorbing them into the state")
