"""Polynomial-ansatz solving over the exact residuals."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from ..diffiety import NormalSystem
from ..symcore import Expr, Q, S, Sym, ZERO_E, coef, sym_id, sym_of
from ..symcore.linalg import q_nullspace
from ..symcore import poly as P
from ..vfield import VField, commutator_residuals
from .ansatz import Ansatz


def verify_symmetry(ns: NormalSystem, vf: VField) -> bool:
    return all(r.is_zero() for r in commutator_residuals(ns, vf))


@dataclass
class SymmetryBasis:
    basis: list
    ansatz: Ansatz
    degree: int
    parameters: list = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def to_json(self) -> dict:
        return {"dimension": self.dimension, "degree": self.degree, "ansatz": self.ansatz.to_json(),
                "parameters": list(self.parameters), "basis": [vf.to_json() for vf in self.basis]}

    def to_text(self) -> str:
        blocks = []
        for name, vf in zip(self.parameters, self.basis):
            blocks.append(f"# {name}\n{vf.to_text()}")
        return "\n".join(blocks)


def monomials(syms, degree: int) -> list:
    """Monomials of total degree <= degree as tuples of (Sym, exponent)."""
    out = [()]
    for d in range(1, degree + 1):
        for combo in combinations_with_replacement(range(len(syms)), d):
            exps: dict = {}
            for k in combo:
                exps[k] = exps.get(k, 0) + 1
            out.append(tuple((syms[k], e) for k, e in sorted(exps.items())))
    return out


def _mono_expr(m) -> Expr:
    e = Expr.const(1)
    for s, k in m:
        e = e * S(s) ** k
    return e


def _coef_sym(i: int, m) -> Sym:
    return coef(f"a{i}", tuple((s.name, s.order, k) for s, k in m))


def solve_polynomial_ansatz(ns: NormalSystem, an: Ansatz, degree: int = 2) -> SymmetryBasis:
    if degree < 0:
        raise ValueError("degree must be non-negative")
    # columns: highest generator first, higher degree first, so pivots land there
    cols = []
    for i in range(ns.n, 0, -1):
        ms = monomials(list(an.allowed[i]), degree)
        ms.sort(key=lambda m: -sum(k for _, k in m))
        for m in ms:
            cols.append((i, m, _coef_sym(i, m)))
    col_of = {sym_id(c): k for k, (_, _, c) in enumerate(cols)}
    gens = [ZERO_E] * ns.n
    for i, m, c in cols:
        gens[i - 1] = gens[i - 1] + S(c) * _mono_expr(m)
    generic = VField(ns, gens)
    c_ids = set(col_of)
    rows = []
    for E in commutator_residuals(ns, generic):
        num = E.numerator().num
        grouped: dict = {}
        for m, c in num.items():
            cm = [(m[k], m[k + 1]) for k in range(0, len(m), 2) if m[k] in c_ids]
            if len(cm) != 1 or cm[0][1] != 1:
                raise ValueError("residual is not linear in the ansatz coefficients")
            rest = tuple(x for k in range(0, len(m), 2) if m[k] not in c_ids for x in (m[k], m[k + 1]))
            grouped.setdefault(rest, {})[col_of[cm[0][0]]] = c
        for rest in sorted(grouped):
            row = [Q(0)] * len(cols)
            for k, c in grouped[rest].items():
                row[k] = Q(c)
            rows.append(row)
    null = q_nullspace(rows, len(cols)) if rows else _identity(len(cols))
    members = []
    for v in null:
        free = next(k for k in range(len(cols)) if v[k] == 1 and all(
            w is v or w[k] == 0 for w in null))
        members.append((free, v))
    members.sort(key=lambda t: (cols[t[0]][0], -sum(e for _, e in cols[t[0]][1]), str(cols[t[0]][2])))
    basis = []
    params = []
    for free, v in members:
        g = [ZERO_E] * ns.n
        for k, val in enumerate(v):
            if val:
                i, m, _ = cols[k]
                g[i - 1] = g[i - 1] + Expr.const(val) * _mono_expr(m)
        vf = VField(ns, g)
        if not verify_symmetry(ns, vf):
            raise AssertionError(f"solver produced a non-symmetry {vf}")
        basis.append(vf)
        params.append(str(cols[free][2]))
    return SymmetryBasis(basis, an, degree, params)


def _identity(n: int) -> list:
    return [[Q(1) if j == k else Q(0) for j in range(n)] for k in range(n)]
