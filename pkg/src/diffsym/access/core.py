"""Strong accessibility and flat bases of the linearized system."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..diffiety import NormalSystem
from ..symcore import Expr, S, ZERO_E, fiber_a, fiber_b, jet, square_free_factors, zeta
from ..symcore.derivation import Derivation
from ..symcore.linalg import ff_nullspace, ff_rank, ff_solve
from ..symcore.symbols import Sym
from ..vfield import LazyBracket, SparseField, hat_tau_iterate


class NotAccessible(Exception):
    pass


class RankDegeneracy(Exception):
    pass


@dataclass
class AccessReport:
    lie_algebra_dim: int
    accessible: bool
    n: int
    m: int
    generator_log: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"lie_algebra_dim": self.lie_algebra_dim, "accessible": self.accessible,
                "n_plus_m": self.n + self.m, "generators": list(self.generator_log)}


def _coords(ns: NormalSystem) -> list:
    return [ns.x(i) for i in range(1, ns.n + 1)] + [jet(v, 1) for v in ns.free]


def strong_accessibility(ns: NormalSystem, rng: random.Random | None = None, max_rounds: int = 4) -> AccessReport:
    """Rank of the Lie algebra generated by [d_u, tau]^k, 0 <= k <= n, on the explicit form.

    Controls are u_j = x_j'; every generated field lives on span{d x_i, d u_j}.
    """
    rng = rng or random.Random(0)
    coords = _coords(ns)
    full = ns.n + ns.m
    basis: list = []
    rows: list = []
    log: list = []

    def try_add(fld, label) -> bool:
        row = [_img(fld, c) for c in coords]
        row = [r if r is not None else ZERO_E for r in row]
        if not any(row):
            return False
        if ff_rank(rows + [row], full, rng) > len(rows):
            rows.append(row)
            basis.append((fld, label))
            log.append(label)
            return True
        return False

    for j, v in enumerate(ns.free, start=1):
        base = SparseField({jet(v, 1): 1})
        for k in range(ns.n + 1):
            if len(rows) == full:
                break
            lbl = f"d_u{j}" if k == 0 else f"[d_u{j}, tau]^{k}"
            try_add(hat_tau_iterate(ns, base, k), lbl)
    for _ in range(max_rounds):
        if len(rows) == full:
            break
        grew = False
        cur = list(basis)
        for a in range(len(cur)):
            for b in range(a + 1, len(cur)):
                if len(rows) == full:
                    break
                if try_add(LazyBracket(cur[a][0], cur[b][0]), f"[{cur[a][1]}, {cur[b][1]}]"):
                    grew = True
        if not grew:
            break
    d = len(rows)
    return AccessReport(d, d == full, ns.n, ns.m, log)


def _img(fld, s: Sym):
    from ..symcore.symbols import sym_id
    return fld.image(sym_id(s))


class TauHat(Derivation):
    """The Cartan field of the tangent extension, on jets, a, b and zeta symbols."""

    def __init__(self, ns: NormalSystem):
        super().__init__()
        self.ns = ns
        names, controls, F = ns.explicit_form()
        self.lin = []
        for i, Fi in enumerate(F):
            e = ZERO_E
            for h in range(ns.n):
                d = Fi.diff(ns.x(h + 1))
                if d:
                    e = e + d * S(fiber_a(h + 1))
            for l, u in enumerate(controls):
                d = Fi.diff(u)
                if d:
                    e = e + d * S(fiber_b(l + 1, 0))
            self.lin.append(e)

    def coeff(self, s: Sym):
        if s.ns == "x":
            return self.ns._tau.coeff(s)
        if s.ns == "a":
            return self.lin[int(s.name[1:]) - 1]
        if s.ns in ("b", "z"):
            return S(Sym(s.ns, s.name, s.order + 1))
        return None


@dataclass
class ExtendedSystem:
    ns: NormalSystem
    tau_hat: TauHat

    def image_of_a(self, i: int) -> Expr:
        return self.tau_hat.lin[i - 1]


def tangent_extension(ns: NormalSystem) -> ExtendedSystem:
    return ExtendedSystem(ns, TauHat(ns))


@dataclass
class FlatBasisReport:
    dims: list
    r: list
    s: list
    k: list
    p: list
    zeta: list
    levels: list
    parametrization: dict
    assumptions: list
    roundtrip: bool
    coordinates: dict

    def to_json(self) -> dict:
        return {"r": list(self.r), "s": list(self.s), "k": list(self.k), "p": list(self.p),
                "dims": list(self.dims), "zeta": [str(z) for z in self.zeta], "levels": list(self.levels),
                "parametrization": {k: str(v) for k, v in self.parametrization.items()},
                "assumptions": list(self.assumptions), "roundtrip": self.roundtrip,
                "coordinates": dict(self.coordinates)}


def a_vector(e: Expr, n: int) -> list:
    return [e.diff(fiber_a(i)) for i in range(1, n + 1)]


def flat_basis(ns: NormalSystem, rng: random.Random | None = None) -> FlatBasisReport:
    rng = rng or random.Random(0)
    n, m = ns.n, ns.m
    th = TauHat(ns)
    a_syms = [fiber_a(i) for i in range(1, n + 1)]

    # Delta_k: iterated brackets of d_b with tau_hat; their a-components
    levels_fields: list = []  # levels_fields[l-1] = list of a-vectors of X_j^(l)
    cur = [SparseField({fiber_b(j, 0): 1}) for j in range(1, m + 1)]
    dims = [m]
    stack: list = []
    for l in range(1, n + 1):
        cur = [LazyBracket(X, th) for X in cur]
        vecs = []
        for X in cur:
            vec = []
            for sa in a_syms:
                c = _img(X, sa)
                vec.append(c if c is not None else ZERO_E)
            vecs.append(vec)
        levels_fields.append(vecs)
        stack = stack + vecs
        dims.append(m + ff_rank(stack, n, rng))
    r = [dims[k] - dims[k - 1] for k in range(1, n + 1)]
    while r and r[-1] == 0:
        r.pop()
    if dims[-1] != n + m:
        raise NotAccessible(f"dim Delta_n = {dims[-1]} < n + m = {n + m}")
    if r and r[0] != m:
        raise RankDegeneracy(f"r_1 = {r[0]} differs from m = {m}")
    h = len(r)
    s = [r[q] - (r[q + 1] if q + 1 < h else 0) for q in range(h)]
    kidx = sorted((sum(1 for rq in r if rq >= i) for i in range(1, m + 1)), reverse=True)

    zetas: list = []  # (Expr, level)
    for q in range(h, 0, -1):
        need = s[q - 1]
        if not need:
            continue
        rows = [v for l in range(q - 1) for v in levels_fields[l]]
        rows = [v for v in rows if any(v)]
        if rows:
            null = ff_nullspace(rows, n)
        else:
            null = [[Expr.const(1) if i == j else ZERO_E for i in range(n)] for j in range(n)]
        known = []
        for z, lev in zetas:
            e = z
            for j in range(lev - q + 1):
                known.append(a_vector(e, n))
                e = th.apply(e)
        found = 0
        for vec in null:
            if found == need:
                break
            base_rank = ff_rank(known, n, rng) if known else 0
            if ff_rank(known + [vec], n, rng) > base_rank:
                z = ZERO_E
                for c, sa in zip(vec, a_syms):
                    if c:
                        z = z + c * S(sa)
                zetas.append((z, q))
                known.append(vec)
                found += 1
        if found < need:
            raise RankDegeneracy(f"found {found} of {need} first integrals at level {q}")

    # final linear solve: tau_hat^k zeta_i = Z_{i,k}
    unknowns = a_syms + [fiber_b(j, 0) for j in range(1, m + 1)]
    A_rows, rhs = [], []
    for idx, (z, lev) in enumerate(zetas, start=1):
        e = z
        for k in range(lev + 1):
            A_rows.append([e.diff(u) for u in unknowns])
            rhs.append(S(zeta(idx, k)))
            if k < lev:
                e = th.apply(e)
                bad = [e.diff(fiber_b(j, 1)) for j in range(1, m + 1)]
                if any(bad) or (k + 1 < lev and any(e.diff(fiber_b(j, 0)) for j in range(1, m + 1))):
                    raise RankDegeneracy("derivative of a first integral leaves the a-space too early")
    if len(A_rows) != n + m:
        raise RankDegeneracy(f"parametrization system has {len(A_rows)} rows, expected {n + m}")
    try:
        sol = ff_solve(A_rows, rhs)
    except ValueError:
        raise RankDegeneracy("parametrization system is singular") from None
    param = {}
    for i in range(n):
        param[f"a{i + 1}"] = sol[i]
    for j in range(m):
        param[f"b{j + 1}"] = sol[n + j]

    assumptions = _assumptions(list(param.values()))
    ok = roundtrip_residuals(ns, th, param)
    return FlatBasisReport(dims, r, s, kidx, list(r), [z for z, _ in zetas], [l for _, l in zetas], param,
                           assumptions, all(e.is_zero() for e in ok),
                           {f"a{i}": ns.var(i) for i in range(1, n + 1)})


def _assumptions(exprs) -> list:
    facs = {}
    for e in exprs:
        if e.is_polynomial():
            continue
        for f, _ in square_free_factors(e.denominator()):
            facs[str(f)] = f
    return [f"{k} != 0" for k in sorted(facs)]


def roundtrip_residuals(ns: NormalSystem, th: TauHat, param: dict) -> list:
    """tau_hat(A_i) minus the linearized dynamics evaluated on the parametrization."""
    bind = {}
    for i in range(1, ns.n + 1):
        bind[fiber_a(i)] = param[f"a{i}"]
    for j in range(1, ns.m + 1):
        bind[fiber_b(j, 0)] = param[f"b{j}"]
    out = []
    for i in range(1, ns.n + 1):
        lhs = th.apply(param[f"a{i}"])
        rhs = th.lin[i - 1].subs(bind)
        out.append(lhs - rhs)
    return out
