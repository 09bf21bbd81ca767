"""Independent reference computations in sympy.

Nothing here imports the package's algebra; the tests compare the two
routes.  Systems are given as (free names, dep names, {dep: rhs string})
with rhs in sympy syntax using ``<name>_d`` for first derivatives.
"""
from __future__ import annotations

import itertools
import random

import sympy as sp


class Jets:
    """Jet symbols x, x_d, x_dd, ... for a list of names."""

    def __init__(self, names, maxorder=8):
        self.names = list(names)
        self.sym = {(v, k): sp.Symbol(v + "_" + "d" * k if k else v) for v in names for k in range(maxorder + 1)}

    def __call__(self, v, k=0):
        return self.sym[(v, k)]


def _rhs(jets, f: dict):
    loc = {str(s): s for s in jets.sym.values()}
    return {v: sp.sympify(e, locals=loc) for v, e in f.items()}


def tau(jets, free, dep, F, e, maxorder=6):
    out = 0
    for v in free:
        for k in range(maxorder):
            out += sp.diff(e, jets(v, k)) * jets(v, k + 1)
    for v in dep:
        out += sp.diff(e, jets(v)) * F[v]
    return sp.expand(out)


def symmetry_nullspace(free, dep, f: dict, allowed: dict, degree: int):
    """Dimension and basis of polynomial symmetries with a_i in the allowed variables.

    ``allowed`` maps every variable name to a list of (name, order) it may depend on.
    """
    names = list(free) + list(dep)
    J = Jets(names)
    F = _rhs(J, f)
    coeffs = []
    gens = {}
    for v in names:
        vars_ = [J(*a) for a in allowed[v]]
        g = 0
        for d in range(degree + 1):
            for combo in itertools.combinations_with_replacement(vars_, d):
                c = sp.Symbol(f"c{len(coeffs)}")
                coeffs.append(c)
                g += c * sp.Mul(*combo)
        gens[v] = g

    def delta(e):
        out = 0
        for v in free:
            img = gens[v]
            for k in range(4):
                out += sp.diff(e, J(v, k)) * img
                img = tau(J, free, dep, F, img)
        for v in dep:
            out += sp.diff(e, J(v)) * gens[v]
        return out

    eqs = []
    for v in dep:
        E = sp.together(tau(J, free, dep, F, gens[v]) - delta(F[v]))
        num = sp.numer(E)
        jet_syms = sorted(num.free_symbols - set(coeffs), key=str)
        poly = sp.Poly(sp.expand(num), *jet_syms) if jet_syms else None
        eqs.extend(poly.coeffs() if poly is not None else [num])
    M = sp.Matrix([[sp.diff(e, c) for c in coeffs] for e in eqs]) if eqs else sp.zeros(0, len(coeffs))
    null = M.nullspace() if eqs else [sp.eye(len(coeffs))[:, k] for k in range(len(coeffs))]
    sols = []
    for vec in null:
        sub = dict(zip(coeffs, vec))
        sols.append({v: sp.expand(gens[v].subs(sub)) for v in names})
    return len(null), sols


def state_allowed(names):
    return {v: [(w, 0) for w in names] for v in names}


def d_operator_generators(free, dep, f: dict, depth: int):
    names = list(free) + list(dep)
    J = Jets(names)
    F = _rhs(J, f)
    A = {v: sp.Symbol(f"A{k + 1}") for k, v in enumerate(names)}
    gens = []
    for v in dep:
        P = J(v, 1) - F[v]
        for _ in range(depth):
            P = sp.expand(sum(A[w] * sp.diff(P, J(w, 1)) for w in names))
            if P != 0:
                gens.append(P)
    return J, A, gens


def only_trivial_at_random_points(free, dep, f: dict, depth: int, points: int = 3, seed: int = 0) -> bool:
    """All A vanish on the generators specialized at random jets (projective elimination via Groebner)."""
    J, A, gens = d_operator_generators(free, dep, f, depth)
    rng = random.Random(seed)
    Avars = list(A.values())
    for _ in range(points):
        sub = {s: sp.Rational(rng.randint(-20, 20) or 1, rng.randint(1, 5)) for s in J.sym.values()}
        spec = [sp.expand(g.subs(sub)) for g in gens]
        spec = [g for g in spec if g != 0]
        if not spec:
            return False
        G = sp.groebner(spec, *Avars, order="grevlex")
        lead = [sp.Poly(g, *Avars).monoms(order="grevlex")[0] for g in G.exprs]
        for k in range(len(Avars)):
            if not any(m[k] > 0 and sum(m) == m[k] for m in lead):
                return False
    return True


def accessibility_dim(states, controls, F: dict) -> int:
    """Generic rank of the Lie algebra of iterated brackets of d/du_j with the drift on (x, u)."""
    xs = [sp.Symbol(s) for s in states]
    us = [sp.Symbol(u) for u in controls]
    coords = xs + us
    loc = {str(s): s for s in coords}
    drift = sp.Matrix([sp.sympify(F[s], locals=loc) for s in states] + [0] * len(us))

    def bracket(X, Y):
        return (Y.jacobian(coords) * X - X.jacobian(coords) * Y).applyfunc(sp.expand)

    fields = []
    for j in range(len(us)):
        e = sp.zeros(len(coords), 1)
        e[len(xs) + j] = 1
        fields.append(e)
    level = list(fields)
    for _ in range(len(coords)):
        level = [bracket(X, drift) for X in level]
        fields.extend(level)
    while True:
        M = sp.Matrix.hstack(*fields)
        r = M.rank()
        new = [bracket(X, Y) for X, Y in itertools.combinations(fields, 2)]
        M2 = sp.Matrix.hstack(*(fields + new))
        if M2.rank() == r or r == len(coords):
            return r
        fields = fields + new


def torus_field_orders(a: dict, x0: str, K: int):
    """Orders of delta^k x0 on the trivial diffiety with generators a (strings over x?_d... symbols)."""
    names = sorted(a)
    J = Jets(names, maxorder=40)
    loc = {str(s): s for s in J.sym.values()}
    gens = {v: sp.sympify(e, locals=loc) for v, e in a.items()}

    def D(e):  # total derivative on the trivial diffiety
        return sp.expand(sum(sp.diff(e, J(v, k)) * J(v, k + 1) for v in names for k in range(39)))

    images = {}
    for v in names:
        chain = [gens[v]]
        for _ in range(30):
            chain.append(D(chain[-1]))
        images[v] = chain

    def delta(e):
        return sp.expand(sum(sp.diff(e, J(v, k)) * images[v][k] for v in names for k in range(30)))

    def order(e):
        return max([k for (v, k), s in J.sym.items() if s in e.free_symbols], default=0)

    e = J(x0)
    out = [0]
    for _ in range(K):
        e = delta(e)
        out.append(order(e))
    return out


def is_symmetry(free, dep, f: dict, gens: dict) -> bool:
    """tau a_i == delta f_i for every dependent variable, with generators given as sympy strings."""
    names = list(free) + list(dep)
    J = Jets(names)
    F = _rhs(J, f)
    loc = {str(s): s for s in J.sym.values()}
    a = {v: sp.sympify(gens[v], locals=loc) for v in names}

    def delta(e):
        out = 0
        for v in free:
            img = a[v]
            for k in range(4):
                out += sp.diff(e, J(v, k)) * img
                img = tau(J, free, dep, F, img)
        for v in dep:
            out += sp.diff(e, J(v)) * a[v]
        return out

    return all(sp.simplify(tau(J, free, dep, F, a[v]) - delta(F[v])) == 0 for v in dep)
