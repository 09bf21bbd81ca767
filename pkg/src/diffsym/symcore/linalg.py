"""Linear algebra over the field of rational functions.

Elimination is exact on canonical :class:`Expr` entries.  Evaluation at a
few random rational points gives a lower bound on the generic rank and
short-circuits the symbolic work when that bound is already maximal.
"""
from __future__ import annotations

import random

from .backend import K, Q
from .errors import DenominatorVanishes
from .expr import Expr, ONE_E, ZERO_E
from . import poly as P


def random_point(ids, rng: random.Random, lo=-50, hi=50) -> dict:
    pt = {}
    for i in sorted(ids):
        v = 0
        while v == 0:
            v = rng.randint(lo, hi)
        d = rng.randint(1, 7)
        pt[i] = Q(v, d)
    return pt


def q_rank(rows, ncols: int) -> int:
    return len(K.rref(rows, ncols)[1])


def q_nullspace(rows, ncols: int) -> list:
    red, piv = K.rref(rows, ncols)
    free = [j for j in range(ncols) if j not in set(piv)]
    out = []
    for f in free:
        v = [Q(0)] * ncols
        v[f] = Q(1)
        for r, p in enumerate(piv):
            v[p] = -red[r][f]
        out.append(v)
    return out


def _ids(rows) -> set:
    out = set()
    for r in rows:
        for e in r:
            out |= e.ids()
    return out


def point_ranks(rows, ncols: int, rng: random.Random, tries: int = 3) -> list:
    ids = _ids(rows)
    ranks = []
    for _ in range(tries):
        pt = random_point(ids, rng)
        try:
            num = [[e.eval(pt) for e in r] for r in rows]
        except DenominatorVanishes:
            continue
        ranks.append(q_rank(num, ncols))
    return ranks


def ff_rref(rows, ncols: int):
    """Exact reduced row echelon form.  Returns (rows, pivot columns)."""
    mat = [list(r) for r in rows]
    pivots = []
    r = 0
    n = len(mat)
    for col in range(ncols):
        if r >= n:
            break
        best = -1
        size = None
        for i in range(r, n):
            e = mat[i][col]
            if e:
                t = e.n_terms()
                if size is None or t < size:
                    best, size = i, t
        if best < 0:
            continue
        mat[r], mat[best] = mat[best], mat[r]
        row = mat[r]
        inv = ONE_E / row[col]
        row = [e * inv if e else e for e in row]
        row[col] = ONE_E
        mat[r] = row
        nz = [k for k in range(col + 1, ncols) if row[k]]
        for i in range(n):
            if i == r:
                continue
            f = mat[i][col]
            if not f:
                continue
            other = mat[i]
            for k in nz:
                other[k] = other[k] - f * row[k]
            other[col] = ZERO_E
        pivots.append(col)
        r += 1
    return mat[:r], pivots


def ff_rank(rows, ncols: int | None = None, rng: random.Random | None = None) -> int:
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return 0
    if ncols is None:
        ncols = len(rows[0])
    rng = rng or random.Random(0)
    full = min(len(rows), ncols)
    ranks = point_ranks(rows, ncols, rng)
    if ranks and max(ranks) == full:
        return full
    return len(ff_rref(rows, ncols)[1])


def ff_nullspace(rows, ncols: int, clear=True) -> list:
    """Right nullspace basis from the reduced echelon form.

    With ``clear`` each vector is scaled to polynomial entries without common
    factor, first nonzero entry having leading coefficient one.
    """
    red, piv = ff_rref(rows, ncols) if rows else ([], [])
    pset = set(piv)
    out = []
    for f in range(ncols):
        if f in pset:
            continue
        v = [ZERO_E] * ncols
        v[f] = ONE_E
        for r, p in enumerate(piv):
            v[p] = -red[r][f]
        out.append(clear_denominators(v, f) if clear else v)
    return out


def clear_denominators(v: list, anchor: int | None = None) -> list:
    lcm = dict(P.ONE_POLY)
    for e in v:
        if e and not e.is_polynomial():
            g, _, b = P.cofactors(lcm, e.den)
            lcm = K.poly_mul(lcm, b)
    L = Expr.from_poly(lcm)
    w = [e * L for e in v]
    g = None
    for e in w:
        if e:
            g = e.num if g is None else P.cofactors(g, e.num)[0]
    if g is not None and not P.is_const(g):
        G = Expr.from_poly(g)
        w = [e / G for e in w]
    if anchor is None or not w[anchor]:
        anchor = next(i for i, e in enumerate(w) if e)
    e = w[anchor]
    lc = e.num[P.lead_mono(e.num)]
    if lc != 1:
        w = [x / Expr.const(lc) for x in w]
    return w


def ff_solve(A, b):
    """Solve the square system A x = b exactly; raises ValueError if singular."""
    n = len(A)
    aug = [list(A[i]) + [b[i]] for i in range(n)]
    red, piv = ff_rref(aug, n + 1)
    if piv[:n] != list(range(n)) or len(piv) != n:
        raise ValueError("singular system")
    return [red[i][n] for i in range(n)]
