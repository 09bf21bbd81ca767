"""Buchberger's algorithm for polynomials in a few variables over Q(jets).

Used to decide whether a homogeneous system has only the zero solution over
the algebraic closure of the coefficient field: that happens exactly when
the leading monomials of a Groebner basis contain a pure power of every
variable.
"""
from __future__ import annotations

from ..symcore import Expr
from ..symcore.symbols import sym_id


class GBCapExceeded(Exception):
    pass


def to_dpoly(e: Expr, var_ids: list) -> dict:
    """{exponent tuple: Expr coefficient}; denominators are dropped (they are units)."""
    num = e.numerator()
    pos = {v: i for i, v in enumerate(var_ids)}
    out = {}
    for m, c in num.coeffs_in(var_ids).items():
        ev = [0] * len(var_ids)
        for i in range(0, len(m), 2):
            ev[pos[m[i]]] = m[i + 1]
        out[tuple(ev)] = c
    return {k: v for k, v in out.items() if v}


def _key(ev):
    # graded reverse lexicographic
    return (sum(ev), tuple(-x for x in reversed(ev)))


def _lead(p):
    return max(p, key=_key)


def _sub_mul(p, q, c, shift):
    out = dict(p)
    for ev, cq in q.items():
        k = tuple(a + b for a, b in zip(ev, shift))
        v = out.get(k)
        v = -c * cq if v is None else v - c * cq
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _monic(p):
    lc = p[_lead(p)]
    return {k: v / lc for k, v in p.items()}


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _reduce(p, G):
    p = dict(p)
    r = {}
    while p:
        lt = _lead(p)
        c = p[lt]
        for g in G:
            lg = _lead(g)
            if _divides(lg, lt):
                shift = tuple(y - x for x, y in zip(lg, lt))
                p = _sub_mul(p, g, c, shift)
                break
        else:
            r[lt] = c
            del p[lt]
    return r


def groebner(polys: list, nvars: int, max_pairs: int = 400) -> list:
    G = [_monic(p) for p in polys if p]
    pairs = [(i, j) for i in range(len(G)) for j in range(i)]
    done = 0
    while pairs:
        pairs.sort(key=lambda ij: _key(tuple(max(a, b) for a, b in zip(_lead(G[ij[0]]), _lead(G[ij[1]])))))
        i, j = pairs.pop(0)
        done += 1
        if done > max_pairs:
            raise GBCapExceeded("too many S-pairs")
        li, lj = _lead(G[i]), _lead(G[j])
        lcm = tuple(max(a, b) for a, b in zip(li, lj))
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue  # coprime leads reduce to zero
        s = _sub_mul({tuple(a + b for a, b in zip(ev, tuple(x - y for x, y in zip(lcm, li)))): c
                      for ev, c in G[i].items()}, G[j], Expr.const(1), tuple(x - y for x, y in zip(lcm, lj)))
        r = _reduce(s, G)
        if r:
            G.append(_monic(r))
            k = len(G) - 1
            pairs.extend((k, t) for t in range(k))
    return G


def only_trivial_zero(polys: list, nvars: int, max_pairs: int = 400) -> tuple:
    """(decided_trivial, basis) for a homogeneous system in nvars variables."""
    if nvars == 0:
        return True, []
    if not any(polys):
        return False, []
    G = groebner(polys, nvars, max_pairs)
    leads = [_lead(g) for g in G]
    for v in range(nvars):
        if not any(l[v] > 0 and all(x == 0 for w, x in enumerate(l) if w != v) for l in leads):
            return False, G
    return True, G


def from_dpoly(p: dict, var_exprs: list) -> Expr:
    out = Expr.const(0)
    for ev, c in p.items():
        t = c
        for v, k in zip(var_exprs, ev):
            if k:
                t = t * v ** k
        out = out + t
    return out


__all__ = ["groebner", "only_trivial_zero", "to_dpoly", "from_dpoly", "GBCapExceeded", "sym_id"]
