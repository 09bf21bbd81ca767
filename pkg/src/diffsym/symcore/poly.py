"""Helpers on raw polynomial dicts that sit above the kernels."""
from __future__ import annotations

from functools import lru_cache

from .backend import K, Q, ONE
from .symbols import key_of

ONE_POLY = {(): ONE}


def const_poly(c) -> dict:
    c = Q(c)
    return {(): c} if c else {}


def sym_poly(i: int) -> dict:
    return {(i, 1): ONE}


def is_const(p: dict) -> bool:
    return not p or (len(p) == 1 and () in p)


def const_value(p: dict):
    return p.get((), Q(0))


def poly_ids(p: dict) -> set:
    out = set()
    for m in p:
        out.update(m[0::2])
    return out


def mono_key(m: tuple) -> tuple:
    pairs = sorted((key_of(m[i]), m[i + 1]) for i in range(0, len(m), 2))
    deg = sum(m[1::2])
    return (deg, tuple(pairs))


def lead_mono(p: dict) -> tuple:
    return max(p, key=mono_key)


def sorted_monos(p: dict, reverse=True) -> list:
    return sorted(p, key=mono_key, reverse=reverse)


def common_mono(p: dict) -> tuple:
    """Largest monomial dividing every term of p."""
    it = iter(p)
    first = next(it)
    acc = dict(zip(first[0::2], first[1::2]))
    for m in it:
        if not acc:
            break
        md = dict(zip(m[0::2], m[1::2]))
        for v in list(acc):
            e = md.get(v)
            if e is None:
                del acc[v]
            elif e < acc[v]:
                acc[v] = e
    out = []
    for v in sorted(acc):
        out.extend((v, acc[v]))
    return tuple(out)


def div_mono(p: dict, mono: tuple) -> dict:
    if not mono:
        return p
    return {K.mono_div(m, mono): c for m, c in p.items()}


def degree(p: dict, ids=None) -> int:
    if not p:
        return -1
    if ids is None:
        return max(sum(m[1::2]) for m in p)
    best = 0
    for m in p:
        d = 0
        for i in range(0, len(m), 2):
            if m[i] in ids:
                d += m[i + 1]
        if d > best:
            best = d
    return best


def split_by(p: dict, ids) -> dict:
    """Group terms by their monomial in ``ids``: {mono_in_ids: rest_poly}."""
    out: dict = {}
    for m, c in p.items():
        a = []
        b = []
        for i in range(0, len(m), 2):
            (a if m[i] in ids else b).extend((m[i], m[i + 1]))
        out.setdefault(tuple(a), {})[tuple(b)] = c
    return out


def poly_pow(p: dict, k: int) -> dict:
    if k == 0:
        return dict(ONE_POLY)
    result = None
    base = p
    while k:
        if k & 1:
            result = base if result is None else K.poly_mul(result, base)
        k >>= 1
        if k:
            base = K.poly_mul(base, base)
    return result


def divexact(p: dict, q: dict) -> dict:
    """Exact division p / q; raises ArithmeticError if q does not divide p."""
    if is_const(q):
        return K.poly_scale(p, 1 / const_value(q))
    lq = lead_mono(q)
    cq = q[lq]
    rem = dict(p)
    out: dict = {}
    # graded order makes the lead term of rem strictly decrease
    while rem:
        lr = lead_mono(rem)
        t = K.mono_div(lr, lq)
        if t is None:
            raise ArithmeticError("inexact polynomial division")
        c = rem[lr] / cq
        out[t] = out.get(t, 0) + c
        rem = K.poly_sub(rem, K.poly_mul_mono(q, t, c))
    return {m: c for m, c in out.items() if c}


# sympy bridge for gcd and square-free decomposition

@lru_cache(maxsize=256)
def _ring(n: int):
    from sympy import QQ, symbols
    from sympy.polys.orderings import lex
    from sympy.polys.rings import PolyRing
    gens = symbols(f"s0:{n}") if n else ()
    return PolyRing(gens, QQ, lex)


def _to_sympy(p: dict, order: list):
    R = _ring(len(order))
    pos = {v: i for i, v in enumerate(order)}
    n = len(order)
    d = {}
    for m, c in p.items():
        e = [0] * n
        for i in range(0, len(m), 2):
            e[pos[m[i]]] = m[i + 1]
        d[tuple(e)] = R.domain.convert(c)
    return R.from_dict(d) if d else R.zero


def _from_sympy(f, order: list) -> dict:
    out = {}
    for e, c in f.items():
        m = []
        for i, k in enumerate(e):
            if k:
                m.extend((order[i], k))
        out[tuple(m)] = Q(int(c.numerator), int(c.denominator))
    return out


def cofactors(p: dict, q: dict):
    """(g, p/g, q/g) with g a gcd of p and q."""
    order = sorted(poly_ids(p) | poly_ids(q))
    if not order:
        return dict(ONE_POLY), p, q
    g, a, b = _to_sympy(p, order).cofactors(_to_sympy(q, order))
    return _from_sympy(g, order), _from_sympy(a, order), _from_sympy(b, order)


def sqf_list(p: dict):
    """(constant, [(factor, multiplicity)]) square-free decomposition."""
    order = sorted(poly_ids(p))
    if not order:
        return const_value(p), []
    c, facs = _to_sympy(p, order).sqf_list()
    return Q(int(c.numerator), int(c.denominator)), [(_from_sympy(f, order), k) for f, k in facs]
