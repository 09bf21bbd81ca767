"""Named operations on expressions."""
from __future__ import annotations

from . import poly as P
from .backend import K, ONE
from .errors import NotPolynomial
from .expr import Expr, _primitive_factor
from .symbols import Sym, sym_id, sym_of


def poly_arith(lhs: Expr, rhs: Expr, op: str) -> Expr:
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        return lhs / rhs
    raise ValueError(f"unknown operation {op!r}")


def partial(e: Expr, v: Sym) -> Expr:
    return e.diff(v)


def substitute(e: Expr, bindings: dict) -> Expr:
    return e.subs(bindings)


def eval_rational(e: Expr, point: dict):
    return e.eval(point)


def order_in(e: Expr, name: str):
    """Largest k such that e depends on name^(k), or None."""
    best = None
    for i in e.ids():
        s = sym_of(i)
        if s.ns == "x" and s.name == name and (best is None or s.order > best):
            best = s.order
    return best


def square_free_factors(e: Expr) -> list:
    """Square-free splitting with monomial variable factors pulled out first.

    The product of ``factor**multiplicity`` equals e up to a rational
    constant.
    """
    if not e.is_polynomial():
        raise NotPolynomial("square_free_factors needs a polynomial")
    if e.is_const():
        return []
    num = e.num
    mono = P.common_mono(num)
    out = []
    for i in range(0, len(mono), 2):
        out.append((Expr.from_poly({(mono[i], 1): ONE}), mono[i + 1]))
    rest = P.div_mono(num, mono)
    if not P.is_const(rest):
        _, facs = P.sqf_list(rest)
        for f, k in facs:
            if P.is_const(f):
                continue
            out.append((Expr.from_poly(K.poly_scale(f, _primitive_factor(f))), k))
    return out
