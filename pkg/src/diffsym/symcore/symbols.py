"""Symbols shared by every expression.

A symbol lives in a namespace:

========  ==============================================
``x``     jet variable ``name^(order)``
``A``     auxiliary symbols of the order-bound criterion
``a``     fiber coordinate ``a_i`` of the tangent extension
``b``     fiber coordinate ``b_{j,k}`` (``order`` is k)
``z``     flat-output jets ``zeta_i^(k)``
``U``     partial derivative of an unknown function
``c``     ansatz coefficient
``p``     free parameter
========  ==============================================

Symbols are interned to small integers.  The integer is only a dictionary
key; every user-visible order goes through :func:`sym_key`, which depends on
the symbol alone and is therefore stable across runs.
"""
from __future__ import annotations

import re
import threading
from dataclasses import dataclass

NS_RANK = {"x": 0, "A": 1, "a": 2, "b": 3, "z": 4, "U": 5, "c": 6, "p": 7}

_DIGITS = re.compile(r"(\d+)")


def natural_key(name: str) -> tuple:
    parts = _DIGITS.split(name)
    return tuple((0, int(p)) if p.isdigit() else (1, p) for p in parts if p != "")


@dataclass(frozen=True)
class Sym:
    ns: str
    name: str
    order: int = 0
    # for 'U': tuple of (variable Sym, multiplicity) sorted by sym_key
    # for 'c': the exponent vector of the monomial it multiplies
    deriv: tuple = ()

    def __str__(self) -> str:
        return sym_str(self)


_lock = threading.Lock()
_ids: dict[Sym, int] = {}
_syms: list[Sym] = []
_keys: list[tuple] = []


def sym_id(s: Sym) -> int:
    i = _ids.get(s)
    if i is not None:
        return i
    with _lock:
        i = _ids.get(s)
        if i is None:
            i = len(_syms)
            _syms.append(s)
            _keys.append(_compute_key(s))
            _ids[s] = i
    return i


def sym_of(i: int) -> Sym:
    return _syms[i]


def key_of(i: int) -> tuple:
    return _keys[i]


def _compute_key(s: Sym) -> tuple:
    d = tuple((sym_key(v), k) for v, k in s.deriv) if s.ns == "U" else s.deriv
    return (NS_RANK[s.ns], natural_key(s.name), s.order, d)


def sym_key(s: Sym) -> tuple:
    return _keys[sym_id(s)]


# constructors

def jet(name: str, order: int = 0) -> Sym:
    if order < 0:
        raise ValueError("negative jet order")
    return Sym("x", name, order)


def aux_A(i: int) -> Sym:
    return Sym("A", f"A{i}")


def fiber_a(i: int) -> Sym:
    return Sym("a", f"a{i}")


def fiber_b(j: int, k: int = 0) -> Sym:
    return Sym("b", f"b{j}", k)


def zeta(i: int, k: int = 0) -> Sym:
    return Sym("z", f"zeta{i}", k)


def coef(func: str, expvec: tuple) -> Sym:
    return Sym("c", func, 0, tuple(expvec))


def param(name: str) -> Sym:
    return Sym("p", name)


def unknown(func: str, deriv=()) -> Sym:
    """Partial derivative of the unknown function ``func``.

    ``deriv`` is an iterable of (variable Sym, multiplicity) or a mapping.
    """
    items = deriv.items() if isinstance(deriv, dict) else deriv
    acc: dict[Sym, int] = {}
    for v, k in items:
        if k:
            acc[v] = acc.get(v, 0) + k
    d = tuple(sorted(acc.items(), key=lambda t: sym_key(t[0])))
    return Sym("U", func, 0, d)


def unknown_diff(s: Sym, v: Sym, k: int = 1) -> Sym:
    d = dict(s.deriv)
    d[v] = d.get(v, 0) + k
    return unknown(s.name, d)


def is_jet(s: Sym) -> bool:
    return s.ns == "x"


def prime_str(name: str, k: int) -> str:
    if k <= 3:
        return name + "'" * k
    return f"D({name},{k})"


def sym_str(s: Sym) -> str:
    if s.ns in ("x", "z", "b"):
        return prime_str(s.name, s.order)
    if s.ns == "U":
        if not s.deriv:
            return s.name
        parts = []
        for v, k in s.deriv:
            parts.extend([sym_str(v)] * k)
        return "d[" + ",".join(parts) + "]" + s.name
    if s.ns == "c":
        parts = []
        for item in s.deriv:
            if isinstance(item, tuple) and len(item) == 3:
                v = prime_str(item[0], item[1])
                parts.append(v if item[2] == 1 else f"{v}^{item[2]}")
            else:
                parts.append(str(item))
        return f"c_{s.name}[{'*'.join(parts) or '1'}]"
    return s.name
