"""Canonical rational functions over interned symbols.

An :class:`Expr` is ``num/den`` with ``gcd(num, den) = 1`` and the leading
coefficient of ``den`` (graded order on :func:`sym_key`) equal to one, so two
equal rational functions have identical dicts.
"""
from __future__ import annotations

from .backend import K, Q, ZERO, ONE
from . import poly as P
from .errors import CyclicBinding, DenominatorVanishes, DivisionByZero, NotPolynomial
from .symbols import Sym, sym_id, sym_of, key_of, sym_str


def _normalize(num: dict, den: dict):
    if not num:
        return {}, P.ONE_POLY
    if P.is_const(den):
        c = P.const_value(den)
        if c == ONE:
            return num, P.ONE_POLY
        return K.poly_scale(num, 1 / c), P.ONE_POLY
    if len(den) == 1 or len(num) == 1:
        # a monomial factor is the only possible common factor
        g = _mono_gcd(num, den)
        if g:
            num = P.div_mono(num, g)
            den = P.div_mono(den, g)
    else:
        ni = P.poly_ids(num)
        di = P.poly_ids(den)
        if ni & di:
            g, a, b = P.cofactors(num, den)
            if not P.is_const(g):
                num, den = a, b
        else:
            # a common factor would have to involve symbols of both
            g = _mono_gcd(num, den)
            if g:
                num = P.div_mono(num, g)
                den = P.div_mono(den, g)
    if P.is_const(den):
        c = P.const_value(den)
        return (num if c == ONE else K.poly_scale(num, 1 / c)), P.ONE_POLY
    f = _primitive_factor(den)
    if f != ONE:
        num = K.poly_scale(num, f)
        den = K.poly_scale(den, f)
    return num, den


def _primitive_factor(p: dict):
    """Scalar making p integral, with coprime coefficients and positive leading coefficient."""
    from math import gcd, lcm
    L = 1
    for c in p.values():
        L = lcm(L, int(c.denominator))
    G = 0
    for c in p.values():
        G = gcd(G, int(c.numerator * (L // int(c.denominator))))
    f = Q(L, G)
    if p[P.lead_mono(p)] < 0:
        f = -f
    return f


def _mono_gcd(p: dict, q: dict) -> tuple:
    a = P.common_mono(p)
    if not a:
        return ()
    b = P.common_mono(q)
    if not b:
        return ()
    da = dict(zip(a[0::2], a[1::2]))
    out = []
    for i in range(0, len(b), 2):
        v = b[i]
        if v in da:
            out.extend((v, min(da[v], b[i + 1])))
    return tuple(out)


class Expr:
    __slots__ = ("num", "den", "_h")

    def __init__(self, num=None, den=None, _raw=False):
        if num is None:
            num = {}
        if den is None:
            den = P.ONE_POLY
        elif not den:
            raise DivisionByZero("zero denominator")
        if not _raw:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._h = None

    # constructors

    @staticmethod
    def const(c) -> "Expr":
        return Expr(P.const_poly(c), None, _raw=True)

    @staticmethod
    def sym(s: Sym) -> "Expr":
        return Expr(P.sym_poly(sym_id(s)), None, _raw=True)

    @staticmethod
    def from_poly(num: dict) -> "Expr":
        return Expr(num, None, _raw=True)

    @staticmethod
    def coerce(x) -> "Expr":
        if isinstance(x, Expr):
            return x
        if isinstance(x, Sym):
            return Expr.sym(x)
        return Expr.const(x)

    # predicates

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return len(self.den) == 1 and () in self.den

    def is_const(self) -> bool:
        return self.is_polynomial() and P.is_const(self.num)

    def const_value(self):
        if not self.is_const():
            raise ValueError("not a constant")
        return P.const_value(self.num)

    def ids(self) -> set:
        return P.poly_ids(self.num) | P.poly_ids(self.den)

    def symbols(self) -> set:
        return {sym_of(i) for i in self.ids()}

    def depends_on(self, s: Sym) -> bool:
        return sym_id(s) in self.ids()

    def n_terms(self) -> int:
        return len(self.num) + len(self.den)

    # arithmetic

    def __add__(self, other):
        other = Expr.coerce(other)
        if self.is_polynomial() and other.is_polynomial():
            return Expr(K.poly_add(self.num, other.num), None, _raw=True)
        if self.den == other.den:
            return Expr(K.poly_add(self.num, other.num), self.den)
        num = K.poly_add(K.poly_mul(self.num, other.den), K.poly_mul(other.num, self.den))
        return Expr(num, K.poly_mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return Expr(K.poly_scale(self.num, Q(-1)), self.den, _raw=True)

    def __sub__(self, other):
        return self + (-Expr.coerce(other))

    def __rsub__(self, other):
        return Expr.coerce(other) + (-self)

    def __mul__(self, other):
        other = Expr.coerce(other)
        if not self.num or not other.num:
            return ZERO_E
        if self.is_polynomial() and other.is_polynomial():
            return Expr(K.poly_mul(self.num, other.num), None, _raw=True)
        return Expr(K.poly_mul(self.num, other.num), K.poly_mul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Expr.coerce(other)
        if not other.num:
            raise DivisionByZero("division by the zero expression")
        if other.is_const():
            return Expr(K.poly_scale(self.num, 1 / P.const_value(other.num)), self.den, _raw=True)
        return Expr(K.poly_mul(self.num, other.den), K.poly_mul(self.den, other.num))

    def __rtruediv__(self, other):
        return Expr.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("integer exponents only")
        if k < 0:
            return ONE_E / (self ** (-k))
        return Expr(P.poly_pow(self.num, k), P.poly_pow(self.den, k), _raw=True)

    def __eq__(self, other):
        if not isinstance(other, Expr):
            try:
                other = Expr.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._h is None:
            self._h = hash((frozenset(self.num.items()), frozenset(self.den.items())))
        return self._h

    # calculus

    def diff(self, s) -> "Expr":
        v = s if isinstance(s, int) else sym_id(s)
        dn = K.poly_diff(self.num, v)
        if self.is_polynomial():
            return Expr(dn, None, _raw=True)
        dd = K.poly_diff(self.den, v)
        if not dd:
            return Expr(dn, self.den)
        num = K.poly_sub(K.poly_mul(dn, self.den), K.poly_mul(self.num, dd))
        return Expr(num, K.poly_mul(self.den, self.den))

    def subs(self, bindings: dict) -> "Expr":
        if not bindings:
            return self
        b = {}
        for s, v in bindings.items():
            b[s if isinstance(s, int) else sym_id(s)] = Expr.coerce(v)
        for v in b.values():
            if v.ids() & b.keys():
                raise CyclicBinding("a binding value mentions a bound symbol")
        if not (self.ids() & b.keys()):
            return self
        num = _subs_poly(self.num, b)
        if self.is_polynomial():
            return num
        return num / _subs_poly(self.den, b)

    def eval(self, point: dict):
        pt = {}
        for s, v in point.items():
            pt[s if isinstance(s, int) else sym_id(s)] = Q(v)
        try:
            d = K.poly_eval(self.den, pt, ONE)
            if not d:
                raise DenominatorVanishes("denominator vanishes at the point")
            return K.poly_eval(self.num, pt, ONE) / d
        except KeyError as exc:
            raise ValueError(f"point does not bind {sym_str(sym_of(exc.args[0]))}") from None

    # structure

    def numerator(self) -> "Expr":
        return Expr(self.num, None, _raw=True)

    def denominator(self) -> "Expr":
        return Expr(self.den, None, _raw=True)

    def coeffs_in(self, syms) -> dict:
        """Polynomial coefficients w.r.t. the given symbols: {monomial tuple: Expr}.

        Requires the denominator to be free of those symbols.
        """
        ids = {sym_id(s) if isinstance(s, Sym) else s for s in syms}
        if P.poly_ids(self.den) & ids:
            raise NotPolynomial("denominator depends on the extraction symbols")
        out = {}
        for m, rest in P.split_by(self.num, ids).items():
            if self.is_polynomial():
                out[m] = Expr(rest, None, _raw=True)
            else:
                out[m] = Expr(rest, self.den)
        return out

    def degree_in(self, syms) -> int:
        ids = {sym_id(s) if isinstance(s, Sym) else s for s in syms}
        return P.degree(self.num, ids)

    def total_degree(self) -> int:
        return P.degree(self.num)

    def __repr__(self):
        return f"Expr({self})"

    def __str__(self):
        n = _poly_str(self.num)
        if self.is_polynomial():
            return n
        d = _poly_str(self.den)
        if len(self.num) > 1:
            n = f"({n})"
        if len(self.den) > 1 or _needs_paren(self.den):
            d = f"({d})"
        return f"{n}/{d}"


def _needs_paren(p: dict) -> bool:
    m, c = next(iter(p.items()))
    return c != ONE or len(m) > 2 or (len(m) == 2 and m[1] != 1)


def _subs_poly(p: dict, b: dict) -> Expr:
    cache: dict = {}
    acc_poly: dict = {}
    acc: Expr | None = None
    for m, c in p.items():
        term = Expr.const(c)
        rest = []
        for i in range(0, len(m), 2):
            v, e = m[i], m[i + 1]
            if v in b:
                key = (v, e)
                pw = cache.get(key)
                if pw is None:
                    pw = b[v] ** e
                    cache[key] = pw
                term = term * pw
            else:
                rest.extend((v, e))
        if rest:
            term = term * Expr({tuple(rest): ONE}, None, _raw=True)
        if term.is_polynomial():
            acc_poly = K.poly_add(acc_poly, term.num)
        else:
            acc = term if acc is None else acc + term
    out = Expr(acc_poly, None, _raw=True)
    return out if acc is None else out + acc


def _coef_str(c) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _factor_key(t):
    # unknowns and auxiliaries before jet coordinates: "A2*x1'"
    k = key_of(t[0])
    return (k[0] == 0, k)


def mono_str(m: tuple) -> str:
    pairs = sorted(((m[i], m[i + 1]) for i in range(0, len(m), 2)), key=_factor_key)
    parts = []
    for v, e in pairs:
        s = sym_str(sym_of(v))
        parts.append(s if e == 1 else f"{s}^{e}")
    return "*".join(parts)


def _poly_str(p: dict) -> str:
    if not p:
        return "0"
    out = []
    for i, m in enumerate(sorted(p, key=_print_key)):
        c = p[m]
        neg = c < 0
        a = -c if neg else c
        ms = mono_str(m)
        if not ms:
            body = _coef_str(a)
        elif a == 1:
            body = ms
        else:
            body = f"{_coef_str(a)}*{ms}"
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def _print_key(m: tuple):
    # ascending degree, then symbol order: "A3 - A2*x1'", "x^2 - 1" reads as "-1 + x^2"
    deg, pairs = P.mono_key(m)
    return (deg == 0, deg, pairs)


ZERO_E = Expr.const(0)
ONE_E = Expr.const(1)


def S(s: Sym) -> Expr:
    return Expr.sym(s)


def C(c) -> Expr:
    return Expr.const(Q(c))
