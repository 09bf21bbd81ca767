"""Derivations acting on expressions through the images of symbols."""
from __future__ import annotations

from .backend import K
from .expr import Expr, ZERO_E
from .symbols import Sym, sym_of


class Derivation:
    """A derivation d with d(s) given by :meth:`coeff` for each symbol s.

    Subclasses override ``coeff``; ``None`` means d(s) = 0.  Results are
    memoized per symbol, so ``coeff`` must be a pure function.
    """

    def __init__(self):
        self._cache: dict[int, Expr | None] = {}

    def coeff(self, s: Sym) -> Expr | None:
        raise NotImplementedError

    def image(self, i: int) -> Expr | None:
        if i in self._cache:
            return self._cache[i]
        v = self.coeff(sym_of(i))
        if v is not None and v.is_zero():
            v = None
        self._cache[i] = v
        return v

    def _apply_poly(self, p: dict) -> Expr:
        ids = set()
        for m in p:
            ids.update(m[0::2])
        poly_acc: dict = {}
        rat = None
        for i in sorted(ids):
            img = self.image(i)
            if img is None:
                continue
            dp = K.poly_diff(p, i)
            if not dp:
                continue
            if img.is_polynomial():
                poly_acc = K.poly_add(poly_acc, K.poly_mul(dp, img.num))
            else:
                t = Expr.from_poly(dp) * img
                rat = t if rat is None else rat + t
        out = Expr.from_poly(poly_acc)
        return out if rat is None else out + rat

    def apply(self, e: Expr) -> Expr:
        if e.is_const():
            return ZERO_E
        dn = self._apply_poly(e.num)
        if e.is_polynomial():
            return dn
        dd = self._apply_poly(e.den)
        N = Expr.from_poly(e.num)
        D = Expr.from_poly(e.den)
        return (dn * D - N * dd) / (D * D)

    def __call__(self, e: Expr) -> Expr:
        return self.apply(e)

    def power(self, e: Expr, k: int) -> Expr:
        for _ in range(k):
            e = self.apply(e)
        return e


class MapDerivation(Derivation):
    """Derivation given by an explicit finite map symbol -> Expr."""

    def __init__(self, images: dict):
        super().__init__()
        self.images = dict(images)

    def coeff(self, s):
        return self.images.get(s)
