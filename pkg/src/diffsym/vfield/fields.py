"""Vector fields on the diffiety and on extended coordinate spaces.

Every field is a :class:`Derivation`; its coefficient on a coordinate t is
``coeff(t)``.  Prolonged fields and brackets compute coefficients on demand,
so infinite supports never have to be materialized.

Bracket orientation: ``[X, Y](t) = X(Y t) - Y(X t)``; iterates with the
Cartan field are ``[X, tau]``.
"""
from __future__ import annotations

from ..diffiety import NormalSystem
from ..symcore import Expr, Sym, ZERO_E, jet
from ..symcore.derivation import Derivation
from ..symcore.parse import Parser, UndeclaredSymbol, tokenize
from ..symcore.symbols import sym_id


class SparseField(Derivation):
    """Finitely supported field given by a coefficient map."""

    def __init__(self, coeffs: dict):
        super().__init__()
        self.coeffs = {s: Expr.coerce(c) for s, c in coeffs.items() if not Expr.coerce(c).is_zero()}

    def coeff(self, s: Sym):
        return self.coeffs.get(s)

    def support(self):
        return list(self.coeffs)

    def __repr__(self):
        body = ", ".join(f"{s}: {c}" for s, c in self.coeffs.items())
        return f"SparseField({{{body}}})"


class VField(Derivation):
    """The prolongation of generators a_1..a_n.

    delta x_i^(k) = tau^k a_i for free variables and delta x_i = a_i for
    dependent ones.  Generators are stored in canonical coordinates.
    """

    def __init__(self, ns: NormalSystem, generators):
        super().__init__()
        gens = [ns.canonicalize(Expr.coerce(g)) for g in generators]
        if len(gens) != ns.n:
            raise ValueError(f"expected {ns.n} generators, got {len(gens)}")
        self.ns = ns
        self.generators = tuple(gens)
        self._jets: dict = {}

    def a(self, i: int) -> Expr:
        return self.generators[i - 1]

    def coeff(self, s: Sym):
        if s.ns != "x":
            return None
        ns = self.ns
        if s.name in ns.free:
            i = ns.free.index(s.name)
            return self.jet_image(i, s.order)
        if s.name in ns.dep:
            i = ns.m + ns.dep.index(s.name)
            if s.order == 0:
                return self.generators[i]
            return ns.tau_power(self.generators[i], s.order)
        return None

    def jet_image(self, i: int, k: int) -> Expr:
        """tau^k a_{i+1}, memoized along k."""
        chain = self._jets.setdefault(i, [self.generators[i]])
        while len(chain) <= k:
            chain.append(self.ns.tau(chain[-1]))
        return chain[k]

    @property
    def order(self) -> int:
        best = 0
        for g in self.generators:
            for s in g.symbols():
                if s.ns == "x" and s.order > best:
                    best = s.order
        return best

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.generators)

    def __add__(self, other: "VField") -> "VField":
        return VField(self.ns, [a + b for a, b in zip(self.generators, other.generators)])

    def scale(self, c) -> "VField":
        return VField(self.ns, [g * c for g in self.generators])

    def __eq__(self, other):
        return isinstance(other, VField) and self.ns is other.ns and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    def to_text(self) -> str:
        return "".join(f"a{i + 1} = {g};\n" for i, g in enumerate(self.generators))

    def to_json(self) -> dict:
        return {f"a{i + 1}": str(g) for i, g in enumerate(self.generators)}

    def __repr__(self):
        return "VField(" + ", ".join(str(g) for g in self.generators) + ")"


class LazyBracket(Derivation):
    """[X, Y] with coefficients computed on request."""

    def __init__(self, X: Derivation, Y: Derivation):
        super().__init__()
        self.X = X
        self.Y = Y

    def coeff(self, s: Sym):
        i = sym_id(s)
        yt = self.Y.image(i)
        xt = self.X.image(i)
        out = ZERO_E
        if yt is not None:
            out = out + self.X.apply(yt)
        if xt is not None:
            out = out - self.Y.apply(xt)
        return out


def delta_apply(ns: NormalSystem, vf: VField, e: Expr) -> Expr:
    return vf.apply(ns.canonicalize(e))


def commutator_residuals(ns: NormalSystem, vf: VField) -> list:
    """E_i = tau a_i - delta f_i for the dependent variables."""
    out = []
    for k, v in enumerate(ns.dep):
        i = ns.m + k
        out.append(ns.tau(vf.generators[i]) - vf.apply(ns.f[v]))
    return out


def lie_bracket(X: Derivation, Y: Derivation, ns: NormalSystem | None = None) -> Derivation:
    """Coordinatewise bracket.  Two finite fields give a SparseField."""
    if isinstance(X, SparseField) and isinstance(Y, SparseField):
        supp = set(X.coeffs) | set(Y.coeffs)
        lb = LazyBracket(X, Y)
        return SparseField({s: lb.coeff(s) for s in supp})
    if isinstance(X, VField) and isinstance(Y, VField):
        return bracket_vfields(X, Y)
    return LazyBracket(X, Y)


def bracket_vfields(X: VField, Y: VField) -> VField:
    """Bracket of two prolonged fields, re-prolonged from its generators.

    Exact whenever X and Y commute with tau (e.g. symmetries); the bracket
    of two such fields is again determined by its action on x_1..x_n.
    """
    ns = X.ns
    gens = []
    for i in range(ns.n):
        gens.append(X.apply(Y.generators[i]) - Y.apply(X.generators[i]))
    return VField(ns, gens)


def hat_tau_iterate(ns: NormalSystem, base: Derivation, k: int) -> Derivation:
    if k < 0:
        raise ValueError("k must be non-negative")
    f = base
    for _ in range(k):
        f = LazyBracket(f, ns._tau)
    return f


def zero_field(ns: NormalSystem) -> VField:
    return VField(ns, [ZERO_E] * ns.n)


def parse_vfield(ns: NormalSystem, text: str) -> VField:
    """Parse ``a1 = <expr>; ...`` (``a_<name>`` also accepted); missing generators are zero."""
    def resolve(name, order, tok):
        if name in ns.names:
            return Expr.sym(jet(name, order))
        raise UndeclaredSymbol(f"undeclared symbol {name!r}", tok.line, tok.col)

    p = Parser(tokenize(text), resolve)
    gens = [ZERO_E] * ns.n
    seen = set()
    while p.tok.kind != "END":
        t = p.next()
        idx = None
        if t.kind == "ID" and t.text.startswith("a_") and t.text[2:] in ns.names:
            idx = ns.index(t.text[2:])
        elif t.kind == "ID" and t.text[:1] == "a" and t.text[1:].isdigit():
            idx = int(t.text[1:])
        if idx is None or not 1 <= idx <= ns.n:
            p.error(f"expected a generator name a1..a{ns.n}", t)
        if idx in seen:
            p.error(f"generator a{idx} given twice", t)
        seen.add(idx)
        p.expect("=")
        gens[idx - 1] = p.expr()
        if p.tok.kind != "END":
            p.expect(";")
    return VField(ns, gens)
