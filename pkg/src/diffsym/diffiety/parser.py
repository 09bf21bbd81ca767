"""Parser for system definition files.

::

    system <id> ;
    ( free <id>+ ; )? ( dep <id>+ ; )? ( controls <id>+ ; )?
    ( eq <jetvar> = <expr> ; )*

With ``controls`` the file is in explicit style: every state has an equation
``x' = F(x, u)``.  States are the ``dep`` list, or the left-hand sides in
order of appearance when ``dep`` is omitted.  Without ``controls`` the file
is in implicit style: each ``dep`` variable gets ``x' = f(x, free')``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..symcore import Expr, jet
from ..symcore.parse import ParseError, Parser, Token, UndeclaredSymbol, tokenize
from .errors import DuplicateEquation

KEYWORDS = ("system", "free", "dep", "controls", "eq")


@dataclass
class Equation:
    lhs: str
    lhs_order: int
    rhs: Expr
    line: int = 0


@dataclass
class SystemDef:
    name: str
    free_names: list = field(default_factory=list)
    dep_names: list = field(default_factory=list)
    control_names: list = field(default_factory=list)
    equations: list = field(default_factory=list)

    @property
    def explicit(self) -> bool:
        return bool(self.control_names)

    @property
    def state_names(self) -> list:
        if self.explicit:
            if self.dep_names:
                return list(self.dep_names)
            seen = []
            for eq in self.equations:
                if eq.lhs not in seen:
                    seen.append(eq.lhs)
            return seen
        return list(self.free_names) + list(self.dep_names)


def _ids_until_semicolon(p: Parser) -> list[Token]:
    out = []
    while p.tok.kind == "ID":
        out.append(p.next())
    if not out:
        p.error("expected at least one identifier")
    p.expect(";")
    return out


def parse_system(text: str) -> SystemDef:
    toks = tokenize(text)
    declared: dict[str, str] = {}

    def resolve(name: str, order: int, tok: Token) -> Expr:
        if name not in declared:
            if name == "t":
                raise UndeclaredSymbol("time-varying systems are not supported (found 't')", tok.line, tok.col)
            raise UndeclaredSymbol(f"undeclared symbol {name!r}", tok.line, tok.col)
        return Expr.sym(jet(name, order))

    p = Parser(toks, resolve)
    if p.tok.kind == "END":
        p.error("empty input")
    p.expect("system")
    if p.tok.kind != "ID":
        p.error("expected a system name")
    sd = SystemDef(p.next().text)
    p.expect(";")

    seen_sections = set()
    while p.tok.kind == "ID" and p.tok.text in ("free", "dep", "controls"):
        kw = p.next()
        if kw.text in seen_sections:
            p.error(f"section {kw.text!r} declared twice", kw)
        seen_sections.add(kw.text)
        for t in _ids_until_semicolon(p):
            if t.text in KEYWORDS or t.text == "D":
                p.error(f"{t.text!r} is reserved", t)
            if t.text in declared:
                p.error(f"{t.text!r} declared twice", t)
            declared[t.text] = kw.text
            getattr(sd, {"free": "free_names", "dep": "dep_names", "controls": "control_names"}[kw.text]).append(t.text)
    if sd.control_names and sd.free_names:
        raise ParseError("use either free/dep (implicit) or controls (explicit), not both", toks[0].line, toks[0].col)

    if sd.control_names and not sd.dep_names:
        # states are the left-hand sides
        for i, t in enumerate(toks[:-1]):
            if t.kind == "ID" and t.text == "eq" and toks[i + 1].kind == "ID":
                nm = toks[i + 1].text
                if nm != "D" and nm not in declared:
                    declared[nm] = "dep"
                elif nm == "D" and i + 3 < len(toks) and toks[i + 3].kind == "ID":
                    declared.setdefault(toks[i + 3].text, "dep")

    lhs_seen = {}
    while p.tok.kind != "END":
        kw = p.tok
        if kw.text != "eq":
            p.error(f"expected 'eq', found {kw.text!r}")
        p.next()
        name, order, vt = p.jetvar()
        if name not in declared:
            raise UndeclaredSymbol(f"undeclared symbol {name!r}", vt.line, vt.col)
        p.expect("=")
        rhs = p.expr()
        p.expect(";")
        if name in lhs_seen:
            raise DuplicateEquation(f"second equation for {name!r} (first at line {lhs_seen[name]})", vt.line, vt.col)
        lhs_seen[name] = vt.line
        sd.equations.append(Equation(name, order, rhs, vt.line))
    return sd
