"""Tokenizer and recursive-descent parser for the expression syntax.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" ["-"] INT)?
    atom   := INT | jetvar | "(" expr ")"
    jetvar := ID "'"* | "D" "(" ID "," INT ")"

Symbols are resolved through a callback so the same parser serves system
files, field files and ad hoc expressions.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from .expr import Expr
from .backend import Q


class ParseError(SyntaxError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.msg_text = msg
        self.line = line
        self.col = col
        self.lineno = line
        self.offset = col

    def __str__(self):
        return f"{self.msg_text} at line {self.line}, column {self.col}"


class UndeclaredSymbol(ParseError):
    pass


@dataclass
class Token:
    kind: str  # ID INT OP END
    text: str
    line: int
    col: int


_TOKEN = re.compile(r"\s+|#[^\n]*|(?P<ID>[A-Za-z_][A-Za-z0-9_]*)|(?P<INT>\d+)|(?P<OP>[-+*/^()',;:=\[\]])")


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind:
            out.append(Token(kind, m.group(kind), line, pos - line_start + 1))
        chunk = m.group(0)
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    out.append(Token("END", "", line, pos - line_start + 1))
    return out


Resolver = Callable[[str, int, Token], Expr]


class Parser:
    def __init__(self, tokens: list[Token], resolve: Resolver):
        self.toks = tokens
        self.i = 0
        self.resolve = resolve

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind not in ("OP", "ID"):
            shown = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {shown!r}")
        return self.next()

    def accept(self, text: str) -> bool:
        if self.tok.kind in ("OP", "ID") and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expr(self) -> Expr:
        e = self.term()
        while self.tok.kind == "OP" and self.tok.text in "+-":
            op = self.next().text
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.tok.kind == "OP" and self.tok.text in "*/":
            op = self.next()
            rhs = self.unary()
            if op.text == "*":
                e = e * rhs
            else:
                if rhs.is_zero():
                    self.error("division by zero", op)
                e = e / rhs
        return e

    def unary(self) -> Expr:
        if self.tok.kind == "OP" and self.tok.text in "+-":
            op = self.next().text
            e = self.unary()
            return -e if op == "-" else e
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.accept("^"):
            neg = self.accept("-")
            t = self.tok
            if t.kind != "INT":
                self.error("exponent must be an integer literal")
            self.next()
            k = int(t.text)
            if neg:
                if base.is_zero():
                    self.error("zero to a negative power", t)
                k = -k
            base = base ** k
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "INT":
            self.next()
            return Expr.const(Q(int(t.text)))
        if t.kind == "OP" and t.text == "(":
            self.next()
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "ID":
            name, order, tok = self.jetvar()
            return self.resolve(name, order, tok)
        self.error(f"unexpected {t.text or 'end of input'!r}")

    def jetvar(self):
        t = self.next()
        if t.kind != "ID":
            self.error("expected an identifier", t)
        if t.text == "D" and self.tok.text == "(":
            self.next()
            v = self.next()
            if v.kind != "ID":
                self.error("expected a variable name in D(...)", v)
            self.expect(",")
            k = self.next()
            if k.kind != "INT":
                self.error("expected an integer order in D(...)", k)
            self.expect(")")
            order = int(k.text)
            while self.accept("'"):
                order += 1
            return v.text, order, v
        order = 0
        while self.accept("'"):
            order += 1
        return t.text, order, t


def parse_expr(text: str, resolve: Resolver) -> Expr:
    p = Parser(tokenize(text), resolve)
    e = p.expr()
    if p.tok.kind != "END":
        p.error(f"unexpected {p.tok.text!r}")
    return e
