"""Dependency declarations for the unknown generators a_i."""
from __future__ import annotations

from dataclasses import dataclass

from ..diffiety import NormalSystem
from ..symcore import Sym, jet, sym_key
from ..symcore.parse import Parser, tokenize
from .errors import AnsatzTooSmall


@dataclass
class Ansatz:
    ns: NormalSystem
    allowed: dict  # i (1-based) -> tuple of jet Syms

    def __post_init__(self):
        self.allowed = {i: tuple(sorted(set(v), key=sym_key)) for i, v in self.allowed.items()}
        for i in range(1, self.ns.n + 1):
            self.allowed.setdefault(i, ())
        for i, syms in self.allowed.items():
            for s in syms:
                if s.ns != "x" or s.name not in self.ns.names:
                    raise AnsatzTooSmall(f"a{i}: {s} is not a system variable")
                if not self.ns.is_canonical(s):
                    raise AnsatzTooSmall(f"a{i}: {s} is a derivative of a dependent variable")

    @classmethod
    def state_only(cls, ns: NormalSystem) -> "Ansatz":
        states = [ns.x(i) for i in range(1, ns.n + 1)]
        return cls(ns, {i: states for i in range(1, ns.n + 1)})

    @classmethod
    def with_jets(cls, ns: NormalSystem, order: int) -> "Ansatz":
        syms = [ns.x(i) for i in range(1, ns.n + 1)]
        syms += [jet(v, k) for k in range(1, order + 1) for v in ns.free]
        return cls(ns, {i: syms for i in range(1, ns.n + 1)})

    @classmethod
    def from_constraints(cls, ns: NormalSystem, cs, order: int = 1, branch: int = 0) -> "Ansatz":
        """Ansatz dictated by an order-bound result (ConstraintSet)."""
        if cs.state_only:
            return cls.state_only(ns)
        if cs.branch_ansatz:
            return cls(ns, cs.branch_ansatz[branch])
        base = cls.with_jets(ns, order)
        zero = set(cs.order_zero)
        states = [ns.x(i) for i in range(1, ns.n + 1)]
        return cls(ns, {i: (states if i in zero else base.allowed[i]) for i in base.allowed})

    @classmethod
    def parse(cls, ns: NormalSystem, text: str) -> "Ansatz":
        """``a1: x1 x2 x2'; a2: x2;`` with unlisted generators depending on nothing."""
        p = Parser(tokenize(text), lambda *a: None)
        allowed: dict = {}
        while p.tok.kind != "END":
            t = p.next()
            if t.kind != "ID" or not (t.text[:1] == "a" and t.text[1:].isdigit()):
                p.error("expected a generator name such as a1", t)
            i = int(t.text[1:])
            if not 1 <= i <= ns.n:
                p.error(f"generator index out of range 1..{ns.n}", t)
            p.expect(":")
            syms = []
            while p.tok.kind != "END" and p.tok.text != ";":
                name, k, v = p.jetvar()
                if name not in ns.names:
                    p.error(f"unknown variable {name!r}", v)
                syms.append(jet(name, k))
            p.accept(";")
            allowed[i] = syms
        return cls(ns, allowed)

    def func(self, i: int) -> str:
        return f"a{i}"

    def unknowns(self) -> dict:
        return {self.func(i): self.allowed[i] for i in self.allowed}

    def all_syms(self) -> list:
        out = set()
        for v in self.allowed.values():
            out |= set(v)
        return sorted(out, key=sym_key)

    @property
    def max_order(self) -> int:
        return max((s.order for v in self.allowed.values() for s in v), default=0)

    def to_json(self) -> dict:
        return {self.func(i): [str(s) for s in self.allowed[i]] for i in sorted(self.allowed)}

    def to_text(self) -> str:
        return "".join(f"{self.func(i)}: {' '.join(str(s) for s in self.allowed[i])};\n"
                       for i in sorted(self.allowed))
