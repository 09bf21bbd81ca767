from diffsym.symcore import Expr, jet, parse_expr


def E(text: str) -> Expr:
    """Parse an expression where every identifier is a jet variable."""
    return parse_expr(text, lambda name, order, tok: Expr.sym(jet(name, order)))


def to_sympy(e):
    """Convert a printed Expr to a sympy expression in the oracle's jet naming."""
    import re

    import sympy as sp
    s = re.sub(r"D\((\w+),(\d+)\)", lambda m: m.group(1) + "_" + "d" * int(m.group(2)), str(e))
    s = re.sub(r"([A-Za-z]\w*)('+)", lambda m: m.group(1) + "_" + "d" * len(m.group(2)), s)
    return sp.sympify(s.replace("^", "**"))


def oracle_system(ns):
    """(free, dep, {dep: rhs}) in the oracle's format."""
    return list(ns.free), list(ns.dep), {v: str(to_sympy(ns.f[v])) for v in ns.dep}
