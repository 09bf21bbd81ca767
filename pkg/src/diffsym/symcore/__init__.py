"""Exact symbolic arithmetic over jet variables."""
from .backend import BACKEND, Q
from .errors import CyclicBinding, DenominatorVanishes, DivisionByZero, NotPolynomial, SymcoreError
from .expr import C, Expr, ONE_E, S, ZERO_E
from .symbols import (Sym, aux_A, coef, fiber_a, fiber_b, jet, param, sym_id, sym_key, sym_of,
                      unknown, unknown_diff, zeta)
from .ops import (eval_rational, order_in, partial, poly_arith, square_free_factors, substitute)
from .parse import ParseError, UndeclaredSymbol, parse_expr

__all__ = [
    "BACKEND", "Q", "Expr", "C", "S", "ONE_E", "ZERO_E", "Sym", "jet", "aux_A", "fiber_a", "fiber_b",
    "zeta", "coef", "param", "unknown", "unknown_diff", "sym_id", "sym_key", "sym_of",
    "poly_arith", "partial", "substitute", "order_in", "square_free_factors", "eval_rational",
    "parse_expr", "ParseError", "UndeclaredSymbol", "SymcoreError", "DivisionByZero",
    "DenominatorVanishes", "CyclicBinding", "NotPolynomial",
]
