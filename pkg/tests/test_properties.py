"""Property suites; each records how many cases it actually ran."""
from collections import Counter
from fractions import Fraction
from functools import lru_cache

import sympy as sp
from hypothesis import assume, given, settings, strategies as st

from diffsym.orderbound import analyze_A_ideal, d_iterates, order_constraints
from diffsym.symcore import BACKEND, Expr, Q, S, jet, _kernels_py
from diffsym.symsolve import Ansatz, solve_polynomial_ansatz, verify_symmetry
from diffsym.vfield import SparseField, VField, bracket_vfields, lie_bracket

import oracles
from conftest import load
from helpers import oracle_system, to_sympy

CASES: Counter = Counter()
N = 200
PLAIN = [jet("x"), jet("y"), jet("z")]
ROUCHON_SYMS = [jet("x1"), jet("x2"), jet("x3"), jet("x1", 1), jet("x2", 1), jet("x1", 2)]

small = st.integers(-4, 4)


@lru_cache(maxsize=None)
def rouchon():
    return load("rouchon")


def polys(syms, max_terms=4, max_exp=2):
    term = st.tuples(st.integers(-5, 5), st.lists(st.integers(0, max_exp), min_size=len(syms),
                                                  max_size=len(syms)))

    def build(terms):
        e = Expr.const(0)
        for c, exps in terms:
            t = Expr.const(c)
            for s, k in zip(syms, exps):
                if k:
                    t = t * S(s) ** k
            e = e + t
        return e
    return st.lists(term, max_size=max_terms).map(build)


def rationals(syms):
    return st.tuples(polys(syms), polys(syms, 3, 1)).filter(lambda t: not t[1].is_zero()).map(
        lambda t: t[0] / t[1])


points = st.lists(st.fractions(min_value=-50, max_value=50, max_denominator=7), min_size=6, max_size=6)


def at(e, syms, vals):
    return e.eval({s: Q(v.numerator, v.denominator) for s, v in zip(syms, vals)})


@settings(max_examples=N)
@given(polys(PLAIN), polys(PLAIN), polys(PLAIN))
def test_ring_axioms(a, b, c):
    CASES["ring axioms"] += 1
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c) and (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Expr.const(0) and a * Expr.const(1) == a
    assert sp.expand(to_sympy(a * b + c) - (to_sympy(a) * to_sympy(b) + to_sympy(c))) == 0


@settings(max_examples=N)
@given(rationals(PLAIN), rationals(PLAIN), st.sampled_from(PLAIN))
def test_leibniz(a, b, v):
    CASES["Leibniz rule"] += 1
    assert (a * b).diff(v) == a.diff(v) * b + a * b.diff(v)
    if not b.is_zero():
        assert (a / b).diff(v) == (a.diff(v) * b - a * b.diff(v)) / (b * b)


@settings(max_examples=N)
@given(polys(PLAIN), polys(PLAIN[1:]), polys(PLAIN[2:]))
def test_substitution_composition(e, p, q):
    CASES["substitution composition"] += 1
    x, y = PLAIN[0], PLAIN[1]
    lhs = e.subs({x: p}).subs({y: q})
    rhs = e.subs({x: p.subs({y: q}), y: q})
    assert lhs == rhs


@settings(max_examples=N)
@given(polys(PLAIN, 5, 3), polys(PLAIN, 5, 3), points)
def test_schwartz_zippel(a, b, vals):
    CASES["Schwartz-Zippel"] += 1
    assert at(a * b, PLAIN, vals) == at(a, PLAIN, vals) * at(b, PLAIN, vals)
    d = a - b
    if d.is_zero():
        assert at(a, PLAIN, vals) == at(b, PLAIN, vals)
    else:
        # a nonzero polynomial of degree <= 9 vanishes on few points of a large grid
        grid = [[Fraction(1000 * k + 37 * j + 1) for j in range(3)] for k in range(1, 11)]
        zeros = sum(1 for g in grid if at(d, PLAIN, g) == 0)
        assert zeros < len(grid)


@settings(max_examples=N)
@given(rationals(ROUCHON_SYMS), rationals(ROUCHON_SYMS), small, st.integers(0, 2), st.integers(0, 1))
def test_tau_derivation(a, b, c, j, k):
    CASES["tau derivation laws"] += 1
    ns = rouchon()
    assert ns.tau(a * b) == ns.tau(a) * b + a * ns.tau(b)
    assert ns.tau(a + Expr.const(c) * b) == ns.tau(a) + Expr.const(c) * ns.tau(b)
    assert ns.tau(Expr.const(c)).is_zero()
    assert ns.tau_power(a, j + k) == ns.tau_power(ns.tau_power(a, j), k)


sparse_fields = st.lists(polys(PLAIN, 3, 2), min_size=3, max_size=3).map(
    lambda cs: SparseField(dict(zip(PLAIN, cs))))


def same_field(F, G):
    return all(F.apply(S(s)) == G.apply(S(s)) for s in PLAIN)


@settings(max_examples=N)
@given(sparse_fields, sparse_fields, sparse_fields)
def test_bracket_antisymmetry_jacobi(X, Y, Z):
    CASES["bracket antisymmetry and Jacobi"] += 1
    XY, YX = lie_bracket(X, Y), lie_bracket(Y, X)
    assert all((XY.apply(S(s)) + YX.apply(S(s))).is_zero() for s in PLAIN)
    J1 = lie_bracket(X, lie_bracket(Y, Z))
    J2 = lie_bracket(Y, lie_bracket(Z, X))
    J3 = lie_bracket(Z, lie_bracket(X, Y))
    assert all((J1.apply(S(s)) + J2.apply(S(s)) + J3.apply(S(s))).is_zero() for s in PLAIN)


@lru_cache(maxsize=None)
def rouchon_symmetries():
    ns = rouchon()
    cs = order_constraints(analyze_A_ideal(d_iterates(ns)), ns)
    basis = list(solve_polynomial_ansatz(ns, Ansatz.state_only(ns), 1).basis)
    for k in range(len(cs.branch_ansatz)):
        basis += solve_polynomial_ansatz(ns, Ansatz.from_constraints(ns, cs, 1, k), 2).basis
    return ns, basis


@lru_cache(maxsize=None)
def fixture_bases():
    out = []
    for name, degree in [("square", 2), ("product_squares", 1), ("translation", 2), ("rouchon", 1)]:
        ns = load(name)
        out.append((ns, solve_polynomial_ansatz(ns, Ansatz.state_only(ns), degree).basis))
    ns, basis = rouchon_symmetries()
    out.append((ns, basis))
    return out


def combo(ns, basis, coeffs):
    gens = [Expr.const(0)] * ns.n
    for c, vf in zip(coeffs, basis):
        if c:
            gens = [g + Expr.const(c) * h for g, h in zip(gens, vf.generators)]
    return VField(ns, gens)


coeff_lists = st.lists(small, min_size=16, max_size=16)


@settings(max_examples=N)
@given(coeff_lists, rationals(ROUCHON_SYMS))
def test_delta_commutes_with_tau(cs, e):
    CASES["delta tau = tau delta"] += 1
    ns, basis = rouchon_symmetries()
    vf = combo(ns, basis, cs)
    assert vf.apply(ns.tau(e)) == ns.tau(vf.apply(e))


@settings(max_examples=N)
@given(coeff_lists, coeff_lists)
def test_bracket_closure(c1, c2):
    CASES["symmetry closure under bracket"] += 1
    ns, basis = rouchon_symmetries()
    X, Y = combo(ns, basis, c1), combo(ns, basis, c2)
    assert verify_symmetry(ns, bracket_vfields(X, Y))


@settings(max_examples=N)
@given(st.integers(0, 4), coeff_lists)
def test_solver_members(which, cs):
    CASES["solver member re-verification"] += 1
    ns, basis = fixture_bases()[which]
    assume(basis)
    vf = combo(ns, basis, cs)
    assert verify_symmetry(ns, vf)
    free, dep, f = oracle_system(ns)
    gens = {v: str(to_sympy(g)) for v, g in zip(list(ns.free) + list(ns.dep), vf.generators)}
    assert oracles.is_symmetry(free, dep, f, gens)


mono = st.lists(st.tuples(st.integers(0, 5), st.integers(1, 3)), max_size=3,
                unique_by=lambda t: t[0]).map(lambda l: tuple(x for v, k in sorted(l) for x in (v, k)))
rat = st.fractions(min_value=-20, max_value=20, max_denominator=5).filter(lambda q: q != 0).map(
    lambda q: Q(q.numerator, q.denominator))
kpoly = st.dictionaries(mono, rat, max_size=6)


@settings(max_examples=N)
@given(kpoly, kpoly, st.integers(0, 5), st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4),
                                                 min_size=1, max_size=4))
def test_kernel_parity(p, q, v, mat):
    CASES["py/cy kernel parity"] += 1
    if BACKEND != "cython":
        return
    from diffsym.symcore import _kernels as CY
    for name in ("poly_add", "poly_sub", "poly_mul"):
        assert getattr(CY, name)(p, q) == getattr(_kernels_py, name)(p, q)
    assert CY.poly_diff(p, v) == _kernels_py.poly_diff(p, v)
    M = [[Q(x) for x in row] for row in mat]
    assert CY.rref([r[:] for r in M], 4) == _kernels_py.rref([r[:] for r in M], 4)


PROPERTIES = [test_ring_axioms, test_leibniz, test_substitution_composition, test_schwartz_zippel,
              test_tau_derivation, test_bracket_antisymmetry_jacobi, test_delta_commutes_with_tau,
              test_bracket_closure, test_solver_members, test_kernel_parity]
