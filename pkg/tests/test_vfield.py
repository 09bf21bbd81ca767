import pytest

from diffsym.symcore import Expr, jet
from diffsym.vfield import (LazyBracket, SparseField, VField, bracket_vfields, commutator_residuals, delta_apply,
                            hat_tau_iterate, lie_bracket, parse_vfield, zero_field)

from conftest import load
from helpers import E


def on(field, name, order=0):
    return field.apply(Expr.sym(jet(name, order)))


class TestDelta:
    def test_scaling_on_square(self):
        ns = load("square")
        vf = VField(ns, [E("y"), E("x")])
        assert delta_apply(ns, vf, E("y'^2")) == E("2*y'^2")

    def test_constant(self):
        ns = load("rouchon")
        vf = VField(ns, [E("x2'"), E("x2"), E("x3 + x2'^2/2")])
        assert delta_apply(ns, vf, Expr.const(3)).is_zero()

    def test_rouchon_particular(self):
        ns = load("rouchon")
        vf = VField(ns, [E("x2'"), E("x2"), E("x3 + x2'^2/2")])
        assert delta_apply(ns, vf, E("x3")) == E("x3 + x2'^2/2")
        assert delta_apply(ns, vf, E("x2'")) == E("x2'")
        assert delta_apply(ns, vf, E("x1''")) == E("x2'''")

    def test_generator_count(self):
        with pytest.raises(ValueError):
            VField(load("rouchon"), [E("x1")])


class TestResiduals:
    @pytest.mark.parametrize("a1,a0,b1,b0", [(2, 0, 1, 0), (2, 5, 1, -3), (0, 1, 0, 0), (-4, 1, -2, 7)])
    def test_coupled_affine(self, a1, a0, b1, b0):
        ns = load("square")
        vf = VField(ns, [Expr.const(b1) * E("y") + b0, Expr.const(a1) * E("x") + a0])
        assert all(r.is_zero() for r in commutator_residuals(ns, vf))

    def test_uncoupled_fails(self):
        ns = load("square")
        vf = VField(ns, [E("y"), E("y")])
        assert not all(r.is_zero() for r in commutator_residuals(ns, vf))

    def test_zero_field(self):
        ns = load("rouchon")
        assert all(r.is_zero() for r in commutator_residuals(ns, zero_field(ns)))

    def test_rouchon_particular(self):
        ns = load("rouchon")
        vf = VField(ns, [E("x2'"), E("x2"), E("x3 + x2'^2/2")])
        assert commutator_residuals(ns, vf) == [Expr.const(0)]


class TestBrackets:
    def test_hat_tau_first(self):
        ns = load("square")
        base = SparseField({jet("y", 1): 1})
        X = hat_tau_iterate(ns, base, 1)
        assert on(X, "x") == E("2*y'") and on(X, "y") == Expr.const(1)
        assert on(X, "y", 1).is_zero()

    def test_opposite_orientation(self):
        ns = load("square")
        base = SparseField({jet("y", 1): 1})
        Y = lie_bracket(ns._tau, base)
        assert on(Y, "x") == E("-2*y'") and on(Y, "y") == Expr.const(-1)

    def test_hat_tau_second(self):
        ns = load("square")
        X = hat_tau_iterate(ns, SparseField({jet("y", 1): 1}), 2)
        assert on(X, "x") == E("-2*y''")
        assert on(X, "y").is_zero()

    def test_hat_tau_zero(self):
        ns = load("square")
        base = SparseField({jet("y", 1): 1})
        assert hat_tau_iterate(ns, base, 0) is base

    def test_self_bracket(self):
        X = SparseField({jet("x"): E("x*y"), jet("y"): E("x^2")})
        assert lie_bracket(X, X).support() == []

    def test_sparse_bracket(self):
        X = SparseField({jet("x"): E("x")})
        Y = SparseField({jet("x"): Expr.const(1)})
        B = lie_bracket(X, Y)
        assert B.coeffs == {jet("x"): Expr.const(-1)}

    def test_vfield_bracket(self):
        ns = load("square")
        X = VField(ns, [E("y"), E("2*x")])
        Y = VField(ns, [Expr.const(0), Expr.const(1)])
        B = bracket_vfields(X, Y)
        assert B.generators == (Expr.const(0), Expr.const(-2))

    def test_lazy_matches_reprolonged(self):
        ns = load("rouchon")
        X = VField(ns, [E("x2'"), E("x2"), E("x3 + x2'^2/2")])
        Y = VField(ns, [E("x1"), Expr.const(0), E("x3")])
        B = bracket_vfields(X, Y)
        L = LazyBracket(X, Y)
        for name, k in [("x1", 0), ("x1", 2), ("x2", 1), ("x3", 0)]:
            assert on(B, name, k) == on(L, name, k)


class TestParseField:
    def test_named(self):
        ns = load("rouchon")
        vf = parse_vfield(ns, "a_x3 = x3; a1 = x2';")
        assert vf.generators == (E("x2'"), Expr.const(0), E("x3"))

    def test_bad_name(self):
        with pytest.raises(SyntaxError):
            parse_vfield(load("rouchon"), "a7 = 1;")

    def test_order(self):
        ns = load("rouchon")
        assert parse_vfield(ns, "a1 = x2''';").order == 3
