import random

import pytest

from rkpairs import fqpoly as fp, ratfun
from rkpairs.ffield import ExtField, make_ctx


class TestUpsilon:
    def test_x_times_x_plus_one(self, ctx72):
        F = ratfun.parse_ratfunc(ctx72, "x*(x+1)")
        ok, wit = ratfun.in_upsilon(ctx72, F, 2, 1)
        assert ok
        g, mult = wit
        K = ExtField(ctx72)
        assert g == fp.norm(K, (K.one, K.one)) and mult == 1  # x + 1

    def test_pure_power_of_x_fails(self, ctx72):
        F = ratfun.parse_ratfunc(ctx72, "x^2")
        assert ratfun.in_upsilon(ctx72, F, 2, 1) == (False, None)

    def test_unit_order_multiplicity_screen(self, ctx72):
        # (x+1)^6: the only non-x factor has multiplicity 6, never coprime
        # to the unit order of either field in this tower
        F = ratfun.parse_ratfunc(ctx72, "(x+1)^6")
        assert not ratfun.in_upsilon(ctx72, F, 6, 0)[0]
        assert not ratfun.in_upsilon(ctx72, F, 6, 0, unit_order=ctx72.q - 1)[0]

    def test_degree_caps(self, ctx72):
        F = ratfun.parse_ratfunc(ctx72, "x^3+x")
        assert not ratfun.in_upsilon(ctx72, F, 2, 1)[0]

    def test_constant_scaling_invariance(self, ctx72):
        rng = random.Random(3)
        K = ExtField(ctx72)
        for _ in range(25):
            num = fp.norm(K, tuple(K.from_int(rng.randrange(K.order)) for _ in range(3)))
            den = fp.norm(K, tuple(K.from_int(rng.randrange(K.order)) for _ in range(2)))
            if fp.is_zero(num) or fp.is_zero(den):
                continue
            F = ratfun.make_ratfunc(K, num, den)
            c = K.from_int(rng.randrange(1, K.order))
            G = ratfun.make_ratfunc(K, fp.scale(K, num, c), fp.scale(K, den, c))
            assert ratfun.in_upsilon(ctx72, F, 2, 1)[0] == ratfun.in_upsilon(ctx72, G, 2, 1)[0]


class TestExceptionalSet:
    def test_identity_function(self, ctx72):
        F = ratfun.parse_ratfunc(ctx72, "x")
        assert ratfun.exceptional_set(ctx72, F) == {ctx72.zero}

    def test_scan_vs_factor_paths(self, ctx72):
        for text in ("(x^2+1)/(x+1)", "x*(x+1)", "(x^2+a*x+1)/(x+1)"):
            F = ratfun.parse_ratfunc(ctx72, text)
            scan = ratfun.exceptional_set(ctx72, F, method="scan")
            fact = ratfun.exceptional_set(ctx72, F, method="factor")
            assert scan == fact
            assert len(scan) <= sum(F.degrees)

    def test_size_bound_random(self, ctx34):
        rng = random.Random(1)
        K = ExtField(ctx34)
        for _ in range(200):
            num = fp.norm(K, tuple(K.from_int(rng.randrange(K.order)) for _ in range(3)))
            den = fp.norm(K, tuple(K.from_int(rng.randrange(K.order)) for _ in range(2)))
            if fp.is_zero(num) or fp.is_zero(den):
                continue
            F = ratfun.make_ratfunc(K, num, den)
            assert len(ratfun.exceptional_set(ctx34, F)) <= sum(d for d in F.degrees if d > 0) + 1


class TestEvaluate:
    def test_identity(self, ctx72):
        F = ratfun.parse_ratfunc(ctx72, "x")
        for a in ctx72.elements():
            assert ratfun.evaluate(ctx72, F, a) == a

    def test_agrees_with_long_division(self, ctx72):
        # F = num/den with num = q*den + r gives F(a) = q(a) + r(a)/den(a)
        rng = random.Random(4)
        K = ExtField(ctx72)
        for _ in range(100):
            num = fp.norm(K, tuple(K.from_int(rng.randrange(K.order)) for _ in range(4)))
            den = fp.norm(K, tuple(K.from_int(rng.randrange(K.order)) for _ in range(2)))
            if fp.is_zero(den):
                continue
            F = ratfun.make_ratfunc(K, num, den)
            quo, rem = fp.divmod_poly(K, F.num, F.den)
            a = ctx72.random_elem(rng)
            da = fp.eval_poly(K, F.den, a)
            if da == ctx72.zero:
                continue
            direct = ctx72.add(
                fp.eval_poly(K, quo, a),
                ctx72.mul(fp.eval_poly(K, rem, a), ctx72.inv_elem(da)),
            )
            assert ratfun.evaluate(ctx72, F, a) == direct

    def test_pole_raises(self, ctx72):
        F = ratfun.parse_ratfunc(ctx72, "1/x")
        with pytest.raises(ZeroDivisionError):
            ratfun.evaluate(ctx72, F, ctx72.zero)


class TestParser:
    def test_generator_symbol(self, ctx72):
        F = ratfun.parse_ratfunc(ctx72, "(x^2+a*x+1)/(x+1)")
        assert F.num[1] == ctx72.generator

    def test_format_round_trip(self, ctx72):
        for text in ("x*(x+1)", "(x^2+a*x+1)/(x+1)", "(x^2+1)/(x+2)"):
            F = ratfun.parse_ratfunc(ctx72, text)
            G = ratfun.parse_ratfunc(ctx72, ratfun.format_ratfunc(ctx72, F))
            assert (F.num, F.den) == (G.num, G.den)

    def test_coefficients_reduce_mod_p(self, ctx72):
        F = ratfun.parse_ratfunc(ctx72, "8*x")
        G = ratfun.parse_ratfunc(ctx72, "x")
        assert (F.num, F.den) == (G.num, G.den)

    @pytest.mark.parametrize("bad,pos", [
        ("x^2 + % 3", 6),
        ("(x+1", 4),
        ("x//2", 2),
        ("x^y", 2),
        ("3/(x-x)", 1),
    ])
    def test_position_diagnostics(self, ctx72, bad, pos):
        with pytest.raises(ratfun.ParseError) as err:
            ratfun.parse_ratfunc(ctx72, bad)
        assert err.value.pos == pos

    def test_unary_minus_and_nesting(self, ctx72):
        F = ratfun.parse_ratfunc(ctx72, "-(x-3)*(x+1)/(2*x+6)")
        assert fp.deg(F.num) >= 1
