import random

import pytest

from rkpairs import elems, fqpoly as fp
from rkpairs.ffield import make_ctx
from rkpairs.intarith import phi_int


class TestAdditiveAction:
    def test_definition_cases(self, ctx72):
        rng = random.Random(0)
        K = ctx72.Kq
        x = fp.monomial(K, 1)
        for _ in range(20):
            a = ctx72.random_elem(rng)
            assert elems.additive_action(ctx72, x, a) == ctx72.frobenius(a)
            assert elems.additive_action(ctx72, (K.neg(K.one), K.one), a) == ctx72.sub(ctx72.frobenius(a), a)
            assert elems.additive_action(ctx72, fp.x_pow_minus_one(K, ctx72.n), a) == ctx72.zero

    def test_linearity_and_composition(self, ctx34):
        rng = random.Random(1)
        K = ctx34.Kq
        for _ in range(25):
            f = tuple(K.from_int(rng.randrange(3)) for _ in range(4))
            g = tuple(K.from_int(rng.randrange(3)) for _ in range(3))
            f, g = fp.norm(K, f), fp.norm(K, g)
            a = ctx34.random_elem(rng)
            b = ctx34.random_elem(rng)
            assert elems.additive_action(ctx34, f, ctx34.add(a, b)) == ctx34.add(
                elems.additive_action(ctx34, f, a), elems.additive_action(ctx34, f, b)
            )
            assert elems.additive_action(ctx34, fp.mul(K, f, g), a) == elems.additive_action(
                ctx34, f, elems.additive_action(ctx34, g, a)
            )


class TestFqOrder:
    def test_zero_and_base_field(self):
        ctx = make_ctx(7, 1, 3)
        assert elems.fq_order(ctx, ctx.zero) == (1,)
        assert elems.profile(ctx, ctx.zero).k == 3
        one = elems.profile(ctx, ctx.one)
        assert one.fq_order == (6, 1)  # x - 1
        assert one.k == 2

    def test_annihilator_annihilates_and_is_minimal(self, ctx34):
        K = ctx34.Kq
        rng = random.Random(2)
        full = fp.x_pow_minus_one(K, ctx34.n)
        for _ in range(40):
            a = ctx34.random_elem(rng)
            h = elems.fq_order(ctx34, a)
            assert elems.additive_action(ctx34, h, a) == ctx34.zero
            assert not fp.mod(K, full, h)
            for P, _e in elems.xn1_factors(ctx34):
                quo, rem = fp.divmod_poly(K, h, P)
                if not rem and fp.deg(quo) >= 0:
                    assert elems.additive_action(ctx34, quo, a) != ctx34.zero

    def test_no_degree5_annihilator_over_f5(self, ctx57):
        degrees, _ = fp.unity_factor_degrees(5, 5, 7)
        assert degrees == (1, 6)  # so no degree-5 divisor, hence no defect-2 elements


class TestNormality:
    @pytest.mark.parametrize("spec", [(7, 1, 2), (3, 1, 4), (3, 2, 2), (5, 1, 3)])
    def test_dual_routes_agree(self, spec):
        ctx = make_ctx(*spec)
        for a in ctx.elements():
            assert elems.normality_k(ctx, a) == ctx.n - elems.fq_order_degree(ctx, a)

    def test_base_field_is_defect_n_minus_1(self, ctx72):
        for c in range(1, ctx72.q):
            a = ctx72.elem_from_int(c)
            assert elems.normality_k(ctx72, a) == ctx72.n - 1

    def test_normal_means_full_annihilator(self, ctx34):
        beta = elems.find_normal(ctx34)
        assert elems.normality_k(ctx34, beta) == 0
        assert elems.fq_order(ctx34, beta) == fp.x_pow_minus_one(ctx34.Kq, ctx34.n)


class TestFreeness:
    def test_dual_g_free_routes_exhaustive(self):
        ctx = make_ctx(5, 1, 4)
        divisors = fp.divisors_poly(ctx.Kq, elems.xn1_factors(ctx))
        for a in ctx.elements():
            for g in divisors:
                assert elems.is_g_free(ctx, a, g) == elems.is_g_free_direct(ctx, a, g)

    def test_normal_iff_full_free(self, ctx34):
        full = fp.x_pow_minus_one(ctx34.Kq, ctx34.n)
        for a in ctx34.elements():
            assert elems.is_g_free(ctx34, a, full) == (elems.normality_k(ctx34, a) == 0)

    def test_zero_never_free(self, ctx34):
        for g in fp.divisors_poly(ctx34.Kq, elems.xn1_factors(ctx34)):
            if fp.deg(g) >= 1:
                assert not elems.is_g_free(ctx34, ctx34.zero, g)

    def test_rr_free_counts(self, ctx72):
        Q = ctx72.group_order
        for r in (1, 2, 3):
            free = sum(
                1 for a in ctx72.elements()
                if a != ctx72.zero and elems.is_Rr_free(ctx72, a, Q // r, r)
            )
            prim = sum(
                1 for a in ctx72.elements()
                if a != ctx72.zero and elems.is_r_primitive(ctx72, a, r)
            )
            assert free == prim == phi_int(Q // r)

    def test_one_only_trivially_free(self, ctx72):
        Q = ctx72.group_order
        assert elems.is_Rr_free(ctx72, ctx72.one, 1, Q)
        assert not elems.is_Rr_free(ctx72, ctx72.one, 2, Q // 2)

    def test_generator_powers(self, ctx72):
        assert elems.is_r_primitive(ctx72, ctx72.generator, 1)
        g2 = ctx72.mul(ctx72.generator, ctx72.generator)
        assert elems.is_r_primitive(ctx72, g2, 2)

    def test_bad_parameters_rejected(self, ctx72):
        with pytest.raises(ValueError):
            elems.is_Rr_free(ctx72, ctx72.one, 5, 2)


class TestConstructions:
    def test_trivial_divisor_keeps_normal(self, ctx34):
        beta = elems.find_normal(ctx34)
        assert elems.construct_k_normal(ctx34, (ctx34.Kq.one,), beta) == beta

    def test_linear_divisor_makes_defect_one(self, ctx34):
        K = ctx34.Kq
        beta = elems.find_normal(ctx34)
        alpha = elems.construct_k_normal(ctx34, (K.neg(K.one), K.one), beta)
        assert elems.normality_k(ctx34, alpha) == 1

    def test_quadratic_divisor_over_f5(self):
        ctx = make_ctx(5, 1, 8)
        K = ctx.Kq
        beta = elems.find_normal(ctx)
        f = fp.mul(K, (K.neg(K.one), K.one), (K.one, K.one))  # (x-1)(x+1)
        alpha = elems.construct_k_normal(ctx, f, beta)
        assert elems.normality_k(ctx, alpha) == 2

    def test_rejects_non_normal_seed(self, ctx34):
        with pytest.raises(ValueError):
            elems.construct_k_normal(ctx34, (ctx34.Kq.one, ctx34.Kq.one), ctx34.one)

    def test_find_normal_deterministic(self, ctx34):
        assert elems.find_normal(ctx34, seed=4) == elems.find_normal(ctx34, seed=4)


class TestCountIdentity:
    @pytest.mark.parametrize("spec", [(3, 1, 4), (7, 1, 2), (3, 2, 2)])
    def test_annihilator_census_is_poly_phi(self, spec):
        ctx = make_ctx(*spec)
        K = ctx.Kq
        census = {}
        for a in ctx.elements():
            h = elems.fq_order(ctx, a)
            census[h] = census.get(h, 0) + 1
        assert sum(census.values()) == ctx.q**ctx.n
        fact = elems.xn1_factors(ctx)
        for d, cnt in census.items():
            d_fact = []
            rest = d
            for g, _e in fact:
                m = 0
                while True:
                    quo, rem = fp.divmod_poly(K, rest, g)
                    if rem:
                        break
                    rest, m = quo, m + 1
                if m:
                    d_fact.append((g, m))
            assert cnt == fp.poly_phi(K, d_fact)
