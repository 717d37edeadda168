import random
from fractions import Fraction

import pytest

from rkpairs import criteria as cr
from rkpairs.intarith import factor_prime_power_minus_one, w_int


class TestBoundConstant:
    @pytest.mark.parametrize("m1,m2,expected", [(2, 1, 6), (1, 0, 2), (0, 2, 7)])
    def test_values(self, m1, m2, expected):
        assert cr.bound_constant(m1, m2) == expected

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            cr.bound_constant(0, 0)


class TestMainInequality:
    def test_huge_q_dominates(self):
        assert cr.main_inequality(10**9, 12, 2, 3, 2, 1, 2, 1, 1, 1, 1, 1)

    def test_small_q_with_real_weights(self):
        Q = 5**12 - 1
        W1 = w_int(Q // 2)
        W2 = w_int(Q // 3)
        assert not cr.main_inequality(5, 12, 2, 3, 2, 1, 2, 1, W1, W2, 2**10, 2**11)

    def test_boundary_equality_is_true(self):
        # q^(n/2) = 8 exactly: 4^(3/2) = 8 = M r1 r2 with all weights 1
        assert cr.main_inequality(4, 3, 2, 2, 0, 0, 1, 0, 1, 1, 1, 1)
        assert not cr.main_inequality(4, 3, 2, 2, 0, 0, 1, 0, 1, 1, 1, 2)

    def test_negative_exponent_branch(self):
        assert not cr.main_inequality(5, 3, 1, 1, 1, 1, 1, 0, 1, 1, 1, 1)


class TestNumberPolFactors:
    @pytest.mark.parametrize("q,n,expected", [
        (5, 10, (2, 2)),
        (7, 3, (2, 1)),
        (5, 7, None),
        (3, 4, (2, 1)),  # gcd(q-1, n) = 2, w = 3
        (5, 12, (7, 6)),  # 8 orbits of multiplication by 5 on Z/12
    ])
    def test_cases(self, q, n, expected):
        assert cr.number_pol_factors(q, n) == expected

    def test_char_divides_case(self):
        assert cr.number_pol_factors(5, 10) == (2, 2)


class TestTestTheorem:
    def test_no_case_is_false(self):
        assert cr.test_theorem(5, 7, 8) == cr.FALSE

    def test_equal_exponents_never_pass_at_n12(self):
        # at n = 12, t = 8 both sides scale as q^3: the constants decide
        for q in (5, 101, 10**6 + 3, 10**30 + 57):
            assert cr.test_theorem(q, 12, 8) == cr.FALSE

    def test_large_q_passes_above_n12(self):
        assert cr.test_theorem(13, 100, 8) == cr.TRUE
        assert cr.test_theorem(10**6 + 3, 40, 8) == cr.TRUE

    def test_t_precondition(self):
        with pytest.raises(ValueError):
            cr.test_theorem(7, 13, 4)


class TestSumFactors:
    def test_empty(self):
        assert cr.sum_factors(1, 7) == (Fraction(0), 0)

    def test_square_strips_once(self):
        assert cr.sum_factors(23 * 23, 23) == (Fraction(1, 23), 1)

    def test_pessimistic_tail(self):
        # large prime residue charged with consecutive primes >= 1009
        S, u0 = cr.sum_factors(1009 * 1013 + 1, 1009)
        assert u0 >= 1 and S > 0

    def test_monotone_in_extra_factor(self):
        rng = random.Random(0)
        for _ in range(300):
            T = rng.randrange(1, 10**6)
            p0 = rng.choice([5, 7, 11, 23, 53])
            p = rng.choice([2, 3, 5, 7, 11, 101, 997])
            _, u_a = cr.sum_factors(T, p0)
            _, u_b = cr.sum_factors(T * p, p0)
            assert u_b >= u_a


class TestSpecialSieve:
    def test_known_small_cell(self, ctx77):
        out = cr.special_sieve(7, 7, 23)
        assert out.verdict == cr.NOT_PROVEN
        assert out.delta == 1 - 2 * (Fraction(1, 29) + Fraction(1, 1009))
        assert out.Delta == 2 + Fraction(3) / out.delta

    def test_delta_nonpositive_branch(self):
        out = cr.special_sieve(7, 120, 5)
        assert out.verdict == cr.NOT_PROVEN
        assert out.delta is not None and out.delta <= 0

    def test_no_case_branch(self):
        out = cr.special_sieve(7, 5, 23)  # all three gcds are 1 at (7, 5)
        assert out.verdict == cr.NOT_PROVEN
        assert "no small-factor case" in out.detail

    def test_proven_cell(self):
        assert cr.special_sieve(5, 120, 7).verdict == cr.PROVEN

    def test_preconditions(self):
        with pytest.raises(ValueError):
            cr.special_sieve(7, 7, 3)
        with pytest.raises(ValueError):
            cr.special_sieve(5, 7, 23)  # 6 does not divide 5^7 - 1


class TestMonicFactors:
    def test_three_linear_case(self):
        G1, G2 = cr.monic_factors(7, 3)
        assert (len(G1), len(G2)) == (1, 2)

    def test_two_linear_case(self):
        G1, G2 = cr.monic_factors(3, 4)
        assert (len(G1), len(G2)) == (1, 2)

    def test_none_case(self):
        assert cr.monic_factors(5, 7) is None

    def test_char_divides_keeps_all(self):
        G1, G2 = cr.monic_factors(5, 10)
        assert len(G1) == len(G2) == 2

    def test_quadratic_case_excludes_right_factors(self):
        # gcd(q, n) = 1, gcd(q-1, n) = 1, gcd(q+1, n) > 1
        q, n = 5, 3
        G1, G2 = cr.monic_factors(q, n)
        # x^3 - 1 over F_5: one linear, one quadratic
        assert [len(G1), len(G2)] == [1, 1]
        assert max(len(g) for g in G2) - 1 == 2  # quadratic kept in G2


class TestTotalSieve:
    def test_midsize_cell_proven(self):
        out = cr.total_sieve(10009, 9)
        assert out.verdict == cr.PROVEN
        assert out.delta is not None and out.delta > 0
        split = dict(out.witness_split)
        assert split["kept_primes_2"] == [2, 3]

    def test_tiny_cells_unprovable(self):
        # q^(n/2-3) < the minimal right side: no split can ever satisfy it
        for constant in (36, 6):
            assert cr.total_sieve(7, 7, constant=constant).verdict == cr.NOT_PROVEN
        assert cr.total_sieve(5, 8).verdict == cr.NOT_PROVEN

    def test_compatibility_constant_is_weaker(self):
        # anything the proven-shape constant clears, the literal 6 clears too
        for q in (10009, 10039, 15013):
            if (q**9 - 1) % 6 == 0:
                if cr.total_sieve(q, 9).verdict == cr.PROVEN:
                    assert cr.total_sieve(q, 9, constant=6).verdict == cr.PROVEN

    def test_indeterminate_on_budget(self):
        out = cr.total_sieve(1000033, 7, budget=10)
        assert out.verdict == cr.INDETERMINATE
        assert "cofactor" in out.detail

    def test_no_case(self):
        out = cr.total_sieve(7, 5)
        assert out.verdict == cr.NOT_PROVEN
        assert "no small-factor case" in out.detail

    def test_special_implies_total(self):
        # wherever the pessimistic sieve proves, the split search must too
        for q, n in [(5, 120), (10009, 9)]:
            if cr.special_sieve(q, n, 23).verdict == cr.PROVEN:
                assert cr.total_sieve(q, n).verdict == cr.PROVEN


class TestConditionAndBounds:
    def test_condition_examples(self):
        assert cr.condition_qn(7, 7)
        assert not cr.condition_qn(5, 7)
        assert cr.condition_qn(5, 8)

    def test_factor_count_examples(self):
        assert cr.factor_count_bound_check(5, 100)
        assert cr.factor_count_bound_check(7, 1)


class TestSweep:
    STAGES = [
        cr.make_stage("test_theorem", t=8.0),
        cr.make_stage("special_sieve", p0=23),
        cr.make_stage("total_sieve"),
    ]

    def test_deterministic_and_resumable(self, tmp_path):
        cells = [(q, 9) for q in (10009, 10039, 10069, 61, 67)]
        cells = [(q, n) for q, n in cells if cr.condition_qn(q, n)]
        ck = tmp_path / "ck.jsonl"
        rep1 = cr.sweep(cells, self.STAGES, checkpoint_path=str(ck))
        lines_after_first = ck.read_text().count("\n")
        rep2 = cr.sweep(cells, self.STAGES, checkpoint_path=str(ck))
        assert ck.read_text().count("\n") == lines_after_first  # nothing recomputed
        assert rep1.to_dict() == rep2.to_dict()

    def test_empty_range(self):
        rep = cr.sweep([], self.STAGES)
        assert rep.cells == 0 and not rep.survivors

    def test_report_partitions_cells(self):
        cells = [(10009, 9), (61, 9)]
        rep = cr.sweep(cells, self.STAGES)
        counted = sum(rep.cleared.values()) + len(rep.survivors) + len(rep.indeterminate) + len(rep.borderline)
        assert counted == rep.cells == 2

    def test_parallel_matches_serial(self, tmp_path):
        cells = [(q, 9) for q in (10009, 10039, 12377, 13009) if cr.condition_qn(q, 9)]
        a = cr.sweep(cells, self.STAGES)
        b = cr.sweep(cells, self.STAGES, workers=2)
        assert a.to_dict() == b.to_dict()
