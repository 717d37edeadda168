import math

import pytest

from rkpairs import boundscan as bs
from rkpairs.intarith import LogMagnitude as LM


def rel_log10_err(got: LM, target: str) -> float:
    t = LM.from_sci(target)
    return abs(got.log10 - t.log10) / t.log10


class TestGlobalIteration:
    def test_first_chain_step(self):
        step = bs.global_bound_iteration(10009, 89, LM.from_sci("6.18e718"))
        assert rel_log10_err(step.output_P, "1.15e190") < 1e-3
        assert step.max_m == 23  # primes up to 89, minus one, starting at 2
        assert 2 <= step.worst_m <= step.max_m

    def test_later_chain_step(self):
        step = bs.global_bound_iteration(10**5 + 3, 29, LM.from_sci("1.66e92"))
        assert rel_log10_err(step.output_P, "6.42e70") < 1e-3

    def test_monotone_in_input(self):
        small = bs.global_bound_iteration(10009, 89, LM.from_sci("1.00e500"))
        large = bs.global_bound_iteration(10009, 89, LM.from_sci("6.18e718"))
        assert small.output_P.log10 <= large.output_P.log10

    def test_q0_precondition(self):
        with pytest.raises(ValueError):
            bs.global_bound_iteration(256, 89, LM.from_sci("1e100"))


class TestMnBound:
    def test_n12_branch(self):
        got = bs.mn_bound(12)
        assert rel_log10_err(got, "1.816e5") < 1e-3

    def test_tail_below_five(self):
        assert bs.mn_bound(1029) < 5
        assert bs.mn_bound(1028) >= 5

    def test_decreasing(self):
        values = [bs.mn_bound(n).log10 for n in range(12, 2001)]
        assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))

    def test_domain(self):
        with pytest.raises(ValueError):
            bs.mn_bound(11)


class TestWeilStart:
    @pytest.mark.parametrize("n,N,m,target", [
        (11, 9.161, 291, "2.717e803"),
        (10, 10.206, 534, "3.819e1641"),
        (9, 12.075, 1618, "1.488e5882"),
        (8, 16.008, 18011, "3.980e86793"),
    ])
    def test_standard_rows(self, n, N, m, target):
        holds, three_pm = bs.weil_start_bound(n, N, m)
        assert holds
        assert rel_log10_err(three_pm, target) < 1e-6

    def test_insufficient_m_fails(self):
        holds, _ = bs.weil_start_bound(8, 16.008, 100)
        assert not holds

    def test_denominator_guard(self):
        with pytest.raises(ValueError):
            bs.weil_start_bound(8, 3.0, 100)


class TestFixedNIteration:
    def test_sample_rows(self):
        step = bs.fixed_n_bound_iteration(8, LM.from_sci("3.980e86793"), 1609)
        assert rel_log10_err(step.output_P, "8.261e1320") < 1e-3
        step = bs.fixed_n_bound_iteration(11, LM.from_sci("2.717e803"), 97)
        assert rel_log10_err(step.output_P, "9.605e115") < 1e-3
        step = bs.fixed_n_bound_iteration(10, LM.from_sci("3.819e1641"), 149)
        assert rel_log10_err(step.output_P, "3.891e160") < 1e-3

    def test_needs_n_above_six(self):
        with pytest.raises(ValueError):
            bs.fixed_n_bound_iteration(6, LM.from_sci("1e100"), 29)


class TestBoundSieve:
    def test_first_n9_step(self):
        q_new, B, audit = bs.bound_sieve(10**4, 4413000000, 9, 19)
        assert B and 10**q_new.log10 < 585229
        assert audit["m_max"] == 7

    def test_n8_step(self):
        q_new, B, _ = bs.bound_sieve(10**9, 651500000000000, 8, 37)
        assert B and 10**q_new.log10 < 6.226e10

    def test_monotone_in_qmax(self):
        a, _, _ = bs.bound_sieve(10**4, 585229, 9, 17)
        b, _, _ = bs.bound_sieve(10**4, 4413000000, 9, 17)
        assert a.log10 <= b.log10

    def test_variant_checkpoints(self):
        # the three modified runs, each against its published ceiling
        q_new, B, _ = bs.bound_sieve(10**9, 1781000000, 8, 29, nine_divides=True)
        assert B and 10**q_new.log10 < 1.572e9
        q_new, B, _ = bs.bound_sieve(10**8, 1572000000, 8, 29, nine_divides=True, strict_m=True)
        assert B and 10**q_new.log10 < 4.453e8
        q_new, B, _ = bs.bound_sieve(10**8, 1781000000, 8, 29, nine_not_divides=True)
        assert B and 10**q_new.log10 < 8.905e8

    def test_unsupported_degree(self):
        with pytest.raises(ValueError):
            bs.bound_sieve(10**4, 10**9, 10, 19)


class TestCeilSci:
    def test_values(self):
        assert bs.ceil_sci(LM.from_value(585228.3)) == 585300
        assert bs.ceil_sci(LM(math.log10(1.9134e22))) == 19140 * 10**18
        assert bs.ceil_sci(LM.from_value(123)) == 123

    def test_idempotent_on_4digit(self):
        x = bs.ceil_sci(LM.from_sci("5.259e15"))
        assert x == 5259 * 10**12
