"""Log-space asymptotic machinery.

Bound iterations shrink an upper bound on q^n (or on q at fixed n) by
trading the number of small primes kept against pessimistic reciprocal
sums over the primes sieved away. Astronomical quantities only ever
appear as LogMagnitude; loop constraints that compare products of primes
against integer power bounds are decided with exact big integers.
"""

import math
from dataclasses import dataclass
from math import log10

from .intarith import (
    LogMagnitude,
    PrimeTable,
    partial_weight_constant,
    prime_census,
    primorial_log,
    small_primes,
)

LOG_MARGIN = 1e-6

_TABLES: dict = {}


def _table(p0: int, class_filter: str = "all", pbar=None) -> PrimeTable:
    key = (p0, class_filter, pbar)
    if key not in _TABLES:
        _TABLES[key] = PrimeTable(p0, class_filter, pbar)
    return _TABLES[key]


class BoundChainError(ValueError):
    """A sieve denominator went nonpositive; carries the offending m."""

    def __init__(self, m: int):
        super().__init__(f"nonpositive sieve denominator at m={m}")
        self.m = m


@dataclass(frozen=True)
class BoundChainStep:
    p0: int
    input_P: LogMagnitude
    output_P: LogMagnitude
    max_m: int
    worst_m: int
    worst_u: int


def _delta_series(P: LogMagnitude, p0: int):
    """(m, u(m), Delta(m)) for m in [2, pi(p0) - 1].

    u(m) is the largest count of primes >= p0 whose product still fits
    under P once the first m primes are spent.
    """
    table = _table(p0)
    m_max = int(len(small_primes(p0)))  # pi(p0)
    out = []
    for m in range(2, m_max):
        budget = P.log10 - primorial_log(m).log10
        u = table.max_count_with_log10(budget) if budget >= 0 else 0
        s = table.prefix_inv(u)
        denom = 1.0 - 2.0 * s
        if denom <= 0:
            raise BoundChainError(m)
        out.append((m, u, 2.0 + (2 * u - 1) / denom))
    if not out:
        raise ValueError("p0 admits no m in [2, pi(p0) - 1]")
    return out


def global_bound_iteration(q0: int, p0: int, P: LogMagnitude) -> BoundChainStep:
    """One shrink step of the bound on q^n valid for all q >= q0."""
    exponent = 0.25 - math.log(4) / math.log(q0)
    if exponent <= 0:
        raise ValueError("q0 must exceed 256")
    series = _delta_series(P, p0)
    best = max(series, key=lambda it: 2 * it[0] * log10(2) + log10(it[2]))
    worst_m, worst_u, delta_m = best
    rhs = log10(36) + (2 * worst_m - 3) * log10(2) + log10(delta_m)
    return BoundChainStep(
        p0=p0,
        input_P=P,
        output_P=LogMagnitude(rhs / exponent),
        max_m=series[-1][0],
        worst_m=worst_m,
        worst_u=worst_u,
    )


def fixed_n_bound_iteration(n: int, P: LogMagnitude, p0: int) -> BoundChainStep:
    """One shrink step of the bound on q^n at a fixed extension degree."""
    if n <= 6:
        raise ValueError("needs n > 6")
    series = _delta_series(P, p0)
    best = max(series, key=lambda it: 2 * it[0] * log10(2) + log10(it[2]))
    worst_m, worst_u, delta_m = best
    rhs = log10(36) + 2 * worst_m * log10(2) + (2 * n - 3) * log10(2) + log10(delta_m)
    return BoundChainStep(
        p0=p0,
        input_P=P,
        output_P=LogMagnitude(rhs * 2 * n / (n - 6)),
        max_m=series[-1][0],
        worst_m=worst_m,
        worst_u=worst_u,
    )


def mn_bound(n: int) -> LogMagnitude:
    """Per-degree lower cutoff for q above which the global chains apply."""
    if n < 12:
        raise ValueError("defined for n >= 12")
    branches = (
        max(LogMagnitude.from_value(10**5 + 3), LogMagnitude.from_sci("1.29e63").root(n)),
        max(LogMagnitude.from_value(10009), LogMagnitude.from_sci("1.66e92").root(n)),
        LogMagnitude.from_sci("6.18e718").root(n),
    )
    return min(branches)


def weil_start_bound(n: int, N: float, m: int) -> "tuple[bool, LogMagnitude]":
    """Check that 3 times the m-th primorial clears the starting threshold.

    Returns (holds with a 1e-6 log margin, the computed 3*primorial).
    """
    denom = N * n - 4 * n - 6 * N
    if denom <= 0:
        raise ValueError("exponent denominator must be positive")
    three_pm = primorial_log(m) * 3
    rhs = ((2 - 1 / N) * log10(6) + (2 * n - 3) * log10(2)) * (2 * N * n / denom)
    return (three_pm.log10 - rhs > LOG_MARGIN, three_pm)


STANDARD_WEIL_ROWS = (
    (11, 9.161, 291),
    (10, 10.206, 534),
    (9, 12.075, 1618),
    (8, 16.008, 18011),
)

SIEVE_CHAIN_P0 = {
    8: (1609, 131, 47, 37, 31, 31),
    9: (313, 53, 31, 29, 29),
    10: (149, 41, 29, 23, 23),
    11: (97, 31, 23, 23, 23),
}


def fixed_n_chain(n: int, start: LogMagnitude, p0_list) -> "list[BoundChainStep]":
    """Iterate the fixed-n step, feeding each output into the next stage."""
    steps = []
    current = start
    for p0 in p0_list:
        step = fixed_n_bound_iteration(n, current, p0)
        steps.append(step)
        current = step.output_P
    return steps


# ---------------------------------------------------------------------------
# the degree-7 sieve over residue classes

def _pbar_of(n: int) -> "tuple[int, int, int]":
    """(p, a, pbar) with n = p^a n0, p the largest prime divisor."""
    p = max(f for f, _ in _factor_pairs(n))
    a = 0
    m = n
    while m % p == 0:
        m //= p
        a += 1
    pbar = 2**a if p == 2 else 2 * p**a
    return p, a, pbar


def _factor_pairs(n: int):
    out = []
    d = 2
    m = n
    while d * d <= m:
        e = 0
        while m % d == 0:
            m //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if m > 1:
        out.append((m, 1))
    return out


_E_FACTORS = {7: (1, 1), 8: (8, 16), 9: (3, 9)}


def bound_sieve(qmin: int, qmax: int, n: int, p0: int,
                nine_divides: bool = False, strict_m: bool = False,
                nine_not_divides: bool = False):
    """Shrink the upper bound on q for n in {7, 8, 9}.

    Enumerates (m, u1, u2) under exact integer product constraints: the
    primes outside the 1 mod pbar class must all divide q^(n/p) - 1, the
    rest fit under q^n - 1. Returns (q_new, B, audit); B=False flags a
    nonpositive sieve denominator somewhere in the enumeration.

    The three keyword flags reproduce the modified runs: extra known
    2- and 3-parts (nine_divides), a reduced m range (strict_m), and a
    halved kept-weight exponent (nine_not_divides).
    """
    if n not in _E_FACTORS:
        raise ValueError("supported for n in {7, 8, 9}")
    p, _a, pbar = _pbar_of(n)
    e1, e2 = _E_FACTORS[n]
    if nine_divides:
        e1, e2 = 3 * e1, 3 * e2
    not_form_all = _table(2, "not_form", pbar)
    not_form_tail = _table(p0, "not_form", pbar)
    form_table = _table(3, "form", pbar)
    m_max = sum(1 for sp in small_primes(p0 - 1) if sp % pbar != 1)
    if strict_m:
        m_max -= 1
    cap1 = qmax ** (n // p) - 1
    cap2 = qmax**n - 1
    best_val = None
    best_key = None
    B = True
    weight_exp = (lambda m: 2 * m - 1) if nine_not_divides else (lambda m: 2 * m)
    for m in range(2, m_max + 1):
        not_form_all.ensure(m)
        P0 = 1
        for i in range(m):
            P0 *= int(not_form_all.primes[i])
        u1 = 0
        P1 = 1
        S1 = 0.0
        while e1 * P0 * P1 <= cap1:
            u2 = 0
            P2 = 1
            S2 = 0.0
            while e2 * P0 * P1 * P2 <= cap2:
                delta = 1.0 - 2.0 * (S1 + S2) - (2 * n - 3) / qmin
                if delta <= 0:
                    B = False
                else:
                    Delta = 2.0 + (2 * (u1 + u2) + 2 * n - 4) / delta
                    val = (log10(36) + log10(Delta) + weight_exp(m) * log10(2)) * 2 / (n - 6)
                    if best_val is None or val > best_val:
                        best_val = val
                        best_key = (m, u1, u2)
                p2 = form_table.nth(u2)
                P2 *= p2
                S2 += 1.0 / p2
                u2 += 1
            p1 = not_form_tail.nth(u1)
            P1 *= p1
            S1 += 1.0 / p1
            u1 += 1
    if best_val is None:
        return None, B, {"m_max": m_max}
    audit = {"m_max": m_max, "worst": best_key}
    return LogMagnitude(best_val), B, audit


def ceil_sci(x: LogMagnitude, digits: int = 4) -> int:
    """Smallest integer with the given significant digits that is >= x."""
    exp = math.floor(x.log10)
    mant = 10.0 ** (x.log10 - exp)
    scaled = mant * 10 ** (digits - 1)
    lead = math.ceil(scaled - 1e-9)
    if lead >= 10**digits:
        lead //= 10
        exp += 1
    if exp < digits - 1:
        return math.ceil(10**x.log10 - 1e-9)
    return lead * 10 ** (exp - digits + 1)


def degree7_cascade(start: LogMagnitude, stages=((37, 1), (19, 1), (17, 3)), qmin: int = 10**9):
    """Run the residue-class sieve repeatedly, handing over 4-digit ceilings."""
    out = []
    q_cur = ceil_sci(start)
    for p0, reps in stages:
        for _ in range(reps):
            q_new, B, audit = bound_sieve(qmin, q_cur, 7, p0)
            out.append({"qmax": q_cur, "p0": p0, "q_new": q_new, "B": B, "audit": audit})
            q_cur = ceil_sci(q_new)
    return out


def degree7_chain() -> dict:
    """The full n=7 bound chain: census stage, residue-class stage, cascade."""
    count, inv_sum = prime_census(1 << 20, 1 << 30)
    s_poly, t_poly = 6, 5
    delta1 = 1.0 - 2.0 * inv_sum - (s_poly + t_poly) / 1e9
    Delta1 = 2.0 + (2 * count + s_poly + t_poly - 1) / delta1
    B_const = partial_weight_constant(30.0, 1 << 20)
    # q^(1/2) >= 36 B^2 q^(14/30) Delta  <=>  q^(1/30) >= 36 B^2 Delta
    bound1 = LogMagnitude(30.0 * (log10(36) + 2 * B_const.log10 + log10(Delta1)))

    table14 = _table(3, "form", 14)
    budget = 6.0 * bound1.log10  # product of the class primes fits under (q^7-1)/(q-1)
    u = table14.max_count_with_log10(budget)
    S_u = table14.prefix_inv(u)
    delta2 = 1.0 - 2.0 * S_u - (s_poly + t_poly) / 1e7
    Delta2 = 2.0 + (2 * u + s_poly + t_poly - 1) / delta2
    t_exp = 7.12
    A = partial_weight_constant(t_exp, int(2.0**t_exp) + 1)
    denom = 0.5 - 2.0 / t_exp
    bound2 = LogMagnitude(((2 - 1 / t_exp) * log10(6) + 2 * A.log10 + log10(Delta2)) / denom)

    cascade = degree7_cascade(bound2)
    return {
        "census_count": count,
        "census_inverse_sum": inv_sum,
        "weight_constant": B_const,
        "stage1_delta": delta1,
        "stage1_Delta": Delta1,
        "stage1_bound": bound1,
        "class_prime_count": u,
        "class_inverse_sum": S_u,
        "stage2_delta": delta2,
        "stage2_Delta": Delta2,
        "stage2_bound": bound2,
        "cascade": cascade,
        "final_bound": cascade[-1]["q_new"],
    }
