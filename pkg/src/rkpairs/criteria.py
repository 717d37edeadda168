"""Exact per-(q, n) decision procedures.

Every inequality whose two sides are integers or rationals is decided by
exact squaring; only the weighted-constant test (which involves an
irrational product over primes) runs in log space, with an explicit
margin and a borderline verdict.
"""

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, log10

from . import fqpoly
from .ffield import field_of_order
from .intarith import (
    DEFAULT_BUDGET,
    LogMagnitude,
    factor_prime_power_minus_one,
    is_prime_power,
    next_prime,
    partial_weight_constant,
)

PROVEN = "proven"
NOT_PROVEN = "not_proven"
INDETERMINATE = "indeterminate"

TRUE, FALSE, BORDERLINE = "true", "false", "borderline"

LOG_MARGIN = 1e-6


@dataclass(frozen=True)
class SieveOutcome:
    verdict: str
    stage: str
    delta: "Fraction | None" = None
    Delta: "Fraction | None" = None
    witness_split: "tuple | None" = None
    detail: str = ""

    @property
    def proven(self) -> bool:
        return self.verdict == PROVEN


def bound_constant(m1: int, m2: int) -> int:
    """max(2(m1+m2), m1+3m2+1) -- the constant multiplying the main term."""
    if m1 + m2 < 1:
        raise ValueError("need m1 + m2 >= 1")
    return max(2 * (m1 + m2), m1 + 3 * m2 + 1)


def _pow_half_ge(q: int, e2: int, rhs: Fraction) -> bool:
    """Decide q^(e2/2) >= rhs exactly (rhs > 0), by squaring both sides."""
    if rhs <= 0:
        return True
    num, den = rhs.numerator, rhs.denominator
    if e2 >= 0:
        return q**e2 * den * den >= num * num
    return den * den >= num * num * q**(-e2)


def main_inequality(q, n, r1, r2, k1, k2, m1, m2, W1, W2, Wf1, Wf2) -> bool:
    """The existence inequality with all weight factors supplied exactly."""
    M = bound_constant(m1, m2)
    rhs = Fraction(M * r1 * r2 * W1 * W2 * Wf1 * Wf2)
    return _pow_half_ge(q, n - 2 * (k1 + k2), rhs)


def _char_of(q: int) -> int:
    pp = is_prime_power(q)
    if pp is None:
        raise ValueError(f"{q} is not a prime power")
    return pp[0]


def distinct_unity_factors(q: int, n: int) -> int:
    """Number of distinct monic irreducible factors of x^n - 1 over F_q."""
    degrees, _ = fqpoly.unity_factor_degrees(q, _char_of(q), n)
    return len(degrees)


def number_pol_factors(q: int, n: int) -> "tuple[int, int] | None":
    """Exponent pair (w1, w2) for the cofactor weights, or None.

    The three cases peel off the guaranteed small factors: everything
    survives division when the characteristic divides n; two linear
    factors and one linear factor exist when gcd(q-1, n) > 1; one linear
    and one quadratic exist when gcd(q+1, n) > 1.
    """
    w = distinct_unity_factors(q, n)
    if gcd(q, n) > 1:
        return (w, w)
    if gcd(q - 1, n) > 1:
        return (w - 1, w - 2)
    if gcd(q + 1, n) > 1:
        return (w - 1, w - 1)
    return None


_WEIGHT_CACHE: dict = {}


def _weight_constant_log10(t: float) -> float:
    if t not in _WEIGHT_CACHE:
        plimit = int(2.0**t) + 1  # primes p < 2^t (the integer boundary is never prime)
        _WEIGHT_CACHE[t] = partial_weight_constant(t, plimit).log10
    return _WEIGHT_CACHE[t]


def test_theorem(q: int, n: int, t: float = 8.0) -> str:
    """Log-space check of the weighted main inequality; trichotomy verdict."""
    if t <= 4:
        raise ValueError("t must exceed 4")
    pair = number_pol_factors(q, n)
    if pair is None:
        return FALSE
    w1, w2 = pair
    lq = log10(q)
    lhs = (n / 2 - 3) * lq
    rhs = (2 - 1 / t) * log10(6) + 2 * _weight_constant_log10(t) + (2 * n / t) * lq + (w1 + w2) * log10(2)
    if lhs - rhs > LOG_MARGIN:
        return TRUE
    if rhs - lhs > LOG_MARGIN:
        return FALSE
    return BORDERLINE


def sum_factors(T: int, p0: int) -> "tuple[Fraction, int]":
    """Conservative (S, u0) for the primes >= p0 in T.

    First loop strips actual prime divisors below 1000, counting each
    once; the second pessimistically charges the remaining cofactor with
    consecutive primes, dividing T by each regardless of divisibility
    (exact rational division).
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    p = p0
    p1 = p
    S = Fraction(0)
    u0 = 0
    while T >= p and p < 1000:
        if T % p == 0:
            T //= p
            if p == p1:
                S += Fraction(1, p)
                u0 += 1
            p1 = next_prime(p)
        else:
            p = next_prime(p)
            p1 = p
    p = p1
    Tf = Fraction(T)
    while p < Tf:
        S += Fraction(1, p)
        u0 += 1
        Tf /= p
        p = next_prime(p)
    return S, u0


def special_sieve(q: int, n: int, p0: int) -> SieveOutcome:
    """Sieve with pessimistically charged large primes; no factoring needed."""
    stage = "special_sieve"
    Q = q**n - 1
    if p0 <= 3 or Q % 6:
        raise ValueError("requires a prime p0 > 3 and 6 | q^n - 1")
    pair = number_pol_factors(q, n)
    if pair is None:
        return SieveOutcome(NOT_PROVEN, stage, detail="no small-factor case applies")
    w1, w2 = pair
    T = Q
    ell_exps: dict[int, int] = {}
    p = 2
    while p < p0:
        if T % p == 0:
            T //= p
            ell_exps[p] = ell_exps.get(p, 0) + 1
        else:
            p = next_prime(p)
    wl1 = len(ell_exps) - (1 if ell_exps.get(2) == 1 else 0)
    wl2 = len(ell_exps) - (1 if ell_exps.get(3) == 1 else 0)
    S, u0 = sum_factors(T, p0)
    delta = 1 - 2 * S
    if delta <= 0:
        return SieveOutcome(NOT_PROVEN, stage, delta=delta, detail="delta <= 0")
    Delta = 2 + Fraction(2 * u0 - 1) / delta
    rhs = 36 * Delta * 2 ** (w1 + w2 + wl1 + wl2)
    verdict = PROVEN if _pow_half_ge(q, n - 6, rhs) else NOT_PROVEN
    return SieveOutcome(verdict, stage, delta=delta, Delta=Delta)


def monic_factors(q: int, n: int, seed: int = 0):
    """Factor lists (G1, G2) of x^n - 1 with the guaranteed divisors removed.

    Factors are ordered by (degree, coefficient encoding). Returns None
    when no case applies.
    """
    K = field_of_order(q, seed)
    factors = [g for g, _e in fqpoly.factor_unity(K, n, seed)]
    if gcd(q, n) > 1:
        return list(factors), list(factors)
    if gcd(q - 1, n) > 1:
        return list(factors[2:]), list(factors[1:])
    if gcd(q + 1, n) > 1:
        # one linear factor exists; the second-listed factor is the quadratic
        return [f for i, f in enumerate(factors) if i != 1], list(factors[1:])
    return None


def total_sieve(q: int, n: int, constant: int = 36, budget: int = DEFAULT_BUDGET,
                seed: int = 0) -> SieveOutcome:
    """Exhaust all keep/sieve splits of the prime and factor lists.

    constant=36 matches the proven inequality shape; constant=6 is the
    literal pseudocode value, kept behind this flag for comparison runs.
    """
    if constant not in (6, 36):
        raise ValueError("constant must be 6 or 36")
    stage = "total_sieve"
    Q = q**n - 1
    if Q % 6:
        raise ValueError("requires 6 | q^n - 1")
    fact = factor_prime_power_minus_one(q, n, budget)
    if not fact.is_complete:
        return SieveOutcome(INDETERMINATE, stage, detail=f"unfactored cofactor {fact.cofactor}")
    exps = dict(fact.factors)
    L1 = [p for p in fact.primes() if p != 2 or exps[2] > 1]
    L2 = [p for p in fact.primes() if p != 3 or exps[3] > 1]
    pair = monic_factors(q, n, seed)
    if pair is None:
        return SieveOutcome(NOT_PROVEN, stage, detail="no small-factor case applies")
    G1, G2 = pair
    K = field_of_order(q, seed)

    def suffix_prime(L):
        out = [Fraction(0)] * (len(L) + 1)
        for i in range(len(L) - 1, -1, -1):
            out[i] = out[i + 1] + Fraction(1, L[i])
        return out

    def suffix_poly(G):
        out = [Fraction(0)] * (len(G) + 1)
        for i in range(len(G) - 1, -1, -1):
            out[i] = out[i + 1] + Fraction(1, q ** fqpoly.deg(G[i]))
        return out

    suf1, suf2 = suffix_prime(L1), suffix_prime(L2)
    sufg1, sufg2 = suffix_poly(G1), suffix_poly(G2)
    for i1 in range(len(L1) + 1):
        for i2 in range(len(L2) + 1):
            for j1 in range(len(G1) + 1):
                for j2 in range(len(G2) + 1):
                    delta = 1 - (suf1[i1] + suf2[i2] + sufg1[j1] + sufg2[j2])
                    if delta <= 0:
                        continue
                    count = (len(L1) - i1) + (len(L2) - i2) + (len(G1) - j1) + (len(G2) - j2)
                    Delta = 2 + Fraction(count - 1) / delta
                    rhs = constant * Delta * 2 ** (i1 + i2 + j1 + j2)
                    if _pow_half_ge(q, n - 6, rhs):
                        split = {
                            "kept_primes_1": L1[:i1],
                            "kept_primes_2": L2[:i2],
                            "kept_factors_1": [fqpoly.format_poly(K, g) for g in G1[:j1]],
                            "kept_factors_2": [fqpoly.format_poly(K, g) for g in G2[:j2]],
                            "indices": (i1, i2, j1, j2),
                        }
                        return SieveOutcome(PROVEN, stage, delta=delta, Delta=Delta,
                                            witness_split=tuple(sorted(split.items())))
    return SieveOutcome(NOT_PROVEN, stage, detail="all splits exhausted")


def condition_qn(q: int, n: int) -> bool:
    """6 | q^n - 1 together with gcd(q^3 - q, n) != 1."""
    return (q**n - 1) % 6 == 0 and gcd(q**3 - q, n) != 1


FACTOR_COUNT_PAIRS = (
    lambda q: (1, Fraction(0)),
    lambda q: (2, Fraction(q - 1, 2)),
    lambda q: (3, Fraction(q * q + 3 * q - 4, 6)),
    lambda q: (4, Fraction(q**3 + 3 * q * q + 5 * q - 9, 12)),
    lambda q: (5, Fraction(3 * q**4 + 8 * q**3 + 15 * q * q + 22 * q - 48, 60)),
)


def factor_count_bound_check(q: int, n: int) -> bool:
    """Distinct-factor count of x^n - 1 against all five (a, b) bound pairs."""
    count = distinct_unity_factors(q, n)
    for pair in FACTOR_COUNT_PAIRS:
        a, b = pair(q)
        if Fraction(count) > Fraction(n, a) + b:
            return False
    return True


# ---------------------------------------------------------------------------
# staged sweeps

def default_special_p0(q: int, n: int) -> int:
    """Prime cutoff schedule keyed to the size of q^n."""
    size = n * log10(q)
    if size > 100:
        return 71
    if size > 30:
        return 53
    return 23


@dataclass
class SweepReport:
    stages: "list[str]"
    cleared: "dict[str, int]" = field(default_factory=dict)
    survivors: "list[tuple[int, int]]" = field(default_factory=list)
    indeterminate: "list[tuple[int, int]]" = field(default_factory=list)
    borderline: "list[tuple[int, int]]" = field(default_factory=list)
    cells: int = 0

    def to_dict(self) -> dict:
        return {
            "stages": self.stages,
            "cleared": self.cleared,
            "cells": self.cells,
            "survivors": sorted(self.survivors),
            "indeterminate": sorted(self.indeterminate),
            "borderline": sorted(self.borderline),
        }


def make_stage(name: str, **params):
    """A picklable stage descriptor: (name, sorted params)."""
    return (name, tuple(sorted(params.items())))


def run_stage(stage, q: int, n: int):
    """Execute one stage; returns (verdict, delta, Delta) with sieve verdicts."""
    name, params = stage
    kw = dict(params)
    if name == "test_theorem":
        verdict = test_theorem(q, n, kw.get("t", 8.0))
        mapped = {TRUE: PROVEN, FALSE: NOT_PROVEN, BORDERLINE: BORDERLINE}[verdict]
        return mapped, None, None
    if name == "special_sieve":
        p0 = kw.get("p0")
        out = special_sieve(q, n, p0 if p0 else default_special_p0(q, n))
        return out.verdict, out.delta, out.Delta
    if name == "total_sieve":
        out = total_sieve(q, n, kw.get("constant", 36), kw.get("budget", DEFAULT_BUDGET))
        return out.verdict, out.delta, out.Delta
    raise ValueError(f"unknown stage {name!r}")


def _run_cell(args):
    q, n, stages = args
    t0 = time.perf_counter()
    last = (NOT_PROVEN, None, None)
    stage_name = ""
    for stage in stages:
        stage_name = stage[0]
        last = run_stage(stage, q, n)
        if last[0] == PROVEN:
            break
    elapsed_ms = int(1000 * (time.perf_counter() - t0))
    verdict, delta, Delta = last
    return {
        "q": q,
        "n": n,
        "stage": stage_name,
        "verdict": verdict,
        "delta": None if delta is None else str(delta),
        "Delta": None if Delta is None else str(Delta),
        "elapsed_ms": elapsed_ms,
    }


def sweep(cells, stages, checkpoint_path=None, workers: int = 1, progress=None) -> SweepReport:
    """Run the stage pipeline over (q, n) cells, cheapest stage first.

    Results stream to a JSON-lines checkpoint (append-only), and cells
    already present there are skipped, so long sweeps resume. Ordering
    of the report is deterministic regardless of worker count.
    """
    cells = sorted(set(cells), key=lambda c: (c[1], c[0]))
    done: dict = {}
    if checkpoint_path:
        try:
            with open(checkpoint_path) as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        rec = json.loads(line)
                        done[(rec["q"], rec["n"])] = rec
        except FileNotFoundError:
            pass
    todo = [(q, n) for q, n in cells if (q, n) not in done]
    sink = open(checkpoint_path, "a") if checkpoint_path else None
    try:
        if workers > 1 and len(todo) > 1:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(max_workers=workers) as pool:
                for rec in pool.map(_run_cell, [(q, n, stages) for q, n in todo], chunksize=64):
                    done[(rec["q"], rec["n"])] = rec
                    if sink:
                        sink.write(json.dumps(rec, sort_keys=True) + "\n")
                    if progress:
                        progress(rec)
        else:
            for q, n in todo:
                rec = _run_cell((q, n, stages))
                done[(rec["q"], rec["n"])] = rec
                if sink:
                    sink.write(json.dumps(rec, sort_keys=True) + "\n")
                if progress:
                    progress(rec)
    finally:
        if sink:
            sink.close()
    report = SweepReport(stages=[s[0] for s in stages])
    for q, n in cells:
        rec = done[(q, n)]
        report.cells += 1
        if rec["verdict"] == PROVEN:
            report.cleared[rec["stage"]] = report.cleared.get(rec["stage"], 0) + 1
        elif rec["verdict"] == INDETERMINATE:
            report.indeterminate.append((q, n))
        elif rec["verdict"] == BORDERLINE:
            report.borderline.append((q, n))
        else:
            report.survivors.append((q, n))
    return report
