"""Exact integer number theory.

Factorization with an explicit iteration budget (incomplete splits are
surfaced, never hidden), multiplicative arithmetic functions, prime
streams and censuses, and products of primes kept in log space when the
actual values would be astronomically large.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

import gmpy2
import numpy as np

TRIAL_LIMIT = 1_000_000
DEFAULT_BUDGET = 10_000_000

# ---------------------------------------------------------------------------
# primality

_MR_BASES = 64  # strong probable-prime rounds with the first 64 primes


def is_probable_prime(n: int) -> bool:
    """Strong probable-prime test (64 prime bases) plus a strong Lucas test."""
    n = int(n)
    if n < 2:
        return False
    m = gmpy2.mpz(n)
    for p in small_primes(311)[:_MR_BASES]:  # 311 = 64th prime
        p = int(p)
        if n == p:
            return True
        if n % p == 0:
            return False
        if not gmpy2.is_strong_prp(m, p):
            return False
    return bool(gmpy2.is_strong_selfridge_prp(m))


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    return int(gmpy2.next_prime(n))


def is_prime_power(q: int) -> "tuple[int, int] | None":
    """Return (p, k) with q = p^k and p prime, or None."""
    if q < 2:
        return None
    for k in range(q.bit_length(), 0, -1):
        root, exact = gmpy2.iroot(gmpy2.mpz(q), k)
        if exact and is_probable_prime(int(root)):
            return int(root), k
    return None


# ---------------------------------------------------------------------------
# prime sieves and streams

@lru_cache(maxsize=16)
def small_primes(limit: int) -> np.ndarray:
    """All primes <= limit, as an int64 array (simple sieve)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def sieve_segments(lo: int, hi: int, block: int = 1 << 22):
    """Yield arrays of primes p with lo < p < hi, in ascending blocks."""
    if hi <= 2 or hi <= lo:
        return
    base = small_primes(isqrt(hi) + 1)
    start = max(lo + 1, 2)
    if start <= 2 < hi:
        yield np.array([2], dtype=np.int64)
    # odd-only segments
    start = max(start, 3)
    if start % 2 == 0:
        start += 1
    while start < hi:
        end = min(start + block, hi)
        size = (end - start + 1) // 2  # odds in [start, end)
        if size <= 0:
            break
        mask = np.ones(size, dtype=bool)
        for p in base[1:]:  # skip 2
            p = int(p)
            if p * p >= end:
                break
            first = max(p * p, ((start + p - 1) // p) * p)
            if first % 2 == 0:
                first += p
            if first < end:
                mask[(first - start) // 2 :: p] = False
        vals = start + 2 * np.flatnonzero(mask).astype(np.int64)
        if len(vals) and vals[0] <= lo:
            vals = vals[vals > lo]
        if len(vals):
            yield vals
        start = end if end % 2 == 1 else end + 1


def prime_census(lo: int, hi: int) -> "tuple[int, float]":
    """Count primes with lo < p < hi and sum their reciprocals.

    The reciprocal sum is accumulated per segment (pairwise inside numpy)
    and combined with math.fsum, so the result is summation-order stable.
    """
    count = 0
    partials = []
    for seg in sieve_segments(lo, hi):
        count += len(seg)
        partials.append(float(np.sum(1.0 / seg.astype(np.float64))))
    return count, math.fsum(partials)


class PrimeTable:
    """Growing table of primes >= p0 matching a residue-class filter.

    Keeps cumulative log10 and reciprocal sums, so products of prefixes
    can be compared in log space and inverse sums read off directly.
    Extended in bulk with the segmented sieve.
    """

    def __init__(self, p0: int, class_filter: str = "all", pbar: "int | None" = None):
        if class_filter not in ("all", "form", "not_form"):
            raise ValueError(f"unknown class filter {class_filter!r}")
        if class_filter != "all" and (pbar is None or pbar < 2):
            raise ValueError("class filter needs the modulus pbar")
        self.p0 = max(2, p0)
        self.class_filter = class_filter
        self.pbar = pbar
        self.primes = np.empty(0, dtype=np.int64)
        self.cumlog10 = np.empty(0, dtype=np.float64)
        self.cuminv = np.empty(0, dtype=np.float64)
        self._hi = self.p0  # primes in [p0, _hi) already absorbed

    def _extend(self) -> None:
        lo, hi = self._hi, max(2 * self._hi, self._hi + (1 << 16))
        chunks = [seg for seg in sieve_segments(lo - 1, hi)]
        self._hi = hi
        if not chunks:
            return
        ps = np.concatenate(chunks)
        if self.class_filter == "form":
            ps = ps[ps % self.pbar == 1]
        elif self.class_filter == "not_form":
            ps = ps[ps % self.pbar != 1]
        if len(ps) == 0:
            return
        base_log = self.cumlog10[-1] if len(self.cumlog10) else 0.0
        base_inv = self.cuminv[-1] if len(self.cuminv) else 0.0
        self.primes = np.concatenate([self.primes, ps])
        self.cumlog10 = np.concatenate([self.cumlog10, base_log + np.cumsum(np.log10(ps))])
        self.cuminv = np.concatenate([self.cuminv, base_inv + np.cumsum(1.0 / ps)])

    def ensure(self, count: int) -> None:
        while len(self.primes) < count:
            self._extend()

    def prefix_log10(self, count: int) -> float:
        if count == 0:
            return 0.0
        self.ensure(count)
        return float(self.cumlog10[count - 1])

    def prefix_inv(self, count: int) -> float:
        if count == 0:
            return 0.0
        self.ensure(count)
        return float(self.cuminv[count - 1])

    def nth(self, i: int) -> int:
        self.ensure(i + 1)
        return int(self.primes[i])

    def max_count_with_log10(self, budget_log10: float) -> int:
        """Largest u with sum of log10 of the first u primes <= budget."""
        if budget_log10 < 0:
            return 0
        while len(self.cumlog10) == 0 or self.cumlog10[-1] <= budget_log10:
            self._extend()
        return int(np.searchsorted(self.cumlog10, budget_log10, side="right"))


_PRIMORIAL_TABLE = PrimeTable(2)


def nth_prime(i: int) -> int:
    """The i-th prime, 1-indexed (nth_prime(1) == 2)."""
    if i < 1:
        raise ValueError("index is 1-based")
    return _PRIMORIAL_TABLE.nth(i - 1)


def primorial_log(m: int) -> "LogMagnitude":
    """log10 of the product of the first m primes."""
    if m < 0:
        raise ValueError("m must be >= 0")
    return LogMagnitude(_PRIMORIAL_TABLE.prefix_log10(m))


def prime_products(
    p0: int,
    u: int,
    class_filter: str = "all",
    pbar: "int | None" = None,
) -> "tuple[LogMagnitude, float]":
    """Product (log space) and reciprocal sum of the first u qualifying primes >= p0."""
    table = PrimeTable(p0, class_filter, pbar)
    return LogMagnitude(table.prefix_log10(u)), table.prefix_inv(u)


def partial_weight_constant(t: float, plimit: int) -> "LogMagnitude":
    """log10 of prod_{p < plimit} 2 / p^(1/t), accumulated as compensated log sums."""
    if t <= 0:
        raise ValueError("t must be positive")
    ps = small_primes(max(plimit - 1, 2))
    ps = ps[ps < plimit]
    if len(ps) == 0:
        return LogMagnitude(0.0)
    logs = np.log10(ps.astype(np.float64))
    total = len(ps) * math.log10(2.0) - math.fsum(logs.tolist()) / t
    return LogMagnitude(total)


# ---------------------------------------------------------------------------
# log-space magnitudes

_LOG10_2 = math.log10(2.0)


def log10_int(n: int) -> float:
    """log10 of a positive integer of any size."""
    if n <= 0:
        raise ValueError("need a positive integer")
    return float(gmpy2.log10(gmpy2.mpz(n)))


@dataclass(frozen=True)
class LogMagnitude:
    """A positive real stored as its base-10 logarithm.

    Ordering of magnitudes equals ordering of the represented reals and
    multiplication turns into addition of the log10 fields.
    """

    log10: float

    def __post_init__(self):
        if not math.isfinite(self.log10):
            raise ValueError("log10 field must be finite")

    @classmethod
    def from_value(cls, x) -> "LogMagnitude":
        if isinstance(x, LogMagnitude):
            return x
        if isinstance(x, int):
            return cls(log10_int(x))
        if x <= 0:
            raise ValueError("magnitude must be positive")
        return cls(math.log10(x))

    @classmethod
    def from_sci(cls, text: str) -> "LogMagnitude":
        """Parse scientific notation like '6.18e718'."""
        mant, _, exp = text.partition("e")
        return cls(math.log10(float(mant)) + int(exp))

    @staticmethod
    def _coerce(other) -> float:
        if isinstance(other, LogMagnitude):
            return other.log10
        if isinstance(other, int):
            return log10_int(other)
        if isinstance(other, float):
            if other <= 0:
                raise ValueError("cannot compare with a non-positive real")
            return math.log10(other)
        return NotImplemented

    def __mul__(self, other):
        value = self._coerce(other)
        if value is NotImplemented:
            return NotImplemented
        return LogMagnitude(self.log10 + value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        value = self._coerce(other)
        if value is NotImplemented:
            return NotImplemented
        return LogMagnitude(self.log10 - value)

    def __pow__(self, exponent: float) -> "LogMagnitude":
        return LogMagnitude(self.log10 * exponent)

    def root(self, k: float) -> "LogMagnitude":
        return LogMagnitude(self.log10 / k)

    def _cmp(self, other) -> float:
        value = self._coerce(other)
        if value is NotImplemented:
            raise TypeError(f"cannot compare LogMagnitude with {type(other)}")
        return self.log10 - value

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def compare_with_margin(self, other, margin: float = 1e-6) -> int:
        """+1 / -1 when the log10 gap clears the margin, else 0 (borderline)."""
        diff = self._cmp(other)
        if diff > margin:
            return 1
        if diff < -margin:
            return -1
        return 0

    def __float__(self) -> float:
        return 10.0 ** self.log10 if self.log10 < 308 else math.inf

    def ceil_int(self) -> int:
        """Smallest integer >= the magnitude (only for modest magnitudes)."""
        if self.log10 > 30:
            raise OverflowError("magnitude too large for exact integer ceiling")
        value = 10 ** self.log10
        candidate = math.ceil(value)
        # float round-off guard around exact integer boundaries
        if candidate - 1 >= 1 and log10_int(candidate - 1) >= self.log10:
            candidate -= 1
        return candidate

    def sci(self, digits: int = 4) -> str:
        """Format as d.dd...e+-xxx with the given significant digits."""
        exp = math.floor(self.log10)
        mant = 10.0 ** (self.log10 - exp)
        mant = round(mant, digits - 1)
        if mant >= 10.0:
            mant /= 10.0
            exp += 1
        return f"{mant:.{digits - 1}f}e{exp}"

    def __repr__(self):
        return f"LogMagnitude({self.sci()})"


# ---------------------------------------------------------------------------
# factorization

@dataclass(frozen=True)
class Factorization:
    """n = cofactor * prod p^e with certified prime p's.

    A cofactor of 1 means the split is complete; otherwise the cofactor is
    a composite the budget could not split (indeterminate part).
    """

    value: int
    factors: tuple  # ((prime, exponent), ...) with strictly increasing primes
    cofactor: int = 1

    @property
    def is_complete(self) -> bool:
        return self.cofactor == 1

    def primes(self) -> "tuple[int, ...]":
        return tuple(p for p, _ in self.factors)

    def check(self) -> None:
        prod = self.cofactor
        last = 1
        for p, e in self.factors:
            if p <= last:
                raise ValueError("primes must be strictly increasing")
            if e < 1:
                raise ValueError("exponents must be positive")
            if not is_probable_prime(p):
                raise ValueError(f"{p} fails the primality test")
            last = p
            prod *= p**e
        if prod != self.value:
            raise ValueError("factors do not reconstruct the value")

    def divisors(self):
        """All positive divisors of the certified part, ascending."""
        if not self.is_complete:
            raise ValueError("indeterminate factorization")
        divs = [1]
        for p, e in self.factors:
            divs = [d * p**i for d in divs for i in range(e + 1)]
        return sorted(divs)


@lru_cache(maxsize=1)
def _trial_tree():
    """Balanced product tree over all primes <= TRIAL_LIMIT (for gcd splitting)."""
    leaves = [gmpy2.mpz(int(p)) for p in small_primes(TRIAL_LIMIT)]
    levels = [leaves]
    while len(levels[-1]) > 1:
        prev = levels[-1]
        levels.append(
            [prev[i] * prev[i + 1] if i + 1 < len(prev) else prev[i] for i in range(0, len(prev), 2)]
        )
    return levels


def _tree_primes_dividing(n) -> "list[int]":
    """All primes <= TRIAL_LIMIT dividing n, via gcd descent on the product tree."""
    levels = _trial_tree()
    root = levels[-1][0]
    g = gmpy2.gcd(gmpy2.mpz(n), root)
    if g == 1:
        return []
    found = []
    stack = [(len(levels) - 1, 0, g)]
    while stack:
        depth, idx, g = stack.pop()
        if depth == 0:
            found.append(int(levels[0][idx]))
            continue
        for child in (2 * idx, 2 * idx + 1):
            if child < len(levels[depth - 1]):
                cg = gmpy2.gcd(g, levels[depth - 1][child])
                if cg > 1:
                    stack.append((depth - 1, child, cg))
    return sorted(found)


def _pollard_brent(n: int, budget: int, seed_c: int = 1):
    """Brent's cycle variant of Pollard rho; deterministic, bounded iterations."""
    m = gmpy2.mpz(n)
    iters = 0
    c = seed_c
    while iters < budget:
        y, r, q = gmpy2.mpz(2), 1, gmpy2.mpz(1)
        g = gmpy2.mpz(1)
        x = ys = y
        while g == 1 and iters < budget:
            x = y
            for _ in range(r):
                y = (y * y + c) % m
            k = 0
            while k < r and g == 1:
                ys = y
                step = min(128, r - k, budget - iters)
                if step <= 0:
                    break
                for _ in range(step):
                    y = (y * y + c) % m
                    q = q * abs(x - y) % m
                iters += step
                g = gmpy2.gcd(q, m)
                k += step
            r *= 2
        if g == m:  # backtrack
            g = gmpy2.mpz(1)
            while g == 1:
                ys = (ys * ys + c) % m
                g = gmpy2.gcd(abs(x - ys), m)
        if 1 < g < m:
            return int(g), iters
        c += 1
    return None, iters


def _pollard_pm1(n: int, bound: int = 100_000):
    """Stage-1 Pollard p-1 with exponent built from primes <= bound."""
    m = gmpy2.mpz(n)
    a = gmpy2.mpz(2)
    for p in small_primes(bound):
        p = int(p)
        pe = p
        while pe * p <= bound:
            pe *= p
        a = gmpy2.powmod(a, pe, m)
        if a == 1:
            return None
    g = gmpy2.gcd(a - 1, m)
    if 1 < g < m:
        return int(g)
    return None


def factor_integer(n: int, budget: int = DEFAULT_BUDGET) -> Factorization:
    """Factor n >= 2: trial division, probable-prime tests, rho and p-1.

    Deterministic for a fixed budget (iterations of the rho inner loop, per
    composite). Whatever does not split within budget lands in the cofactor.
    Values of the shape b^k - 1 are split algebraically first.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    power = _perfect_power_plus_one(n)
    if power is not None:
        base, exp = power
        if exp > 1 and base >= 2:
            return factor_prime_power_minus_one(base, exp, budget)
    return _factor_generic(n, budget)


def _perfect_power_plus_one(n: int):
    """If n + 1 == b^k with k >= 2, return (b, k) with k maximal."""
    target = gmpy2.mpz(n + 1)
    for k in range(target.bit_length(), 1, -1):
        root, exact = gmpy2.iroot(target, k)
        if exact and root >= 2:
            return int(root), k
    return None


def _factor_generic(n: int, budget: int) -> Factorization:
    value = n
    exps: dict[int, int] = {}
    rem = n
    for p in _tree_primes_dividing(rem):
        e = 0
        while rem % p == 0:
            rem //= p
            e += 1
        exps[p] = exps.get(p, 0) + e
    cofactor = 1
    stack = [rem] if rem > 1 else []
    while stack:
        c = stack.pop()
        if c == 1:
            continue
        if is_probable_prime(c):
            exps[c] = exps.get(c, 0) + 1
            continue
        root, exact = gmpy2.iroot(gmpy2.mpz(c), 2)
        if exact:
            stack.extend([int(root), int(root)])
            continue
        d = _pollard_pm1(c, bound=min(100_000, budget))
        if d is None:
            d, _ = _pollard_brent(c, budget)
        if d is None:
            cofactor *= c
            continue
        stack.extend([d, c // d])
    factors = tuple(sorted(exps.items()))
    return Factorization(value=value, factors=factors, cofactor=cofactor)


def merge_factorizations(parts: "list[Factorization]") -> Factorization:
    value = 1
    exps: dict[int, int] = {}
    cofactor = 1
    for f in parts:
        value *= f.value
        cofactor *= f.cofactor
        for p, e in f.factors:
            exps[p] = exps.get(p, 0) + e
    return Factorization(value=value, factors=tuple(sorted(exps.items())), cofactor=cofactor)


@lru_cache(maxsize=512)
def cyclotomic_value(d: int, q: int) -> int:
    """Value of the d-th cyclotomic polynomial at the integer q."""
    num = 1
    den = 1
    for e in _divisors_int(d):
        mu = mobius_int(d // e)
        if mu == 1:
            num *= q**e - 1
        elif mu == -1:
            den *= q**e - 1
    return num // den


def factor_prime_power_minus_one(q: int, n: int, budget: int = DEFAULT_BUDGET) -> Factorization:
    """Factor q^n - 1 after splitting it into cyclotomic values at q."""
    pp = is_prime_power(q)
    base, exp = (pp if pp is not None else (q, 1))
    total = exp * n
    parts = [_factor_generic(cyclotomic_value(d, base), budget) for d in _divisors_int(total) if cyclotomic_value(d, base) > 1]
    merged = merge_factorizations(parts)
    assert merged.value == q**n - 1
    return merged


# ---------------------------------------------------------------------------
# multiplicative arithmetic functions

def _require_complete(f: Factorization) -> None:
    if not f.is_complete:
        raise ValueError("operation needs a complete factorization")


def euler_phi(f: Factorization) -> int:
    """Euler totient from a complete factorization."""
    _require_complete(f)
    out = 1
    for p, e in f.factors:
        out *= (p - 1) * p ** (e - 1)
    return out


def mobius(f: Factorization) -> int:
    _require_complete(f)
    if any(e > 1 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


def big_W(f: Factorization) -> int:
    """Number of squarefree divisors: 2^(number of distinct primes)."""
    _require_complete(f)
    return 1 << len(f.factors)


def rel_part(a: int, b: int) -> int:
    """a divided by gcd(a, b)."""
    if a < 1 or b < 1:
        raise ValueError("arguments must be positive")
    return a // gcd(a, b)


@lru_cache(maxsize=4096)
def _small_factor_exps(n: int) -> "tuple[tuple[int, int], ...]":
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def phi_int(n: int) -> int:
    out = 1
    for p, e in _small_factor_exps(n):
        out *= (p - 1) * p ** (e - 1)
    return out


def mobius_int(n: int) -> int:
    fs = _small_factor_exps(n)
    if any(e > 1 for _, e in fs):
        return 0
    return -1 if len(fs) % 2 else 1


def w_int(n: int) -> int:
    return 1 << len(_small_factor_exps(n))


def _divisors_int(n: int) -> "list[int]":
    divs = [1]
    for p, e in _small_factor_exps(n):
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def divisor_sum_identity(R: int, r: int) -> "tuple[int, int]":
    """Both sides of the gcd-weighted divisor-sum identity.

    Left side: sum over d | R of |mu(d_r)| / phi(d_r) * phi(d) where
    d_r = d / gcd(d, r), evaluated in exact rationals and checked integral.
    Right side: gcd(R, r) * W(gcd(R, R_r)).
    """
    if R < 1 or r < 1:
        raise ValueError("arguments must be positive")
    lhs = Fraction(0)
    for d in _divisors_int(R):
        dr = rel_part(d, r)
        mu_abs = abs(mobius_int(dr))
        if mu_abs:
            lhs += Fraction(phi_int(d), phi_int(dr))
    if lhs.denominator != 1:
        raise ArithmeticError(f"left side is not integral for R={R}, r={r}")
    rhs = gcd(R, r) * w_int(gcd(R, rel_part(R, r)))
    return int(lhs), rhs


# ---------------------------------------------------------------------------
# prime powers

def prime_powers_upto(limit: int) -> "list[int]":
    """All prime powers q < limit, ascending."""
    out = [int(p) for p in small_primes(limit - 1)]
    for p in small_primes(isqrt(limit)):
        q = int(p) * int(p)
        while q < limit:
            out.append(q)
            q *= int(p)
    return sorted(out)


def count_prime_powers_mod(limit: int, modulus: int, residues: "set[int]") -> int:
    """Count prime powers q < limit with q mod modulus in residues."""
    ps = small_primes(limit - 1)
    mask = np.isin(ps % modulus, list(residues))
    count = int(np.count_nonzero(mask))
    for p in small_primes(isqrt(limit)):
        q = int(p) * int(p)
        while q < limit:
            if q % modulus in residues:
                count += 1
            q *= int(p)
    return count
