"""The field tower F_p < F_q < F_{q^n}.

F_q is a degree-m extension of the prime field; F_{q^n} is represented as
a degree-n extension of F_q (not as a flat extension of F_p), because the
q-power Frobenius and the induced polynomial action are the primitives
everything else consumes.

Elements of F_q are integers in [0, q) encoding base-p digit vectors;
elements of F_{q^n} are length-n tuples of those integers.
"""

import json
import random
from math import isqrt

from . import fqpoly
from .intarith import (
    Factorization,
    factor_prime_power_minus_one,
    is_prime_power,
    is_probable_prime,
    _small_factor_exps,
)

TABLE_CAP = 1024  # largest non-prime q built with full lookup tables
DLOG_CAP = 1 << 32


class BaseField:
    """Shared coefficient-field protocol (see fqpoly)."""

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def from_int(self, i: int):
        return i

    def to_int(self, a) -> int:
        return a

    def elements(self):
        return (self.from_int(i) for i in range(self.order))


class GFp(BaseField):
    """Prime field; elements are ints in [0, p)."""

    def __init__(self, p: int):
        self.p = p
        self.order = p
        self.char = p
        self.zero = 0
        self.one = 1 % p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def generator(self) -> int:
        if self.p == 2:
            return 1
        primes = [f for f, _ in _small_factor_exps(self.p - 1)]
        for g in range(2, self.p):
            if all(pow(g, (self.p - 1) // s, self.p) != 1 for s in primes):
                return g
        raise ArithmeticError("no primitive root found")  # unreachable for prime p

    def __repr__(self):
        return f"GF({self.p})"


class GFqTable(BaseField):
    """Extension field F_{p^m} with full lookup tables (small q only)."""

    def __init__(self, p: int, m: int, base_poly: tuple):
        q = p**m
        if q > TABLE_CAP:
            raise ValueError(f"table-based field capped at order {TABLE_CAP}")
        self.p = p
        self.m = m
        self.order = q
        self.char = p
        self.base_poly = base_poly
        self.zero = 0
        self.one = 1
        Kp = GFp(p)
        polys = [self._decode(i) for i in range(q)]
        self._add = [[self._encode(fqpoly.add(Kp, polys[a], polys[b])) for b in range(q)] for a in range(q)]
        self._mul = [
            [self._encode(fqpoly.mod(Kp, fqpoly.mul(Kp, polys[a], polys[b]), base_poly)) for b in range(q)]
            for a in range(q)
        ]
        self._neg = [self._encode(fqpoly.scale(Kp, polys[a], p - 1)) for a in range(q)]
        self._inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self._mul[a][b] == 1:
                    self._inv[a] = b
                    break

    def _decode(self, i: int) -> tuple:
        digits = []
        while i:
            digits.append(i % self.p)
            i //= self.p
        while digits and digits[-1] == 0:
            digits.pop()
        return tuple(digits)

    def _encode(self, poly: tuple) -> int:
        out = 0
        for c in reversed(poly):
            out = out * self.p + c
        return out

    def add(self, a, b):
        return self._add[a][b]

    def sub(self, a, b):
        return self._add[a][self._neg[b]]

    def neg(self, a):
        return self._neg[a]

    def mul(self, a, b):
        return self._mul[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._inv[a]

    def generator(self) -> int:
        primes = [f for f, _ in _small_factor_exps(self.order - 1)]
        for g in range(2, self.order):
            if all(self.pow(g, (self.order - 1) // s) != 1 for s in primes):
                return g
        raise ArithmeticError("no generator found")

    def trace_to_prime(self, a) -> int:
        """Absolute trace F_q -> F_p."""
        acc = a
        cur = a
        for _ in range(self.m - 1):
            cur = self.pow(cur, self.p)
            acc = self.add(acc, cur)
        # the result encodes a constant polynomial
        return acc % self.p

    def __repr__(self):
        return f"GF({self.p}^{self.m})"


class GFqPoly(BaseField):
    """Extension field F_{p^m} with on-the-fly polynomial arithmetic.

    Slower than GFqTable but works for any order; used where sweeps hit
    prime powers above the table cap.
    """

    def __init__(self, p: int, m: int, base_poly: tuple):
        self.p = p
        self.m = m
        self.order = p**m
        self.char = p
        self.base_poly = base_poly
        self._Kp = GFp(p)
        self.zero = 0
        self.one = 1

    def _decode(self, i: int) -> tuple:
        digits = []
        while i:
            digits.append(i % self.p)
            i //= self.p
        return tuple(digits)

    def _encode(self, poly: tuple) -> int:
        out = 0
        for c in reversed(poly):
            out = out * self.p + c
        return out

    def add(self, a, b):
        return self._encode(fqpoly.add(self._Kp, self._decode(a), self._decode(b)))

    def sub(self, a, b):
        return self._encode(fqpoly.sub(self._Kp, self._decode(a), self._decode(b)))

    def neg(self, a):
        return self._encode(fqpoly.scale(self._Kp, self._decode(a), self.p - 1))

    def mul(self, a, b):
        prod = fqpoly.mul(self._Kp, self._decode(a), self._decode(b))
        return self._encode(fqpoly.mod(self._Kp, prod, self.base_poly))

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.order - 2)

    def generator(self) -> int:
        primes = [f for f, _ in _small_factor_exps(self.order - 1)]
        for g in range(2, self.order):
            if all(self.pow(g, (self.order - 1) // s) != 1 for s in primes):
                return g
        raise ArithmeticError("no generator found")

    def __repr__(self):
        return f"GF({self.p}^{self.m})"


def field_of_order(q: int, seed: int = 0) -> BaseField:
    """Coefficient field of the given prime-power order."""
    pp = is_prime_power(q)
    if pp is None:
        raise ValueError(f"{q} is not a prime power")
    p, m = pp
    if m == 1:
        return GFp(p)
    base_poly = _seeded_monic_search(GFp(p), m, seed)
    return GFqTable(p, m, base_poly) if q <= TABLE_CAP else GFqPoly(p, m, base_poly)


class FieldCtx:
    """Immutable description of F_p < F_q < F_{q^n} with a fixed generator.

    Construct through make_ctx; direct construction assumes the data is
    already validated. Heavy derived tables are built lazily and dropped
    on pickling.
    """

    def __init__(self, p, m, n, base_poly, ext_poly, generator, group_order_fact, seed=0):
        self.p = p
        self.m = m
        self.n = n
        self.q = p**m
        self.base_poly = base_poly
        self.ext_poly = ext_poly
        self.generator = generator
        self.group_order = self.q**n - 1
        self.group_order_fact = group_order_fact
        self.seed = seed
        self._init_caches()

    def _init_caches(self):
        self.Kq = GFp(self.p) if self.m == 1 else GFqTable(self.p, self.m, self.base_poly)
        self.zero = (0,) * self.n
        one = [0] * self.n
        one[0] = self.Kq.one
        self.one = tuple(one)
        # x^n = -(low coefficients of the monic extension polynomial)
        self._ext_low = tuple(self.ext_poly[:-1])
        self._frob_rows = None
        self._trace_coeffs = None
        self._dlog_baby = None

    def __reduce__(self):
        return (
            FieldCtx,
            (self.p, self.m, self.n, self.base_poly, self.ext_poly, self.generator,
             self.group_order_fact, self.seed),
        )

    def __eq__(self, other):
        return (
            isinstance(other, FieldCtx)
            and (self.p, self.m, self.n, self.base_poly, self.ext_poly, self.generator)
            == (other.p, other.m, other.n, other.base_poly, other.ext_poly, other.generator)
        )

    def __repr__(self):
        return f"FieldCtx(p={self.p}, m={self.m}, n={self.n})"

    # -- basic arithmetic ---------------------------------------------------

    def add(self, a, b):
        if self.m == 1:
            p = self.p
            return tuple((x + y) % p for x, y in zip(a, b))
        K = self.Kq
        return tuple(K.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        if self.m == 1:
            p = self.p
            return tuple((x - y) % p for x, y in zip(a, b))
        K = self.Kq
        return tuple(K.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        if self.m == 1:
            p = self.p
            return tuple(-x % p for x in a)
        K = self.Kq
        return tuple(K.neg(x) for x in a)

    def scalar_mul(self, c, a):
        """Multiply by a scalar from F_q."""
        if self.m == 1:
            p = self.p
            return tuple(c * x % p for x in a)
        K = self.Kq
        return tuple(K.mul(c, x) for x in a)

    def mul(self, a, b):
        n = self.n
        if n == 1:
            return (self.Kq.mul(a[0], b[0]),)
        if self.m == 1:
            p = self.p
            t = [0] * (2 * n - 1)
            for i, ai in enumerate(a):
                if ai:
                    for j, bj in enumerate(b):
                        if bj:
                            t[i + j] += ai * bj
            low = self._ext_low
            for i in range(2 * n - 2, n - 1, -1):
                c = t[i] % p
                if c:
                    base = i - n
                    for j, e in enumerate(low):
                        if e:
                            t[base + j] -= c * e
            return tuple(v % p for v in t[:n])
        K = self.Kq
        t = [K.zero] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai != K.zero:
                for j, bj in enumerate(b):
                    if bj != K.zero:
                        t[i + j] = K.add(t[i + j], K.mul(ai, bj))
        low = self._ext_low
        for i in range(2 * n - 2, n - 1, -1):
            c = t[i]
            if c != K.zero:
                base = i - n
                for j, e in enumerate(low):
                    if e != K.zero:
                        t[base + j] = K.sub(t[base + j], K.mul(c, e))
        return tuple(t[:n])

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    # -- element <-> integer packing -----------------------------------------

    def elem_to_int(self, a) -> int:
        out = 0
        K = self.Kq
        for c in reversed(a):
            out = out * self.q + K.to_int(c)
        return out

    def elem_from_int(self, i: int):
        K = self.Kq
        out = []
        for _ in range(self.n):
            out.append(K.from_int(i % self.q))
            i //= self.q
        return tuple(out)

    def elements(self):
        """All q^n elements in packed-integer order."""
        return (self.elem_from_int(i) for i in range(self.q**self.n))

    def random_elem(self, rng: random.Random):
        return self.elem_from_int(rng.randrange(self.q**self.n))

    # -- Frobenius, trace, orders ---------------------------------------------

    def _frobenius_rows(self):
        if self._frob_rows is None:
            K = self.Kq
            mono = fqpoly.monomial(K, 1)
            xq = fqpoly.pow_mod(K, mono, self.q, self.ext_poly)
            row = self.one
            rows = []
            w = tuple(xq) + (K.zero,) * (self.n - len(xq))
            for i in range(self.n):
                rows.append(row)
                row = self.mul(row, w)
            self._frob_rows = rows
        return self._frob_rows

    def frobenius(self, a):
        """The q-power map a -> a^q (F_q-linear)."""
        rows = self._frobenius_rows()
        if self.m == 1:
            p = self.p
            acc = [0] * self.n
            for ai, row in zip(a, rows):
                if ai:
                    for j, rj in enumerate(row):
                        if rj:
                            acc[j] += ai * rj
            return tuple(v % p for v in acc)
        K = self.Kq
        acc = [K.zero] * self.n
        for ai, row in zip(a, rows):
            if ai != K.zero:
                for j, rj in enumerate(row):
                    if rj != K.zero:
                        acc[j] = K.add(acc[j], K.mul(ai, rj))
        return tuple(acc)

    def frobenius_orbit(self, a):
        """[a, a^q, ..., a^(q^(n-1))]."""
        out = [a]
        for _ in range(self.n - 1):
            out.append(self.frobenius(out[-1]))
        return out

    def trace_to_base(self, a) -> int:
        """Trace down to F_q (returned as an F_q encoding)."""
        if self._trace_coeffs is None:
            coeffs = []
            for i in range(self.n):
                e = self.elem_from_int(0)
                e = tuple(self.Kq.one if j == i else self.Kq.zero for j in range(self.n))
                t = self.zero
                for b in self.frobenius_orbit(e):
                    t = self.add(t, b)
                if any(c != self.Kq.zero for c in t[1:]):
                    raise ArithmeticError("trace landed outside the base field")
                coeffs.append(t[0])
            self._trace_coeffs = tuple(coeffs)
        K = self.Kq
        acc = K.zero
        for ai, ti in zip(a, self._trace_coeffs):
            acc = K.add(acc, K.mul(ai, ti))
        return acc

    def trace_to_prime(self, a) -> int:
        """Absolute trace down to F_p, as an int in [0, p)."""
        t = self.trace_to_base(a)
        if self.m == 1:
            return t
        return self.Kq.trace_to_prime(t)

    def mult_order(self, a) -> int:
        """Multiplicative order, by stripping the prime factors of q^n - 1."""
        if a == self.zero:
            raise ValueError("zero has no multiplicative order")
        if not self.group_order_fact.is_complete:
            raise ValueError("group order factorization is incomplete")
        o = self.group_order
        for s, e in self.group_order_fact.factors:
            for _ in range(e):
                if o % s == 0 and self.pow(a, o // s) == self.one:
                    o //= s
                else:
                    break
        return o

    def dlog(self, a, cap: int = DLOG_CAP) -> int:
        """Discrete log base the context generator (baby-step giant-step)."""
        if a == self.zero:
            raise ValueError("zero has no discrete log")
        Q = self.group_order
        if Q + 1 > cap:
            raise ValueError(f"field size exceeds the dlog threshold {cap}")
        if self._dlog_baby is None:
            steps = isqrt(Q) + 1
            baby = {}
            cur = self.one
            for j in range(steps):
                baby.setdefault(cur, j)
                cur = self.mul(cur, self.generator)
            self._dlog_baby = (steps, baby, self.pow(self.inv_elem(self.generator), steps))
        steps, baby, giant = self._dlog_baby
        cur = a
        for i in range(steps + 1):
            j = baby.get(cur)
            if j is not None:
                return (i * steps + j) % Q
            cur = self.mul(cur, giant)
        raise ArithmeticError("dlog not found; generator is inconsistent")

    def inv_elem(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.group_order - 1)

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> str:
        """Canonical JSON for reproducibility manifests."""
        doc = {
            "schema": 1,
            "p": self.p,
            "m": self.m,
            "n": self.n,
            "base_poly": list(self.base_poly),
            "ext_poly": list(self.ext_poly),
            "generator": list(self.generator) if self.generator else None,
            "group_order_factors": [[p, e] for p, e in self.group_order_fact.factors],
            "group_order_cofactor": self.group_order_fact.cofactor,
            "seed": self.seed,
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "FieldCtx":
        doc = json.loads(text)
        fact = Factorization(
            value=doc["p"] ** (doc["m"] * doc["n"]) - 1,
            factors=tuple((p, e) for p, e in doc["group_order_factors"]),
            cofactor=doc["group_order_cofactor"],
        )
        return cls(
            doc["p"], doc["m"], doc["n"],
            tuple(doc["base_poly"]), tuple(doc["ext_poly"]),
            tuple(doc["generator"]) if doc["generator"] else None,
            fact, doc.get("seed", 0),
        )


class ExtField(BaseField):
    """F_{q^n} wrapped as a coefficient field for polynomial code."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.order = ctx.q**ctx.n
        self.char = ctx.p
        self.zero = ctx.zero
        self.one = ctx.one

    def add(self, a, b):
        return self.ctx.add(a, b)

    def sub(self, a, b):
        return self.ctx.sub(a, b)

    def neg(self, a):
        return self.ctx.neg(a)

    def mul(self, a, b):
        return self.ctx.mul(a, b)

    def inv(self, a):
        return self.ctx.inv_elem(a)

    def to_int(self, a) -> int:
        return self.ctx.elem_to_int(a)

    def from_int(self, i: int):
        return self.ctx.elem_from_int(i)

    def generator(self):
        return self.ctx.generator

    def coeff_str(self, a) -> str:
        """Render an element so the expression parser reads it back.

        Prime-subfield constants print as integers; anything else prints
        as a power of the generator symbol 'a' (discrete log), which is
        the parser's meaning of 'a'.
        """
        if all(c == self.ctx.Kq.zero for c in a[1:]) and self.ctx.m == 1:
            return str(a[0])
        if a == self.ctx.generator:
            return "a"
        k = self.ctx.dlog(a)
        return f"a^{k}"

    def __repr__(self):
        return f"GF({self.ctx.q}^{self.ctx.n})"


# ---------------------------------------------------------------------------
# construction

def _seeded_monic_search(K, degree: int, seed: int):
    """First irreducible among monic polynomials enumerated lexicographically
    from a seed-derived starting code (wrapping around)."""
    q = K.order
    total = q**degree
    start = seed % total
    for off in range(total):
        code = (start + off) % total
        coeffs = []
        c = code
        for _ in range(degree):
            coeffs.append(K.from_int(c % q))
            c //= q
        cand = tuple(coeffs) + (K.one,)
        if fqpoly.is_irreducible(K, cand):
            return cand
    raise ArithmeticError("no irreducible polynomial found")  # unreachable


def make_ctx(p: int, m: int, n: int, seed: int = 0, budget: int = 10_000_000,
             require_generator: bool = True) -> FieldCtx:
    """Build the tower deterministically from (p, m, n, seed).

    Irreducible polynomials come from a seeded lexicographic search;
    the generator from seeded random candidates certified against the
    prime factors of q^n - 1. With require_generator=False an incomplete
    factorization is tolerated and the generator is left unset.
    """
    if not is_probable_prime(p):
        raise ValueError(f"{p} is not prime")
    if m < 1 or n < 1:
        raise ValueError("extension degrees must be >= 1")
    base_poly = (0, 1) if m == 1 else _seeded_monic_search(GFp(p), m, seed)
    Kq = GFp(p) if m == 1 else GFqTable(p, m, base_poly)
    ext_poly = _seeded_monic_search(Kq, n, seed)
    fact = factor_prime_power_minus_one(p**m, n, budget)
    generator = None
    if require_generator:
        if not fact.is_complete:
            raise ArithmeticError(
                f"factoring budget exhausted on q^n-1 (cofactor {fact.cofactor})"
            )
        ctx = FieldCtx(p, m, n, base_poly, ext_poly, None, fact, seed)
        rng = random.Random(seed)
        Q = ctx.group_order
        primes = [s for s, _ in fact.factors]
        while True:
            cand = ctx.random_elem(rng)
            if cand == ctx.zero:
                continue
            if all(ctx.pow(cand, Q // s) != ctx.one for s in primes):
                generator = cand
                break
    return FieldCtx(p, m, n, base_poly, ext_poly, generator, fact, seed)
