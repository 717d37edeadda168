"""Classification of field elements.

Multiplicative side: order, r-primitivity, (R, r)-freeness inside the
index-r subgroup (all by exponentiation, no discrete logs). Additive
side: the induced polynomial action, minimal annihilator dividing
x^n - 1, k-normality by two independent routes, g-freeness by two
independent routes.
"""

from dataclasses import dataclass
from math import gcd

from . import fqpoly
from .ffield import ExtField, FieldCtx


def xn1_factors(ctx: FieldCtx):
    """Factorization of x^n - 1 over F_q, cached on the context."""
    cached = getattr(ctx, "_xn1_factors", None)
    if cached is None:
        cached = fqpoly.factor_unity(ctx.Kq, ctx.n, seed=ctx.seed)
        ctx._xn1_factors = cached
    return cached


def _order_tables(ctx: FieldCtx):
    """Per irreducible factor P^e of x^n - 1: cofactors (x^n-1)/P^(e-t).

    The t-th entry annihilates alpha exactly when the P-exponent of the
    minimal annihilator of alpha is <= t.
    """
    cached = getattr(ctx, "_ord_tables", None)
    if cached is None:
        K = ctx.Kq
        full = fqpoly.x_pow_minus_one(K, ctx.n)
        tables = []
        for P, e in xn1_factors(ctx):
            cof = full
            chain = []
            for _ in range(e):
                cof = fqpoly.divexact(K, cof, P)
                chain.append(cof)
            # chain[j] = (x^n-1)/P^(j+1); entry for exponent t is chain[e-1-t]
            tables.append((P, e, chain))
        cached = tables
        ctx._ord_tables = cached
    return cached


def additive_action(ctx: FieldCtx, f, alpha, orbit=None):
    """Apply f = sum a_i x^i as sum a_i alpha^(q^i)."""
    if not f:
        return ctx.zero
    if orbit is None:
        orbit = ctx.frobenius_orbit(alpha)
    n = ctx.n
    if ctx.m == 1:
        p = ctx.p
        acc = [0] * n
        for i, c in enumerate(f):
            if c:
                row = orbit[i % n]
                for j, rj in enumerate(row):
                    if rj:
                        acc[j] += c * rj
        return tuple(v % p for v in acc)
    K = ctx.Kq
    acc = [K.zero] * n
    for i, c in enumerate(f):
        if c != K.zero:
            row = orbit[i % n]
            for j, rj in enumerate(row):
                if rj != K.zero:
                    acc[j] = K.add(acc[j], K.mul(c, rj))
    return tuple(acc)


def fq_order_exponents(ctx: FieldCtx, alpha, orbit=None):
    """Exponent of each irreducible factor of x^n - 1 in the minimal annihilator."""
    if orbit is None:
        orbit = ctx.frobenius_orbit(alpha)
    out = []
    for _P, e, chain in _order_tables(ctx):
        t = 0
        while t < e and additive_action(ctx, chain[e - 1 - t], alpha, orbit) != ctx.zero:
            t += 1
        out.append(t)
    return tuple(out)


def fq_order(ctx: FieldCtx, alpha):
    """Minimal monic h | x^n - 1 annihilating alpha under the action."""
    exps = fq_order_exponents(ctx, alpha)
    K = ctx.Kq
    out = (K.one,)
    for (P, _e, _chain), t in zip(_order_tables(ctx), exps):
        for _ in range(t):
            out = fqpoly.mul(K, out, P)
    return out


def fq_order_degree(ctx: FieldCtx, alpha, orbit=None) -> int:
    exps = fq_order_exponents(ctx, alpha, orbit)
    return sum(t * fqpoly.deg(P) for (P, _e, _c), t in zip(_order_tables(ctx), exps))


def normality_k(ctx: FieldCtx, alpha) -> int:
    """k-normality via deg gcd(alpha x^(n-1) + ... + alpha^(q^(n-1)), x^n - 1)."""
    n = ctx.n
    orbit = ctx.frobenius_orbit(alpha)
    g_alpha = tuple(reversed(orbit))  # coefficient of x^(n-1-i) is alpha^(q^i)
    Kext = ExtField(ctx)
    g_alpha = fqpoly.norm(Kext, g_alpha)
    if not g_alpha:
        return n
    return fqpoly.gcd_degree(Kext, g_alpha, fqpoly.x_pow_minus_one(Kext, n))


@dataclass(frozen=True)
class ElemProfile:
    """Joint multiplicative/additive classification of one element."""

    element: tuple
    mult_order: int  # 0 for the zero element
    fq_order: tuple  # monic divisor of x^n - 1
    k: int           # n - deg(fq_order)

    def verify(self, ctx: FieldCtx) -> None:
        if self.k != ctx.n - fqpoly.deg(self.fq_order):
            raise ValueError("normality degree inconsistent with the annihilator")
        if self.element == ctx.zero:
            if self.mult_order != 0:
                raise ValueError("zero has order 0")
        else:
            if ctx.mult_order(self.element) != self.mult_order:
                raise ValueError("multiplicative order mismatch")
            if self.mult_order and ctx.group_order % self.mult_order:
                raise ValueError("order does not divide the group order")
        if fq_order(ctx, self.element) != self.fq_order:
            raise ValueError("annihilator mismatch")


def profile(ctx: FieldCtx, alpha) -> ElemProfile:
    h = fq_order(ctx, alpha)
    return ElemProfile(
        element=alpha,
        mult_order=0 if alpha == ctx.zero else ctx.mult_order(alpha),
        fq_order=h,
        k=ctx.n - fqpoly.deg(h),
    )


# ---------------------------------------------------------------------------
# freeness

def is_g_free(ctx: FieldCtx, alpha, g) -> bool:
    """Order route: alpha is g-free iff gcd(g, (x^n-1)/Ord(alpha)) = 1."""
    K = ctx.Kq
    cof = fqpoly.divexact(K, fqpoly.x_pow_minus_one(K, ctx.n), fq_order(ctx, alpha))
    return fqpoly.gcd_degree(K, g, cof) == 0


def is_g_free_direct(ctx: FieldCtx, alpha, g) -> bool:
    """Direct route: no irreducible h | g admits a solution of alpha = h o beta."""
    K = ctx.Kq
    full = fqpoly.x_pow_minus_one(K, ctx.n)
    orbit = ctx.frobenius_orbit(alpha)
    for P, _e in xn1_factors(ctx):
        if fqpoly.mod(K, g, P):
            continue
        # alpha in the image of (P o) iff the complementary factor kills alpha
        cof = fqpoly.divexact(K, full, P)
        if additive_action(ctx, cof, alpha, orbit) == ctx.zero:
            return False
    return True


def is_Rr_free(ctx: FieldCtx, alpha, R: int, r: int) -> bool:
    """Membership in the index-r subgroup plus R-freeness inside it."""
    Q = ctx.group_order
    if Q % r or (Q // r) % R:
        raise ValueError("need r | q^n-1 and R | (q^n-1)/r")
    if alpha == ctx.zero:
        return False
    if ctx.pow(alpha, Q // r) != ctx.one:
        return False
    for s in ctx.group_order_fact.primes():
        if R % s == 0 and ctx.pow(alpha, Q // (r * s)) == ctx.one:
            return False
    return True


def is_r_primitive(ctx: FieldCtx, alpha, r: int) -> bool:
    """Multiplicative order exactly (q^n - 1)/r."""
    Q = ctx.group_order
    if Q % r:
        raise ValueError("r must divide q^n - 1")
    if alpha == ctx.zero:
        return False
    return ctx.mult_order(alpha) == Q // r


# ---------------------------------------------------------------------------
# constructions

def construct_k_normal(ctx: FieldCtx, f, beta):
    """Push a normal element down to a (deg f)-normal one via the action."""
    if normality_k(ctx, beta) != 0:
        raise ValueError("beta must be normal")
    K = ctx.Kq
    if fqpoly.mod(K, fqpoly.x_pow_minus_one(K, ctx.n), f):
        raise ValueError("f must divide x^n - 1")
    return additive_action(ctx, f, beta)


def find_normal(ctx: FieldCtx, seed: int = 0):
    """First normal element along a seeded pseudorandom scan."""
    import random

    rng = random.Random(seed)
    while True:
        cand = ctx.random_elem(rng)
        if cand != ctx.zero and fq_order_degree(ctx, cand) == ctx.n:
            return cand
