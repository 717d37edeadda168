"""Explicit characters at desk scale.

Additive characters are parameterized by a shift y (value e^(2 pi i
Tr(y a)/p)), multiplicative ones by an exponent t on the context
generator. Everything here exists to verify identities and bounds
numerically: the production criteria never sum characters.
"""

import cmath
import math
from dataclasses import dataclass
from math import gcd

from . import fqpoly
from .elems import _order_tables, additive_action, is_g_free, xn1_factors
from .ffield import ExtField, FieldCtx
from .intarith import _divisors_int, mobius_int, phi_int
from .ratfun import RatFunc

CHAR_CAP = 4096
TOL = 1e-6


def _check_cap(ctx: FieldCtx, cap: int = CHAR_CAP):
    if ctx.q**ctx.n > cap:
        raise ValueError(f"field size exceeds the character threshold {cap}")


@dataclass(frozen=True)
class AddChar:
    """alpha -> e^(2 pi i Tr(shift * alpha) / p)."""

    shift: tuple


@dataclass(frozen=True)
class MultChar:
    """gamma^j -> e^(2 pi i exponent j / (q^n - 1)); undefined at zero."""

    exponent: int

    def order(self, group_order: int) -> int:
        return group_order // gcd(self.exponent, group_order)


class CharTable:
    """Cached roots of unity, traces and discrete logs for one small field."""

    def __init__(self, ctx: FieldCtx):
        _check_cap(ctx)
        self.ctx = ctx
        self.size = ctx.q**ctx.n
        self.Q = ctx.group_order
        self.unity_p = [cmath.exp(2j * math.pi * k / ctx.p) for k in range(ctx.p)]
        self.unity_Q = [cmath.exp(2j * math.pi * k / self.Q) for k in range(self.Q)]
        self.trace = {a: ctx.trace_to_prime(a) for a in ctx.elements()}
        self.dlog = {}
        cur = ctx.one
        for j in range(self.Q):
            self.dlog[cur] = j
            cur = ctx.mul(cur, ctx.generator)

    def psi(self, y, alpha) -> complex:
        return self.unity_p[self.trace[self.ctx.mul(y, alpha)]]

    def eta(self, t: int, alpha) -> complex:
        return self.unity_Q[t * self.dlog[alpha] % self.Q]


def char_table(ctx: FieldCtx) -> CharTable:
    cached = getattr(ctx, "_char_table", None)
    if cached is None:
        cached = CharTable(ctx)
        ctx._char_table = cached
    return cached


# ---------------------------------------------------------------------------
# the polynomial action on additive characters

def adjoint_action(ctx: FieldCtx, h, y):
    """Shift y' with psi_{y'} = h o psi_y, via the trace-form adjoint.

    The adjoint of the q-power map is its (n-1)-fold iterate, so the
    adjoint of sum a_i x^i acts as sum a_i Frob^(n-i).
    """
    n = ctx.n
    orbit = ctx.frobenius_orbit(y)  # orbit[k] = y^(q^k)
    K = ctx.Kq
    acc = ctx.zero
    for i, c in enumerate(h):
        if c != K.zero:
            acc = ctx.add(acc, ctx.scalar_mul(c, orbit[(n - i) % n]))
    return acc


def char_fq_order(ctx: FieldCtx, chi: AddChar):
    """Minimal monic h | x^n - 1 with h o chi trivial (factor stripping)."""
    _check_cap(ctx, CHAR_CAP * 16)
    y = chi.shift
    K = ctx.Kq
    out = (K.one,)
    for P, e, chain in _order_tables(ctx):
        t = 0
        while t < e and adjoint_action(ctx, chain[e - 1 - t], y) != ctx.zero:
            t += 1
        for _ in range(t):
            out = fqpoly.mul(K, out, P)
    return out


def add_char_order_census(ctx: FieldCtx) -> dict:
    """Map each divisor of x^n - 1 to the number of characters of that order."""
    census: dict = {}
    for y in ctx.elements():
        h = char_fq_order(ctx, AddChar(y))
        census[h] = census.get(h, 0) + 1
    return census


# ---------------------------------------------------------------------------
# indicator sums

def zero_indicator_sum(ctx: FieldCtx, alpha) -> complex:
    """(1/q^n) sum over all additive characters evaluated at alpha."""
    tab = char_table(ctx)
    total = 0j
    for y in ctx.elements():
        total += tab.psi(y, alpha)
    return total / tab.size


def _chars_by_order(ctx: FieldCtx):
    cached = getattr(ctx, "_chars_by_order", None)
    if cached is None:
        cached = {}
        for y in ctx.elements():
            h = char_fq_order(ctx, AddChar(y))
            cached.setdefault(h, []).append(y)
        ctx._chars_by_order = cached
    return cached


def g_free_char_sum(ctx: FieldCtx, alpha, g) -> complex:
    """Weighted character sum reproducing the g-freeness indicator."""
    tab = char_table(ctx)
    K = ctx.Kq
    by_order = _chars_by_order(ctx)
    g_fact = [(P, _mult_in(K, g, P)) for P, _e in xn1_factors(ctx)]
    g_fact = [(P, e) for P, e in g_fact if e]
    theta = fqpoly.poly_phi(K, g_fact) / ctx.q ** fqpoly.deg(g)
    total = 0j
    for h in fqpoly.divisors_poly(K, g_fact):
        h_fact = [(P, _mult_in(K, h, P)) for P, _ in g_fact]
        h_fact = [(P, e) for P, e in h_fact if e]
        mu = fqpoly.poly_mobius(K, h_fact)
        if mu == 0:
            continue
        inner = 0j
        for y in by_order.get(h, []):
            inner += tab.psi(y, alpha)
        total += mu / fqpoly.poly_phi(K, h_fact) * inner
    return theta * total


def _mult_in(K, f, P) -> int:
    e = 0
    while True:
        q, r = fqpoly.divmod_poly(K, f, P)
        if r:
            return e
        f = q
        e += 1


def rr_free_char_sum(ctx: FieldCtx, alpha, R: int, r: int) -> complex:
    """Weighted multiplicative character sum reproducing the (R, r)-free indicator."""
    tab = char_table(ctx)
    Q = ctx.Q if hasattr(ctx, "Q") else ctx.group_order
    if Q % r or (Q // r) % R:
        raise ValueError("need r | q^n-1 and R | (q^n-1)/r")
    if alpha == ctx.zero:
        raise ValueError("the indicator is defined on nonzero elements")
    theta = phi_int(R) / R
    j = tab.dlog[alpha]
    total = 0j
    for d in _divisors_int(R * r):
        dr = d // gcd(d, r)
        mu = mobius_int(dr)
        if mu == 0:
            continue
        # characters of order exactly d: exponents (Q/d)*s with gcd(s, d) = 1
        step = Q // d
        inner = 0j
        for s in range(1, d + 1):
            if gcd(s, d) == 1:
                inner += tab.unity_Q[step * s * j % Q]
        total += mu / phi_int(dr) * inner
    return theta / r * total


def verify_indicator_sums(ctx: FieldCtx, rr_prime_cap: int = 3) -> dict:
    """Max deviation of each character-sum formula from its boolean oracle."""
    from .elems import is_Rr_free

    tab = char_table(ctx)
    K = ctx.Kq
    dev_omega = 0.0
    for g in fqpoly.divisors_poly(K, xn1_factors(ctx)):
        for alpha in ctx.elements():
            val = g_free_char_sum(ctx, alpha, g)
            dev_omega = max(dev_omega, abs(val - is_g_free(ctx, alpha, g)))
    dev_rr = 0.0
    Q = ctx.group_order
    for r in _divisors_int(Q):
        for R in _divisors_int(Q // r):
            if len(_small_distinct(R)) > rr_prime_cap:
                continue
            for alpha in ctx.elements():
                if alpha == ctx.zero:
                    continue
                val = rr_free_char_sum(ctx, alpha, R, r)
                dev_rr = max(dev_rr, abs(val - is_Rr_free(ctx, alpha, R, r)))
    dev_zero = 0.0
    for alpha in ctx.elements():
        val = zero_indicator_sum(ctx, alpha)
        dev_zero = max(dev_zero, abs(val - (alpha == ctx.zero)))
    return {"omega": dev_omega, "rr": dev_rr, "zero": dev_zero}


def _small_distinct(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# orthogonality across the polynomial action

def action_orthogonality_sum(ctx: FieldCtx, f, chi: AddChar, psi: AddChar) -> complex:
    """sum over beta of chi(beta) * psi(f o beta)^(-1)."""
    tab = char_table(ctx)
    p = ctx.p
    total = 0j
    for beta in ctx.elements():
        t1 = tab.trace[ctx.mul(chi.shift, beta)]
        t2 = tab.trace[ctx.mul(psi.shift, additive_action(ctx, f, beta))]
        total += tab.unity_p[(t1 - t2) % p]
    return total


def action_preimage_count(ctx: FieldCtx, f, chi: AddChar) -> int:
    """Number of psi with chi = f o psi."""
    return sum(1 for y in ctx.elements() if adjoint_action(ctx, f, y) == chi.shift)


# ---------------------------------------------------------------------------
# the square-root cancellation bound

@dataclass(frozen=True)
class WeilReport:
    lhs: float
    rhs: float
    screened: bool
    reason: str

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + TOL


def _signed_factors(Kext, F: RatFunc, seed: int):
    """Irreducible factors of a rational function with signed exponents."""
    out = {}
    for part, sign in ((F.num, 1), (F.den, -1)):
        if fqpoly.deg(part) >= 1:
            for g, e in fqpoly.factor_poly(Kext, part, seed=seed):
                out[g] = out.get(g, 0) + sign * e
    return {g: e for g, e in out.items() if e}


def weil_bound_check(ctx: FieldCtx, v: RatFunc, u: "RatFunc | None",
                     eta: MultChar, psi: "AddChar | None", seed: int = 0) -> WeilReport:
    """Compare |sum eta(v(a)) psi(u(a))| with the square-root bound.

    Hypotheses are screened by sufficient conditions; when screening
    fails the report says so instead of asserting anything.
    """
    _check_cap(ctx)
    tab = char_table(ctx)
    Kext = ExtField(ctx)
    Q = ctx.group_order
    ord_eta = eta.order(Q)
    v_factors = _signed_factors(Kext, v, seed)
    if ord_eta == 1:
        return WeilReport(0.0, 0.0, False, "trivial multiplicative character")
    if all(e % ord_eta == 0 for e in v_factors.values()):
        return WeilReport(0.0, 0.0, False, "v is a perfect power of the character order")
    D1 = sum(fqpoly.deg(g) for g in v_factors)
    part_b = u is not None and psi is not None and psi.shift != ctx.zero
    if part_b:
        du_num, du_den = u.degrees
        if du_num <= 0 and du_den <= 0:
            return WeilReport(0.0, 0.0, False, "u is constant (possibly degenerate)")
        if max(du_num, du_den) >= ctx.q ** (ctx.n / 2):
            return WeilReport(0.0, 0.0, False, "u degree too large to screen")
        D2 = max(du_num - du_den, 0)
        D3 = du_den
        u_den_factors = (
            {g for g, _ in fqpoly.factor_poly(Kext, u.den, seed=seed)} if du_den >= 1 else set()
        )
        D4 = sum(fqpoly.deg(g) for g in u_den_factors if g not in v_factors)
        rhs = (D1 + D2 + D3 + D4 - 1) * ctx.q ** (ctx.n / 2)
    else:
        rhs = (D1 - 1) * ctx.q ** (ctx.n / 2)
    total = 0j
    for alpha in ctx.elements():
        num_v = fqpoly.eval_poly(Kext, v.num, alpha)
        den_v = fqpoly.eval_poly(Kext, v.den, alpha)
        if num_v == ctx.zero or den_v == ctx.zero:
            continue
        value_v = ctx.mul(num_v, ctx.inv_elem(den_v))
        term = tab.eta(eta.exponent, value_v)
        if part_b:
            den_u = fqpoly.eval_poly(Kext, u.den, alpha)
            if den_u == ctx.zero:
                continue
            num_u = fqpoly.eval_poly(Kext, u.num, alpha)
            value_u = ctx.mul(num_u, ctx.inv_elem(den_u))
            term *= tab.psi(psi.shift, value_u)
        total += term
    return WeilReport(abs(total), rhs, True, "")
