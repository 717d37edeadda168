"""Dense polynomial arithmetic over finite fields.

Polynomials are coefficient tuples in ascending degree with no trailing
zeros; the zero polynomial is the empty tuple. All functions take the
coefficient field as an explicit first argument ``K`` -- any object with
``order``, ``char``, ``zero``, ``one``, ``add``, ``sub``, ``neg``,
``mul``, ``inv`` and ``to_int`` (a total order on elements). This keeps
the same code working over F_q and over F_{q^n}.
"""

import random
from functools import lru_cache
from math import gcd as int_gcd

from .intarith import _divisors_int, _small_factor_exps

Poly = tuple


def norm(K, coeffs) -> Poly:
    """Trim trailing zeros."""
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == K.zero:
        coeffs.pop()
    return tuple(coeffs)


def deg(f: Poly) -> int:
    """Degree; -1 for the zero polynomial."""
    return len(f) - 1


def is_zero(f: Poly) -> bool:
    return not f


def constant(K, c) -> Poly:
    return () if c == K.zero else (c,)


def monomial(K, d: int, c=None) -> Poly:
    c = K.one if c is None else c
    return norm(K, (K.zero,) * d + (c,))


def x_pow_minus_one(K, n: int) -> Poly:
    return (K.neg(K.one),) + (K.zero,) * (n - 1) + (K.one,)


def add(K, f: Poly, g: Poly) -> Poly:
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = K.add(out[i], c)
    return norm(K, out)


def sub(K, f: Poly, g: Poly) -> Poly:
    out = list(f) + [K.zero] * (len(g) - len(f))
    for i, c in enumerate(g):
        out[i] = K.sub(out[i], c)
    return norm(K, out)


def scale(K, f: Poly, c) -> Poly:
    if c == K.zero:
        return ()
    return norm(K, tuple(K.mul(a, c) for a in f))


def mul(K, f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return ()
    out = [K.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == K.zero:
            continue
        for j, b in enumerate(g):
            if b != K.zero:
                out[i + j] = K.add(out[i + j], K.mul(a, b))
    return norm(K, out)


def divmod_poly(K, f: Poly, g: Poly) -> "tuple[Poly, Poly]":
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    if len(f) < len(g):
        return (), f
    rem = list(f)
    lead_inv = K.inv(g[-1])
    dq = len(f) - len(g)
    quo = [K.zero] * (dq + 1)
    for i in range(dq, -1, -1):
        c = rem[i + len(g) - 1]
        if c == K.zero:
            continue
        c = K.mul(c, lead_inv)
        quo[i] = c
        for j, b in enumerate(g):
            rem[i + j] = K.sub(rem[i + j], K.mul(c, b))
    return norm(K, quo), norm(K, rem)


def mod(K, f: Poly, g: Poly) -> Poly:
    return divmod_poly(K, f, g)[1]


def divexact(K, f: Poly, g: Poly) -> Poly:
    q, r = divmod_poly(K, f, g)
    if r:
        raise ArithmeticError("division is not exact")
    return q


def monic(K, f: Poly) -> Poly:
    if not f or f[-1] == K.one:
        return f
    return scale(K, f, K.inv(f[-1]))


def poly_gcd(K, f: Poly, g: Poly) -> Poly:
    """Monic gcd; gcd(0, f) is monic(f)."""
    while g:
        f, g = g, mod(K, f, g)
    return monic(K, f)


def gcd_degree(K, f: Poly, g: Poly) -> int:
    """Degree of gcd(f, g) without any field inversions (cross-multiplied Euclid)."""
    while g:
        if len(f) < len(g):
            f, g = g, f
            continue
        # rem = lc(g)*f - lc(f)*x^(df-dg)*g, degree strictly drops below deg f
        lf, lg = f[-1], g[-1]
        shift = len(f) - len(g)
        out = [K.mul(a, lg) for a in f]
        for j, b in enumerate(g):
            idx = j + shift
            out[idx] = K.sub(out[idx], K.mul(b, lf))
        f, g = g, norm(K, out)
    return deg(f)


def pow_mod(K, f: Poly, e: int, m: Poly) -> Poly:
    result = (K.one,)
    f = mod(K, f, m)
    while e:
        if e & 1:
            result = mod(K, mul(K, result, f), m)
        f = mod(K, mul(K, f, f), m)
        e >>= 1
    return result


def eval_poly(K, f: Poly, x):
    acc = K.zero
    for c in reversed(f):
        acc = K.add(K.mul(acc, x), c)
    return acc


def derivative(K, f: Poly) -> Poly:
    p = K.char
    out = []
    for i in range(1, len(f)):
        k = i % p
        c = f[i]
        acc = K.zero
        for _ in range(k):
            acc = K.add(acc, c)
        out.append(acc)
    return norm(K, out)


def sort_key(K, f: Poly):
    """Canonical order: degree, then coefficient encodings from constant up."""
    return (deg(f), tuple(K.to_int(c) for c in f))


def format_poly(K, f: Poly, var: str = "x") -> str:
    """Render as `c_k*x^k + ... + c_0` with integer-encoded coefficients."""
    if not f:
        return "0"
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if c == K.zero:
            continue
        cs = K.coeff_str(c) if hasattr(K, "coeff_str") else str(K.to_int(c))
        if i == 0:
            terms.append(cs)
        else:
            xs = var if i == 1 else f"{var}^{i}"
            terms.append(xs if cs == "1" else f"{cs}*{xs}")
    return " + ".join(terms)


# ---------------------------------------------------------------------------
# irreducibility and generic factoring

def _frobenius_chain(K, m: Poly, steps: int) -> "list[Poly]":
    """[x^(q^1), ..., x^(q^steps)] all reduced mod m."""
    q = K.order
    out = []
    cur = monomial(K, 1)
    for _ in range(steps):
        cur = pow_mod(K, cur, q, m)
        out.append(cur)
    return out


def is_irreducible(K, f: Poly) -> bool:
    """Standard test: x^(q^n) == x mod f and gcd checks at maximal subfields."""
    n = deg(f)
    if n < 1:
        return False
    if n == 1:
        return True
    q = K.order
    x = monomial(K, 1)
    cur = x
    powers = {}
    for i in range(1, n + 1):
        cur = pow_mod(K, cur, q, f)
        powers[i] = cur
    if sub(K, powers[n], x):
        return False
    for ell in {p for p, _ in _small_factor_exps(n)}:
        if deg(poly_gcd(K, sub(K, powers[n // ell], x), f)) > 0:
            return False
    return True


def _pth_root_poly(K, f: Poly) -> Poly:
    """Inverse of x -> x^p on polynomials with zero derivative: f = g(x^p)."""
    p = K.char
    root_exp = K.order // p
    return norm(K, tuple(K.pow(f[i], root_exp) for i in range(0, len(f), p)))


def squarefree_parts(K, f: Poly) -> "list[tuple[Poly, int]]":
    """Decompose monic f into pairwise-coprime squarefree parts with multiplicities."""
    f = monic(K, f)
    out: dict[int, Poly] = {}

    def accumulate(m, g):
        if deg(g) > 0:
            out[m] = mul(K, out[m], g) if m in out else g

    def recurse(f, outer):
        df = derivative(K, f)
        if not df:
            recurse(_pth_root_poly(K, f), outer * K.char)
            return
        c = poly_gcd(K, f, df)
        w = divexact(K, f, c)
        i = 1
        while deg(w) > 0:
            y = poly_gcd(K, w, c)
            z = divexact(K, w, y)
            accumulate(i * outer, z)
            i += 1
            w = y
            c = divexact(K, c, y)
        if deg(c) > 0:
            recurse(_pth_root_poly(K, c), outer * K.char)

    recurse(f, 1)
    return [(g, m) for m, g in sorted(out.items())]


def _split_equal_degree(K, f: Poly, d: int, rng: random.Random) -> "list[Poly]":
    """Split a monic product of distinct degree-d irreducibles into its factors."""
    if deg(f) == d:
        return [f]
    q = K.order
    while True:
        u = norm(K, tuple(K.from_int(rng.randrange(q)) for _ in range(deg(f))))
        if deg(u) < 1:
            continue
        if K.char == 2:
            # trace map splitting in characteristic 2
            bits = 0
            qq = q**d
            while qq > 1:
                qq >>= 1
                bits += 1
            acc = mod(K, u, f)
            term = acc
            for _ in range(bits - 1):
                term = pow_mod(K, term, 2, f)
                acc = add(K, acc, term)
            g = poly_gcd(K, acc, f)
        else:
            h = pow_mod(K, u, (q**d - 1) // 2, f)
            g = poly_gcd(K, sub(K, h, (K.one,)), f)
        if 0 < deg(g) < deg(f):
            return _split_equal_degree(K, g, d, rng) + _split_equal_degree(K, divexact(K, f, g), d, rng)


def distinct_degree_parts(K, f: Poly) -> "list[tuple[Poly, int]]":
    """Partition squarefree monic f into (product of degree-d factors, d)."""
    q = K.order
    out = []
    x = monomial(K, 1)
    cur = x
    rest = f
    d = 0
    while deg(rest) > 0:
        d += 1
        if 2 * d > deg(rest):
            out.append((rest, deg(rest)))
            break
        cur = pow_mod(K, cur, q, rest)
        g = poly_gcd(K, sub(K, cur, x), rest)
        if deg(g) > 0:
            out.append((g, d))
            rest = divexact(K, rest, g)
            cur = mod(K, cur, rest)
    return out


def factor_poly(K, f: Poly, seed: int = 0) -> "list[tuple[Poly, int]]":
    """Full factorization of f, canonical order; deterministic for fixed seed."""
    if deg(f) < 1:
        raise ValueError("need degree >= 1")
    rng = random.Random(seed)
    found: dict[Poly, int] = {}
    for part, mult in squarefree_parts(K, f):
        for block, d in distinct_degree_parts(K, part):
            for g in _split_equal_degree(K, block, d, rng):
                found[g] = found.get(g, 0) + mult
    return sorted(found.items(), key=lambda it: sort_key(K, it[0]))


def roots(K, f: Poly, seed: int = 0) -> "list":
    """Roots of f in K (via the linear factors of its factorization)."""
    if deg(f) < 1:
        return []
    out = []
    for g, _ in factor_poly(K, f, seed):
        if deg(g) == 1:
            out.append(K.mul(K.neg(g[0]), K.inv(g[1])))
    return sorted(out, key=K.to_int)


# ---------------------------------------------------------------------------
# x^n - 1

@lru_cache(maxsize=8192)
def unity_factor_degrees(q: int, char_p: int, n: int) -> "tuple[tuple[int, ...], int]":
    """Degrees of the distinct irreducible factors of x^n - 1 over F_q.

    Returns (sorted degree tuple, common multiplicity p^a) where
    n = p^a * n0 with p the characteristic and gcd(p, n0) = 1. Computed
    from the orbits of multiplication by q on Z/n0 -- no polynomial work.
    """
    mult = 1
    n0 = n
    while n0 % char_p == 0:
        n0 //= char_p
        mult *= char_p
    degrees = []
    seen = bytearray(n0)
    for start in range(n0):
        if seen[start]:
            continue
        size = 0
        j = start
        while not seen[j]:
            seen[j] = 1
            size += 1
            j = j * q % n0
        degrees.append(size)
    return tuple(sorted(degrees)), mult


def _order_mod(q: int, e: int) -> int:
    if e == 1:
        return 1
    q %= e
    if int_gcd(q, e) != 1:
        raise ValueError("q must be a unit mod e")
    d = 1
    cur = q % e
    while cur != 1:
        cur = cur * q % e
        d += 1
    return d


def _subst_pow(K, f: Poly, t: int, e: int) -> Poly:
    """f(x^t) reduced mod x^e - 1 (exponent permutation)."""
    out = [K.zero] * e
    for k, c in enumerate(f):
        if c != K.zero:
            idx = k * t % e
            out[idx] = K.add(out[idx], c)
    return norm(K, out)


def _split_unity_class(K, Q_e: Poly, e: int, d_e: int, c_e: int, rng: random.Random) -> "list[Poly]":
    """All irreducible factors of the order-e part of x^n - 1."""
    if c_e == 1:
        return [Q_e]
    q = K.order
    if d_e == 1:
        # roots are the primitive e-th roots of unity in K itself
        g = K.generator()
        w = K.pow(g, (q - 1) // e)
        return [
            (K.neg(K.pow(w, s)), K.one)
            for s in range(1, e + 1)
            if int_gcd(s, e) == 1
        ]
    first = _find_one_unity_factor(K, Q_e, e, d_e, rng)
    factors = {first}
    # orbit of multiplication by q on units mod e; one substitution per coset
    subgroup = set()
    cur = 1
    while True:
        cur = cur * q % e
        if cur in subgroup or cur == 1:
            subgroup.add(1)
            break
        subgroup.add(cur)
    done_cosets = set()
    for s in range(1, e):
        if len(factors) == c_e:
            break
        if int_gcd(s, e) != 1:
            continue
        coset = frozenset(s * u % e for u in subgroup)
        if coset in done_cosets:
            continue
        done_cosets.add(coset)
        t = pow(s, -1, e)
        g = poly_gcd(K, Q_e, _subst_pow(K, first, t, e))
        if deg(g) == d_e:
            factors.add(g)
    return sorted(factors, key=lambda f: sort_key(K, f))


def _cyclic_mul(K, f: Poly, g: Poly, e: int) -> Poly:
    """f * g mod x^e - 1 (index-wrapped convolution)."""
    out = [K.zero] * e
    for i, a in enumerate(f):
        if a != K.zero:
            for j, b in enumerate(g):
                if b != K.zero:
                    idx = i + j
                    if idx >= e:
                        idx -= e
                    out[idx] = K.add(out[idx], K.mul(a, b))
    return norm(K, out)


def _find_one_unity_factor(K, f: Poly, e: int, d: int, rng: random.Random) -> Poly:
    """One irreducible factor of a product of degree-d factors of x^e - 1.

    Exploits x^(q^i) = x^(q^i mod e) mod f: the norm (or, in
    characteristic 2, trace) of a random element down to F_q costs d
    substitutions and cyclic products instead of a q^d-sized power.
    """
    q = K.order
    exps = []
    cur = 1
    for _ in range(d):
        exps.append(cur)
        cur = cur * q % e
    while deg(f) > d:
        u = norm(K, tuple(K.from_int(rng.randrange(q)) for _ in range(deg(f))))
        if deg(u) < 1:
            continue
        if K.char == 2:
            # absolute trace: sum of u^(2^i) over all i < log2(q^d)
            k = (q.bit_length() - 1)
            acc = [K.zero] * e
            for i in range(k * d):
                shift = pow(2, i, e)
                ci = 2 ** (i % k) if k > 1 else 1
                for idx, c in enumerate(u):
                    if c != K.zero:
                        cc = K.pow(c, ci) if ci > 1 else c
                        pos = idx * shift % e
                        acc[pos] = K.add(acc[pos], cc)
            w = mod(K, norm(K, acc), f)
            g = poly_gcd(K, w, f)
        else:
            nrm = u
            for i in exps[1:]:
                nrm = _cyclic_mul(K, nrm, _subst_pow(K, u, i, e), e)
            nrm = mod(K, nrm, f)
            w = pow_mod(K, nrm, (q - 1) // 2, f)
            g = poly_gcd(K, sub(K, w, (K.one,)), f)
        if 0 < deg(g) < deg(f):
            f = g if deg(g) <= deg(f) - deg(g) else divexact(K, f, g)
    return f


def factor_unity(K, n: int, seed: int = 0) -> "list[tuple[Poly, int]]":
    """Factor x^n - 1 over K into irreducibles, canonical order.

    Writes n = p^a * n0 with p the characteristic; the distinct factors are
    those of x^n0 - 1 (grouped by the orbits of multiplication by q on
    Z/n0), each with multiplicity p^a.
    """
    p = K.char
    mult = 1
    n0 = n
    while n0 % p == 0:
        n0 //= p
        mult *= p
    rng = random.Random(seed)
    q = K.order
    # peel x^n0 - 1 into per-order parts Q_e, e | n0
    parts: dict[int, Poly] = {}
    for e in _divisors_int(n0):
        f_e = x_pow_minus_one(K, e)
        for e2 in _divisors_int(e):
            if e2 < e:
                f_e = divexact(K, f_e, parts[e2])
        parts[e] = f_e
    factors: list[Poly] = []
    for e in _divisors_int(n0):
        d_e = _order_mod(q, e)
        c_e = deg(parts[e]) // d_e
        factors.extend(_split_unity_class(K, parts[e], e, d_e, c_e, rng))
    factors.sort(key=lambda f: sort_key(K, f))
    return [(f, mult) for f in factors]


# ---------------------------------------------------------------------------
# polynomial arithmetic functions

def poly_phi(K, factored: "list[tuple[Poly, int]]") -> int:
    """Order of the unit group of K[x]/(f), from f's factorization."""
    q = K.order
    out = 1
    for g, e in factored:
        d = deg(g)
        out *= q ** (e * d) - q ** ((e - 1) * d)
    return out


def poly_mobius(K, factored: "list[tuple[Poly, int]]") -> int:
    if any(e > 1 for _, e in factored):
        return 0
    return -1 if len(factored) % 2 else 1


def poly_W(factored: "list[tuple[Poly, int]]") -> int:
    """Number of monic squarefree divisors."""
    return 1 << len(factored)


def divisors_poly(K, factored: "list[tuple[Poly, int]]"):
    """All monic divisors, in graded (degree, coefficient) order."""
    divs = [(K.one,)]
    for g, e in factored:
        powers = [(K.one,)]
        for _ in range(e):
            powers.append(mul(K, powers[-1], g))
        divs = [mul(K, d, pw) for d in divs for pw in powers]
    return sorted(divs, key=lambda f: sort_key(K, f))
