"""Brute-force ground truth and witness certification.

Scans walk the cyclic group as powers of the context generator: the
exponent j carries the multiplicative class for free (gcd with the group
order), so only candidates surviving that filter pay for Frobenius
orbits and annihilator degrees. The reported witness is always the one
of minimal exponent, regardless of worker count.
"""

import json
from dataclasses import dataclass
from math import gcd

from . import fqpoly
from .elems import ElemProfile, fq_order, fq_order_degree, is_g_free, is_Rr_free, profile
from .ffield import ExtField, FieldCtx
from .ratfun import RatFunc, evaluate, in_upsilon, parse_ratfunc

ENUM_CAP = 100_000_000


def _check_cap(ctx: FieldCtx, cap: int):
    if ctx.q**ctx.n > cap:
        raise ValueError(f"field size {ctx.q}^{ctx.n} exceeds the enumeration cap {cap}")


def count_class(ctx: FieldCtx, r: int, k: int, cap: int = ENUM_CAP) -> int:
    """Number of r-primitive k-normal elements, by full scan."""
    Q = ctx.group_order
    if Q % r:
        raise ValueError("r must divide q^n - 1")
    _check_cap(ctx, cap)
    target_deg = ctx.n - k
    count = 0
    alpha = ctx.one
    for j in range(Q):
        if j:
            alpha = ctx.mul(alpha, ctx.generator)
        if gcd(j, Q) == r and fq_order_degree(ctx, alpha) == target_deg:
            count += 1
    return count


def count_all_classes(ctx: FieldCtx, cap: int = ENUM_CAP) -> dict:
    """Histogram {(r, k): count} over all nonzero elements in one pass."""
    _check_cap(ctx, cap)
    Q = ctx.group_order
    out: dict = {}
    alpha = ctx.one
    for j in range(Q):
        if j:
            alpha = ctx.mul(alpha, ctx.generator)
        key = (gcd(j, Q), ctx.n - fq_order_degree(ctx, alpha))
        out[key] = out.get(key, 0) + 1
    return out


def count_triples(ctx: FieldCtx, F: RatFunc, r1: int, r2: int, R1: int, R2: int,
                  g1, g2, f1, f2, cap: int = 1_000_000) -> int:
    """Triples (alpha, beta1, beta2) with all freeness and image conditions."""
    _check_cap(ctx, cap)
    K = ExtField(ctx)
    Kq = ctx.Kq
    full = fqpoly.x_pow_minus_one(Kq, ctx.n)
    for f in (f1, f2, g1, g2):
        if fqpoly.mod(Kq, full, f):
            raise ValueError("f1, f2, g1, g2 must divide x^n - 1")
    from .elems import additive_action

    def image_counts(g, f):
        counts: dict = {}
        for beta in ctx.elements():
            if is_g_free(ctx, beta, g):
                key = additive_action(ctx, f, beta)
                counts[key] = counts.get(key, 0) + 1
        return counts

    counts1 = image_counts(g1, f1)
    counts2 = image_counts(g2, f2)
    total = 0
    for alpha in ctx.elements():
        if alpha == ctx.zero:
            continue
        if fqpoly.eval_poly(K, F.num, alpha) == ctx.zero or fqpoly.eval_poly(K, F.den, alpha) == ctx.zero:
            continue
        if not is_Rr_free(ctx, alpha, R1, r1):
            continue
        image = evaluate(ctx, F, alpha)
        if image == ctx.zero or not is_Rr_free(ctx, image, R2, r2):
            continue
        c1 = counts1.get(alpha, 0)
        if c1:
            total += c1 * counts2.get(image, 0)
    return total


# ---------------------------------------------------------------------------
# witnesses

@dataclass(frozen=True)
class PairWitness:
    """A certified pair (alpha, F(alpha)) with orders and normality degrees."""

    exponent: int  # alpha = generator^exponent
    alpha_profile: ElemProfile
    image_profile: ElemProfile
    F_text: str
    params: tuple  # (r1, k1, r2, k2)

    def verify(self, ctx: FieldCtx, F: "RatFunc | None" = None) -> None:
        """Re-derive every claimed property from scratch; raise on mismatch."""
        if F is None:
            F = parse_ratfunc(ctx, self.F_text)
        r1, k1, r2, k2 = self.params
        Q = ctx.group_order
        alpha = ctx.pow(ctx.generator, self.exponent)
        if alpha != self.alpha_profile.element:
            raise ValueError("exponent does not reproduce the element")
        self.alpha_profile.verify(ctx)
        self.image_profile.verify(ctx)
        K = ExtField(ctx)
        if fqpoly.eval_poly(K, F.num, alpha) == ctx.zero or fqpoly.eval_poly(K, F.den, alpha) == ctx.zero:
            raise ValueError("alpha lies in the exceptional set")
        if evaluate(ctx, F, alpha) != self.image_profile.element:
            raise ValueError("image mismatch")
        if self.alpha_profile.mult_order != Q // r1 or self.alpha_profile.k != k1:
            raise ValueError("alpha class mismatch")
        if self.image_profile.mult_order != Q // r2 or self.image_profile.k != k2:
            raise ValueError("image class mismatch")
        from .elems import normality_k

        if normality_k(ctx, alpha) != k1 or normality_k(ctx, self.image_profile.element) != k2:
            raise ValueError("independent normality route disagrees")

    def to_json(self, ctx: FieldCtx) -> str:
        doc = {
            "schema": 1,
            "field": json.loads(ctx.to_json()),
            "exponent": self.exponent,
            "alpha": [list(c) if isinstance(c, tuple) else c for c in self.alpha_profile.element],
            "alpha_order": self.alpha_profile.mult_order,
            "alpha_annihilator": [ctx.Kq.to_int(c) for c in self.alpha_profile.fq_order],
            "k1": self.alpha_profile.k,
            "image": [list(c) if isinstance(c, tuple) else c for c in self.image_profile.element],
            "image_order": self.image_profile.mult_order,
            "image_annihilator": [ctx.Kq.to_int(c) for c in self.image_profile.fq_order],
            "k2": self.image_profile.k,
            "F": self.F_text,
            "params": list(self.params),
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _scan_range(ctx: FieldCtx, F: RatFunc, r1: int, k1: int, r2: int, k2: int,
                j_lo: int, j_hi: int) -> "int | None":
    """Smallest qualifying exponent in [j_lo, j_hi), or None."""
    Q = ctx.group_order
    ord2 = Q // r2
    target1 = ctx.n - k1
    target2 = ctx.n - k2
    K = ExtField(ctx)
    gamma = ctx.generator
    jump = [ctx.one]
    for _ in range(128):
        jump.append(ctx.mul(jump[-1], gamma))
    alpha = None
    last_j = None
    start = j_lo + (-j_lo) % r1
    for j in range(start, j_hi, r1):
        if gcd(j, Q) != r1:
            continue
        if last_j is None:
            alpha = ctx.pow(gamma, j)
        else:
            step = j - last_j
            alpha = ctx.mul(alpha, jump[step]) if step < len(jump) else ctx.mul(alpha, ctx.pow(gamma, step))
        last_j = j
        if fq_order_degree(ctx, alpha) != target1:
            continue
        den = fqpoly.eval_poly(K, F.den, alpha)
        if den == ctx.zero:
            continue
        num = fqpoly.eval_poly(K, F.num, alpha)
        if num == ctx.zero:
            continue
        image = ctx.mul(num, ctx.inv_elem(den)) if den != ctx.one else num
        if not is_Rr_free(ctx, image, ord2, r2):
            continue
        if fq_order_degree(ctx, image) != target2:
            continue
        return j
    return None


_WORKER_STATE: dict = {}


def _init_worker(ctx, num, den, params):
    _WORKER_STATE["ctx"] = ctx
    _WORKER_STATE["F"] = RatFunc(num=num, den=den)
    _WORKER_STATE["params"] = params


def _run_chunk(bounds):
    ctx = _WORKER_STATE["ctx"]
    F = _WORKER_STATE["F"]
    r1, k1, r2, k2 = _WORKER_STATE["params"]
    return _scan_range(ctx, F, r1, k1, r2, k2, bounds[0], bounds[1])


def find_witness(ctx: FieldCtx, F: RatFunc, r1: int, k1: int, r2: int, k2: int,
                 check_upsilon: bool = True, m1: int = 2, m2: int = 1,
                 workers: int = 1, cap: int = ENUM_CAP,
                 chunk: int = 1 << 16) -> "PairWitness | None":
    """First (minimal-exponent) certified witness pair, or None.

    The scan walks alpha = generator^j with j ascending; r1-primitivity
    is a gcd condition on j, so non-candidates cost nothing beyond the
    group walk. With workers > 1 the exponent range is sharded in
    ascending chunks and the earliest hit wins deterministically.
    """
    _check_cap(ctx, cap)
    Q = ctx.group_order
    if Q % r1 or Q % r2:
        return None  # no elements of the requested orders exist
    if check_upsilon:
        ok, _wit = in_upsilon(ctx, F, m1, m2)
        if not ok:
            raise ValueError("F fails the admissibility conditions (pass check_upsilon=False to override)")
    hit = None
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        chunks = [(lo, min(lo + chunk, Q)) for lo in range(0, Q, chunk)]
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=_init_worker,
            initargs=(ctx, F.num, F.den, (r1, k1, r2, k2)),
        ) as pool:
            for j in pool.map(_run_chunk, chunks):
                if j is not None:
                    hit = j
                    break
    else:
        hit = _scan_range(ctx, F, r1, k1, r2, k2, 0, Q)
    if hit is None:
        return None
    alpha = ctx.pow(ctx.generator, hit)
    witness = PairWitness(
        exponent=hit,
        alpha_profile=profile(ctx, alpha),
        image_profile=profile(ctx, evaluate(ctx, F, alpha)),
        F_text=getattr(F, "_text", ""),
        params=(r1, k1, r2, k2),
    )
    witness.verify(ctx, F)
    return witness


# ---------------------------------------------------------------------------
# the fixed test family

def default_test_family(ctx: FieldCtx, m1: int = 2, m2: int = 1):
    """The repository's fixed admissible test functions for this field.

    x(x+1); (x^2+1)/(x+c) for the first constant c making it admissible;
    (x^2+a*x+1)/(x+1) with a the field generator. Each is validated; any
    that fails admissibility in a particular field is dropped.
    """
    texts = ["x*(x+1)"]
    for c in range(1, ctx.p):
        cand = f"(x^2+1)/(x+{c})"
        F = parse_ratfunc(ctx, cand)
        if in_upsilon(ctx, F, m1, m2)[0]:
            texts.append(cand)
            break
    texts.append("(x^2+a*x+1)/(x+1)")
    family = []
    for text in texts:
        F = parse_ratfunc(ctx, text)
        if in_upsilon(ctx, F, m1, m2)[0]:
            family.append(F)
    return family


def existence_table(field_specs, F_family_texts, params, workers: int = 1,
                    cap: int = ENUM_CAP):
    """Witness search over a grid of fields, against the degree condition.

    field_specs: iterable of (p, m, n). Returns one row per cell with the
    divisibility-condition verdict, per-function witness exponents, and a
    flag when the n >= 8 equivalence is violated.
    """
    from .criteria import condition_qn
    from .ffield import make_ctx

    r1, k1, r2, k2 = params
    rows = []
    for p, m, n in field_specs:
        ctx = make_ctx(p, m, n)
        cond = condition_qn(p**m, n)
        found = {}
        for text in F_family_texts:
            F = parse_ratfunc(ctx, text)
            if not in_upsilon(ctx, F, 2, 1)[0]:
                found[text] = "inadmissible"
                continue
            w = find_witness(ctx, F, r1, k1, r2, k2, workers=workers, cap=cap)
            found[text] = w.exponent if w else None
        witnessed = [v for v in found.values() if v != "inadmissible"]
        all_found = witnessed and all(v is not None for v in witnessed)
        any_found = any(v is not None for v in witnessed)
        violation = n >= 8 and ((cond and not all_found) or (not cond and any_found))
        rows.append({
            "q": p**m,
            "n": n,
            "condition": cond,
            "witnesses": found,
            "violation": bool(violation),
        })
    return rows
