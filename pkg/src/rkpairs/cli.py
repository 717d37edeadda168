"""Command-line surface.

Every subcommand produces a deterministic JSON document with --json
(identical invocation and seed give byte-identical output; wall-clock
timing is therefore never part of the JSON), CSV where tabular, and a
resolved-plan dry run. Exit codes: 0 proven/true/found, 1 not
proven/false/none, 2 indeterminate/borderline, 3 usage errors.
"""

import argparse
import csv
import io
import json
import os
import sys
import time

from . import boundscan, chars, criteria, elems, fqpoly, ratfun, search
from .ffield import ExtField, make_ctx
from .intarith import (
    DEFAULT_BUDGET,
    LogMagnitude,
    factor_prime_power_minus_one,
    is_prime_power,
    prime_powers_upto,
)

EXIT_TRUE, EXIT_FALSE, EXIT_INDET, EXIT_USAGE = 0, 1, 2, 3

SCHEMA = 1


def _emit(args, payload: dict, human_lines) -> None:
    if args.json:
        doc = {"schema": SCHEMA, "command": args.command, "seed": args.seed}
        doc.update(payload)
        print(json.dumps(doc, sort_keys=True, separators=(",", ":")))
    elif getattr(args, "csv", False) and "rows" in payload:
        writer = csv.writer(sys.stdout)
        rows = payload["rows"]
        if rows:
            writer.writerow(rows[0].keys())
            for row in rows:
                writer.writerow(row.values())
    else:
        for line in human_lines:
            print(line)


def _verdict_exit(verdict: str) -> int:
    if verdict in (criteria.PROVEN, criteria.TRUE, "found", "pass"):
        return EXIT_TRUE
    if verdict in (criteria.INDETERMINATE, criteria.BORDERLINE):
        return EXIT_INDET
    return EXIT_FALSE


def _lm(x: LogMagnitude) -> dict:
    return {"log10": x.log10, "sci": x.sci()}


def _ctx_from_args(args):
    pp = is_prime_power(args.q)
    if pp is None:
        raise SystemExit2(f"{args.q} is not a prime power")
    p, m = pp
    return make_ctx(p, m, args.n, seed=args.seed, budget=args.budget)


class SystemExit2(Exception):
    pass


def _dry(args, plan: dict) -> int:
    _emit(args, {"dry_run": True, "plan": plan}, [f"plan: {json.dumps(plan, sort_keys=True)}"])
    return EXIT_TRUE


# ---------------------------------------------------------------------------
# subcommands

def cmd_factor_xn1(args) -> int:
    if args.dry_run:
        return _dry(args, {"q": args.q, "n": args.n})
    from .ffield import field_of_order

    K = field_of_order(args.q, args.seed)
    factors = fqpoly.factor_unity(K, args.n, seed=args.seed)
    rows = [
        {"factor": fqpoly.format_poly(K, g), "degree": fqpoly.deg(g), "multiplicity": e}
        for g, e in factors
    ]
    payload = {"q": args.q, "n": args.n, "rows": rows, "distinct": len(rows),
               "W": fqpoly.poly_W(factors)}
    _emit(args, payload, [f"{r['factor']}  (degree {r['degree']}, multiplicity {r['multiplicity']})" for r in rows])
    return EXIT_TRUE


def cmd_field_info(args) -> int:
    if args.dry_run:
        return _dry(args, {"p": args.p, "m": args.m, "n": args.n, "seed": args.seed})
    ctx = make_ctx(args.p, args.m, args.n, seed=args.seed, budget=args.budget)
    doc = json.loads(ctx.to_json())
    _emit(args, {"field": doc}, [ctx.to_json()])
    return EXIT_TRUE


def cmd_check_theorem(args) -> int:
    if args.dry_run:
        return _dry(args, {"q": args.q, "n": args.n, "t": args.t})
    verdict = criteria.test_theorem(args.q, args.n, args.t)
    _emit(args, {"q": args.q, "n": args.n, "t": args.t, "verdict": verdict},
          [f"({args.q}, {args.n}) with t={args.t}: {verdict}"])
    return _verdict_exit(verdict)


def cmd_special_sieve(args) -> int:
    if args.dry_run:
        return _dry(args, {"q": args.q, "n": args.n, "p0": args.p0})
    out = criteria.special_sieve(args.q, args.n, args.p0)
    payload = {"q": args.q, "n": args.n, "p0": args.p0, "verdict": out.verdict,
               "delta": str(out.delta) if out.delta is not None else None,
               "Delta": str(out.Delta) if out.Delta is not None else None}
    _emit(args, payload, [f"({args.q}, {args.n}) p0={args.p0}: {out.verdict}"])
    return _verdict_exit(out.verdict)


def cmd_total_sieve(args) -> int:
    if args.dry_run:
        return _dry(args, {"q": args.q, "n": args.n, "constant": args.constant, "budget": args.budget})
    out = criteria.total_sieve(args.q, args.n, constant=args.constant, budget=args.budget, seed=args.seed)
    payload = {"q": args.q, "n": args.n, "constant": args.constant, "verdict": out.verdict,
               "delta": str(out.delta) if out.delta is not None else None,
               "Delta": str(out.Delta) if out.Delta is not None else None,
               "witness_split": dict(out.witness_split) if out.witness_split else None,
               "detail": out.detail}
    _emit(args, payload, [f"({args.q}, {args.n}): {out.verdict} {out.detail}"])
    return _verdict_exit(out.verdict)


def cmd_bound_sieve(args) -> int:
    flags = set((args.variant or "standard").split(","))
    known = {"standard", "nine_divides", "strict_m", "nine_not_divides"}
    if not flags <= known:
        raise SystemExit2(f"unknown variant flags {sorted(flags - known)}")
    if args.dry_run:
        return _dry(args, {"qmin": args.qmin, "qmax": args.qmax, "n": args.n,
                           "p0": args.p0, "variant": sorted(flags)})
    q_new, B, audit = boundscan.bound_sieve(
        args.qmin, args.qmax, args.n, args.p0,
        nine_divides="nine_divides" in flags,
        strict_m="strict_m" in flags,
        nine_not_divides="nine_not_divides" in flags,
    )
    payload = {"qmin": args.qmin, "qmax": args.qmax, "n": args.n, "p0": args.p0,
               "q_new": _lm(q_new) if q_new else None, "B": B, "audit": {k: list(v) if isinstance(v, tuple) else v for k, v in audit.items()}}
    _emit(args, payload, [f"q_new = {q_new.sci() if q_new else 'n/a'}  B={B}"])
    return EXIT_TRUE if B and q_new else EXIT_FALSE


def cmd_global_bound(args) -> int:
    if args.dry_run:
        return _dry(args, {"q0": args.q0, "p0": args.p0, "P": args.P})
    step = boundscan.global_bound_iteration(args.q0, args.p0, LogMagnitude.from_sci(args.P))
    payload = {"q0": args.q0, "p0": args.p0, "input": _lm(step.input_P),
               "output": _lm(step.output_P), "worst_m": step.worst_m, "worst_u": step.worst_u}
    _emit(args, payload, [f"new bound {step.output_P.sci()} (worst m={step.worst_m}, u={step.worst_u})"])
    return EXIT_TRUE


def cmd_table1(args) -> int:
    if args.dry_run:
        return _dry(args, {"rows": [list(r) for r in boundscan.STANDARD_WEIL_ROWS]})
    rows = []
    for n, N, m in boundscan.STANDARD_WEIL_ROWS:
        holds, three_pm = boundscan.weil_start_bound(n, N, m)
        rows.append({"n": n, "N": N, "m": m, "three_primorial": three_pm.sci(), "holds": holds})
    _emit(args, {"rows": rows},
          [f"n={r['n']} N={r['N']} m={r['m']} 3P_m={r['three_primorial']} holds={r['holds']}" for r in rows])
    return EXIT_TRUE if all(r["holds"] for r in rows) else EXIT_FALSE


def cmd_table2(args) -> int:
    starts = {
        n: boundscan.weil_start_bound(n, N, m)[1]
        for n, N, m in boundscan.STANDARD_WEIL_ROWS
    }
    if args.dry_run:
        return _dry(args, {"chains": {str(k): list(v) for k, v in boundscan.SIEVE_CHAIN_P0.items()}})
    rows = []
    for n, p0_list in sorted(boundscan.SIEVE_CHAIN_P0.items()):
        for step in boundscan.fixed_n_chain(n, starts[n], p0_list):
            rows.append({"n": n, "P": step.input_P.sci(), "p0": step.p0,
                         "new_bound": step.output_P.sci(), "worst_m": step.worst_m})
    _emit(args, {"rows": rows},
          [f"n={r['n']} P={r['P']} p0={r['p0']} -> {r['new_bound']} (worst m={r['worst_m']})" for r in rows])
    return EXIT_TRUE


def cmd_casen7(args) -> int:
    if args.dry_run:
        return _dry(args, {"census": [1 << 20, 1 << 30], "cascade": "37,19,17,17,17"})
    rep = boundscan.degree7_chain()
    payload = {
        "census_count": rep["census_count"],
        "census_inverse_sum": rep["census_inverse_sum"],
        "weight_constant": _lm(rep["weight_constant"]),
        "stage1_bound": _lm(rep["stage1_bound"]),
        "class_prime_count": rep["class_prime_count"],
        "stage2_bound": _lm(rep["stage2_bound"]),
        "cascade": [
            {"qmax": st["qmax"], "p0": st["p0"], "q_new": _lm(st["q_new"]), "B": st["B"]}
            for st in rep["cascade"]
        ],
        "final_bound": _lm(rep["final_bound"]),
    }
    lines = [
        f"census of ({2}^20, 2^30): {rep['census_count']} primes",
        f"stage 1 bound: {rep['stage1_bound'].sci()}",
        f"stage 2 bound: {rep['stage2_bound'].sci()}",
    ] + [f"cascade p0={st['p0']}: {st['q_new'].sci()}" for st in rep["cascade"]] + [
        f"final: {rep['final_bound'].sci()}"
    ]
    _emit(args, payload, lines)
    return EXIT_TRUE


def cmd_sweep(args) -> int:
    ns = _parse_range(args.n_range)
    stages = []
    for name in args.stages.split(","):
        name = name.strip()
        if name == "test_theorem":
            stages.append(criteria.make_stage("test_theorem", t=args.t))
        elif name == "special_sieve":
            stages.append(criteria.make_stage("special_sieve", p0=args.p0))
        elif name == "total_sieve":
            stages.append(criteria.make_stage("total_sieve", constant=args.constant, budget=args.budget))
        else:
            raise SystemExit2(f"unknown stage {name!r}")
    cells = []
    for n in ns:
        if args.q_bound:
            bound = args.q_bound
        else:
            bound = int(10 ** boundscan.mn_bound(n).log10) + 1
        for q in prime_powers_upto(bound + 1):
            if q < 5:
                continue
            if args.open_bound and q >= bound:
                continue
            if criteria.condition_qn(q, n):
                cells.append((q, n))
    if args.dry_run:
        return _dry(args, {"cells": len(cells), "stages": [s[0] for s in stages],
                           "n_range": ns[:5] + (["..."] if len(ns) > 5 else []),
                           "checkpoint": args.checkpoint})
    report = criteria.sweep(cells, stages, checkpoint_path=args.checkpoint, workers=args.threads)
    payload = report.to_dict()
    payload["survivors"] = payload["survivors"][:1000]
    _emit(args, payload, [
        f"cells: {report.cells}",
        f"cleared: {report.cleared}",
        f"survivors: {len(report.survivors)}",
        f"indeterminate: {len(report.indeterminate)}",
    ])
    return EXIT_TRUE if not report.survivors and not report.indeterminate else EXIT_FALSE


def cmd_search(args) -> int:
    if args.dry_run:
        return _dry(args, {"q": args.q, "n": args.n, "params": [args.r1, args.k1, args.r2, args.k2],
                           "F": args.F, "cap": args.cap})
    ctx = _ctx_from_args(args)
    if args.F:
        family = [ratfun.parse_ratfunc(ctx, args.F)]
    else:
        family = search.default_test_family(ctx)
    t0 = time.perf_counter()
    results = []
    for F in family:
        w = search.find_witness(ctx, F, args.r1, args.k1, args.r2, args.k2,
                                check_upsilon=not args.skip_upsilon,
                                workers=args.threads, cap=args.cap)
        results.append((F, w))
    elapsed = time.perf_counter() - t0
    payload = {
        "field": json.loads(ctx.to_json()),
        "params": [args.r1, args.k1, args.r2, args.k2],
        "results": [
            {"F": getattr(F, "_text", ""), "witness": json.loads(w.to_json(ctx)) if w else None}
            for F, w in results
        ],
    }
    lines = []
    for F, w in results:
        tag = f"j={w.exponent}" if w else "none"
        lines.append(f"F = {getattr(F, '_text', '?')}: {tag}")
    lines.append(f"elapsed {elapsed:.2f}s")
    _emit(args, payload, lines)
    return EXIT_TRUE if all(w is not None for _, w in results) else EXIT_FALSE


def cmd_verify_identities(args) -> int:
    if args.dry_run:
        return _dry(args, {"p": args.p, "m": args.m, "n": args.n})
    ctx = make_ctx(args.p, args.m, args.n, seed=args.seed, budget=args.budget)
    if ctx.q**ctx.n > args.cap:
        raise SystemExit2(f"field size exceeds --cap {args.cap}")
    mismatches = {"normality": 0, "g_free": 0, "order_counts": 0}
    K = ctx.Kq
    factored = elems.xn1_factors(ctx)
    divisors = fqpoly.divisors_poly(K, factored)
    order_census: dict = {}
    for alpha in ctx.elements():
        h = elems.fq_order(ctx, alpha)
        order_census[h] = order_census.get(h, 0) + 1
        if ctx.n - fqpoly.deg(h) != elems.normality_k(ctx, alpha):
            mismatches["normality"] += 1
        for g in divisors:
            if elems.is_g_free(ctx, alpha, g) != elems.is_g_free_direct(ctx, alpha, g):
                mismatches["g_free"] += 1
    for d in divisors:
        fac_d = [(P, e) for P, e in ((P, _mult_of(K, d, P)) for P, _ in factored) if e]
        if order_census.get(d, 0) != fqpoly.poly_phi(K, fac_d):
            mismatches["order_counts"] += 1
    ok = not any(mismatches.values())
    _emit(args, {"field": {"p": args.p, "m": args.m, "n": args.n}, "mismatches": mismatches,
                 "verdict": "pass" if ok else "fail"},
          [f"mismatches: {mismatches}", f"verdict: {'pass' if ok else 'fail'}"])
    return EXIT_TRUE if ok else EXIT_FALSE


def _mult_of(K, f, P):
    e = 0
    while True:
        quo, rem = fqpoly.divmod_poly(K, f, P)
        if rem:
            return e
        f = quo
        e += 1


def cmd_chars_selftest(args) -> int:
    if args.dry_run:
        return _dry(args, {"p": args.p, "m": args.m, "n": args.n})
    ctx = make_ctx(args.p, args.m, args.n, seed=args.seed, budget=args.budget)
    dev = chars.verify_indicator_sums(ctx)
    ok = max(dev.values()) < 1e-6
    _emit(args, {"field": {"p": args.p, "m": args.m, "n": args.n},
                 "max_deviation": dev, "verdict": "pass" if ok else "fail"},
          [f"max deviations: {dev}", f"verdict: {'pass' if ok else 'fail'}"])
    return EXIT_TRUE if ok else EXIT_FALSE


def _parse_range(text: str):
    if "-" in text:
        lo, hi = text.split("-", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",")]


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for all randomized internals")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="worker cap")
    common.add_argument("--json", action="store_true", help="emit a single JSON document")
    common.add_argument("--csv", action="store_true", help="emit CSV for tabular output")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="factoring iteration budget")
    common.add_argument("--cap", type=int, default=search.ENUM_CAP, help="max field size for enumeration")
    common.add_argument("--dry-run", action="store_true", help="print the resolved plan and exit")
    ap = argparse.ArgumentParser(
        prog="rkpairs",
        description="search and certification for pairs of r-primitive, k-normal field elements",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    sp = add_parser("factor-xn1", help="factor x^n - 1 over F_q")
    sp.add_argument("q", type=int)
    sp.add_argument("n", type=int)
    sp.set_defaults(func=cmd_factor_xn1)

    sp = add_parser("field-info", help="build and serialize a field tower")
    sp.add_argument("p", type=int)
    sp.add_argument("m", type=int)
    sp.add_argument("n", type=int)
    sp.set_defaults(func=cmd_field_info)

    sp = add_parser("check-theorem", help="weighted main inequality (log space)")
    sp.add_argument("q", type=int)
    sp.add_argument("n", type=int)
    sp.add_argument("--t", type=float, default=8.0)
    sp.set_defaults(func=cmd_check_theorem)

    sp = add_parser("special-sieve", help="pessimistic sieve, no factoring")
    sp.add_argument("q", type=int)
    sp.add_argument("n", type=int)
    sp.add_argument("p0", type=int)
    sp.set_defaults(func=cmd_special_sieve)

    sp = add_parser("total-sieve", help="exhaustive keep/sieve split search")
    sp.add_argument("q", type=int)
    sp.add_argument("n", type=int)
    sp.add_argument("--constant", type=int, default=36, choices=(6, 36))
    sp.set_defaults(func=cmd_total_sieve)

    sp = add_parser("bound-sieve", help="residue-class bound shrink for n in {7,8,9}")
    sp.add_argument("qmin", type=int)
    sp.add_argument("qmax", type=int)
    sp.add_argument("n", type=int)
    sp.add_argument("p0", type=int)
    sp.add_argument("--variant", type=str, default="standard",
                    help="comma-joined flags: nine_divides,strict_m,nine_not_divides")
    sp.set_defaults(func=cmd_bound_sieve)

    sp = add_parser("global-bound", help="one global bound-shrink iteration")
    sp.add_argument("q0", type=int)
    sp.add_argument("p0", type=int)
    sp.add_argument("P", type=str, help="current bound in scientific notation, e.g. 6.18e718")
    sp.set_defaults(func=cmd_global_bound)

    sp = add_parser("table1", help="weil-stage starting bounds")
    sp.set_defaults(func=cmd_table1)

    sp = add_parser("table2", help="fixed-n sieve chains")
    sp.set_defaults(func=cmd_table2)

    sp = add_parser("casen7", help="full n=7 bound chain incl. prime census")
    sp.set_defaults(func=cmd_casen7)

    sp = add_parser("sweep", help="staged criteria sweep over (q, n) grids")
    sp.add_argument("n_range", type=str, help="e.g. 12-16 or 9,10,11")
    sp.add_argument("--q-bound", type=int, default=0, help="per-n q cap (default: the chain bound)")
    sp.add_argument("--open-bound", action="store_true", help="strict upper boundary")
    sp.add_argument("--stages", type=str, default="test_theorem,special_sieve,total_sieve")
    sp.add_argument("--t", type=float, default=8.0)
    sp.add_argument("--p0", type=int, default=0, help="special-sieve cutoff (0 = size schedule)")
    sp.add_argument("--constant", type=int, default=36, choices=(6, 36))
    sp.add_argument("--checkpoint", type=str, default=None, help="JSON-lines path, append-only")
    sp.set_defaults(func=cmd_sweep)

    sp = add_parser("search", help="brute-force witness search")
    sp.add_argument("q", type=int)
    sp.add_argument("n", type=int)
    sp.add_argument("r1", type=int)
    sp.add_argument("k1", type=int)
    sp.add_argument("r2", type=int)
    sp.add_argument("k2", type=int)
    sp.add_argument("--f", dest="F", type=str, default=None,
                    help="rational function, e.g. '(x^2+a*x+3)/(x+1)' (default: the fixed family)")
    sp.add_argument("--skip-upsilon", action="store_true", help="skip the admissibility check")
    sp.set_defaults(func=cmd_search)

    sp = add_parser("verify-identities", help="dual-route and counting identity battery")
    sp.add_argument("p", type=int)
    sp.add_argument("m", type=int)
    sp.add_argument("n", type=int)
    sp.set_defaults(func=cmd_verify_identities)

    sp = add_parser("chars-selftest", help="character-sum deviation report")
    sp.add_argument("p", type=int)
    sp.add_argument("m", type=int)
    sp.add_argument("n", type=int)
    sp.set_defaults(func=cmd_chars_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except (SystemExit2, ratfun.ParseError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
