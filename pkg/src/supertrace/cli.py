"""Command-line front end.

Every subcommand is deterministic. Exit status: 0 when the computation
verifies, 1 when a verification fails, 2 on usage errors (including size
caps without ``--force``).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

from . import identities as ids
from . import qindex, symfun
from .gmatrix import dynkin_relation_check


class UsageError(Exception):
    pass


def _emit(args, text: str, data) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2, sort_keys=False))
    else:
        print(text)


def _pmap(args, fn: Callable, items: Sequence):
    """Order-preserving map honouring ``--threads``."""
    if args.threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=args.threads) as pool:
        return list(pool.map(fn, items))


def _check_cap(args, name: str, value: int) -> None:
    cap = ids.CAPS[name]
    if value > cap:
        if not args.force:
            raise UsageError(f"--{name if name != 'ell' else 'lmax'} {value} exceeds the cap {cap}; use --force")
        print(f"warning: {name}={value} exceeds the cap {cap}; continuing because of --force",
              file=sys.stderr)


def _pairs(args, total: int) -> list[tuple[int, int]]:
    if args.e is None and args.f is None:
        return [(e, total - e) for e in range(total + 1)]
    e = args.e if args.e is not None else total - args.f
    f = args.f if args.f is not None else total - args.e
    if e < 0 or f < 0 or e + f != total:
        raise UsageError(f"--e {e} --f {f}: need e + f = {total}")
    return [(e, f)]


# subcommands


def cmd_identity(args) -> int:
    _check_cap(args, "n", args.n)
    pairs = _pairs(args, args.n + 1)
    kinds = ["T", "CH"] if args.kind == "both" else [args.kind]
    specs = [ids.IdentitySpec(e, f, args.n, k, args.size) for e, f in pairs for k in kinds]
    if args.action == "gen":
        records = []
        lines = []
        for spec in specs:
            expr = ids.generate(spec)
            records.append({
                "identity": {"kind": spec.kind, "e": spec.e, "f": spec.f, "n": spec.n},
                "terms": expr.to_json_terms(),
                "sexpr": expr.to_sexpr(),
            })
            lines.append(f"{spec.kind}_{{{spec.e},{spec.f}}} (n={spec.n}): {expr}")
        _emit(args, "\n".join(lines), records if len(records) > 1 else records[0])
        return 0
    verdicts = _pmap(args, ids.verify_identity, specs)
    ok = all(v.ok for v in verdicts)
    lines = ["zero" if ok else "nonzero"]
    records = []
    for spec, v in zip(specs, verdicts):
        lines.append(f"  {spec.kind}_{{{spec.e},{spec.f}}} n={spec.n} size={spec.matrix_size}: {v.detail}")
        records.append({
            "identity": {"kind": spec.kind, "e": spec.e, "f": spec.f, "n": spec.n,
                         "size": spec.matrix_size},
            "terms": v.data["expression"].to_json_terms(),
            "verdict": "zero" if v.ok else "nonzero",
            "detail": v.detail,
        })
    _emit(args, "\n".join(lines), records if len(records) > 1 else records[0])
    return 0 if ok else 1


def cmd_deduce(args) -> int:
    _check_cap(args, "n", args.n)
    res = ids.deduce_one_matrix_relations(args.n)
    ok = all(v.ok for v in res.values())
    names = {"CH_n0": "bosonic slots <- x^2", "CH_n1": "bosonic slots <- x^2, fermionic slot <- x"}
    lines = [f"{name} ({names[name]}): {v.detail}\n  {v.data['expression']}" for name, v in res.items()]
    data = {name: {"verdict": "zero" if v.ok else "nonzero",
                   "terms": v.data["expression"].to_json_terms()} for name, v in res.items()}
    _emit(args, "\n".join(lines), data)
    return 0 if ok else 1


def cmd_ranks(args) -> int:
    _check_cap(args, "m", args.m)
    _check_cap(args, "n", args.n)
    pairs = _pairs(args, args.m)
    results = _pmap(args, lambda p: ids.relation_rank(args.m, p[0], p[1], args.n, force=True), pairs)
    codim = symfun.codimension(args.m, args.n)
    rows = [{"e": e, "f": f, "rank": r, "kernel": k} for (e, f), (r, k) in zip(pairs, results)]
    ok = all(row["rank"] == codim for row in rows)
    lines = [f"m={args.m} n={args.n} codimension={codim}"]
    lines += [f"  e={r['e']} f={r['f']}: rank {r['rank']}, kernel {r['kernel']}" for r in rows]
    _emit(args, "\n".join(lines), {"m": args.m, "n": args.n, "codimension": codim, "rows": rows,
                                   "consistent": ok})
    return 0 if ok else 1


def cmd_charges(args) -> int:
    _check_cap(args, "ell", args.lmax)
    if args.rank_at is not None:
        _check_cap(args, "n", args.rank_at)
    rows = ids.charge_table(args.lmax, args.rank_at, args.traceless, force=True,
                            max_index=args.max_index)
    ok = all(len(r.bosonic) == len(r.fermionic) for r in rows)
    data = []
    for r in rows:
        item = {
            "charge": r.charge,
            "bosonic": [str(m) for m in r.bosonic],
            "fermionic": [str(m) for m in r.fermionic],
            "free_dim": list(r.free_dim),
        }
        if r.rank_at_n:
            item["rank_at_n"] = {str(n): list(v) for n, v in r.rank_at_n.items()}
        data.append(item)
    _emit(args, ids.format_charge_table(rows), data)
    return 0 if ok else 1


def cmd_goodperms(args) -> int:
    if args.m > 9 and not args.force:
        raise UsageError(f"--m {args.m} exceeds the cap 9 for enumerating S_m; use --force")
    count = symfun.count_d_good(args.m, args.d)
    codim = symfun.codimension(args.m, args.d - 1) if args.d >= 2 else None
    ok = codim is None or count == codim
    text = f"m={args.m} d={args.d}: {count} good permutations"
    if codim is not None:
        text += f" (codimension c_{args.m}(M_{args.d - 1}) = {codim})"
    _emit(args, text, {"m": args.m, "d": args.d, "good": count, "codimension": codim})
    return 0 if ok else 1


def cmd_codim(args) -> int:
    if args.m > 10 and not args.force:
        raise UsageError(f"--m {args.m} exceeds the cap 10; use --force")
    rows = []
    for m in range(1, args.m + 1):
        c = symfun.codimension(m, args.n)
        k = symfun.antisymmetrizer_ideal_dim(m, args.n)
        row = {"m": m, "n": args.n, "codim": c, "kernel": k}
        if m <= 8:
            row["good"] = symfun.count_d_good(m, args.n + 1)
        rows.append(row)
    ok = all(r["codim"] + r["kernel"] == math.factorial(r["m"]) and
             r.get("good", r["codim"]) == r["codim"] for r in rows)
    lines = ["m  n  c_m  kernel  good"]
    lines += [f"{r['m']}  {r['n']}  {r['codim']}  {r['kernel']}  {r.get('good', '-')}" for r in rows]
    _emit(args, "\n".join(lines), rows)
    return 0 if ok else 1


def _series_out(args, s: qindex.QSeries, extra: dict | None = None, ok: bool = True) -> int:
    data = {"coefficients": s.to_json(), "text": str(s)}
    if extra:
        data.update(extra)
    _emit(args, str(s), data)
    return 0 if ok else 1


def cmd_index(args) -> int:
    _check_cap(args, "n", args.n)
    s = qindex.molien_weyl_index(args.n, args.order)
    ok = s == qindex.euler_function(args.order)
    return _series_out(args, s, {"equals_euler": ok}, ok)


def cmd_andrews(args) -> int:
    _check_cap(args, "n", args.n)
    v = qindex.andrews_ct_check(args.n, args.order)
    data = {k: s.to_json() for k, s in v.series.items()}
    data["ok"] = v.ok
    _emit(args, ("ok: " if v.ok else "FAIL: ") + v.detail, data)
    return 0 if v.ok else 1


def cmd_series(args) -> int:
    _check_cap(args, "n", args.n)
    if args.order > ids.CAPS["ell"] and not args.force:
        raise UsageError(f"--order {args.order} exceeds the cap {ids.CAPS['ell']}; use --force")
    if args.mode == "traceless":
        profile = qindex.traceless_rank_profile(args.n, args.order, args.max_index)
        s = qindex.QSeries([1] + [r["rank"][0] for r in profile], args.order)
        first = qindex.first_deficit(profile)
        text = str(s) + f"\nfirst charge with a rank deficit at n={args.n}: {first}"
        for r in profile:
            text += (f"\n  charge {r['charge']}: free {r['free'][0]}/{r['free'][1]}"
                     f" rank {r['rank'][0]}/{r['rank'][1]}")
        _emit(args, text, {"coefficients": s.to_json(), "text": str(s), "profile": profile,
                           "first_deficit": first})
        return 0
    if args.mode == "equivariants":
        cmp = qindex.compare_equivariant_readings(args.n)
        s = qindex.hilbert_series_by_rank(args.n, "equivariants", args.order)
        text = str(s)
        for name, poly in cmp["readings"].items():
            lo = min(poly)
            coeffs = [poly.get(k, 0) for k in range(lo, max(poly) + 1)]
            text += (f"\n  {name} reading: {qindex.format_series(coeffs, lo)}"
                     f" -> {'matches' if cmp['matches'][name] else 'differs'}")
        data = {"coefficients": s.to_json(), "text": str(s),
                "readings": {k: {str(e): c for e, c in v.items()} for k, v in cmp["readings"].items()},
                "matches": cmp["matches"]}
        _emit(args, text, data)
        return 0
    s = qindex.hilbert_series_by_rank(args.n, args.mode, args.order, max_index=args.max_index)
    if args.mode == "invariants":
        ok = s == qindex.dynkin_series(args.n, args.order)
        return _series_out(args, s, {"exterior_algebra": ok}, ok)
    return _series_out(args, s)


def cmd_dynkin(args) -> int:
    _check_cap(args, "n", args.n)
    res = dynkin_relation_check(args.n)
    ok = res.is_zero()
    text = "zero" if ok else "nonzero residual:\n" + str(res)
    _emit(args, text, {"n": args.n, "verdict": "zero" if ok else "nonzero",
                       "residual": json.loads(res.to_json())})
    return 0 if ok else 1


# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--force", action="store_true", help="lift the size caps")
    common.add_argument("--threads", type=int, default=1, help="worker budget")

    p = argparse.ArgumentParser(prog="supertrace", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("identity", parents=[common], help="generate or verify CH/T identities")
    s.add_argument("action", choices=["gen", "verify"])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--e", type=int)
    s.add_argument("--f", type=int)
    s.add_argument("--kind", choices=["T", "CH", "both"], default="both")
    s.add_argument("--size", type=int, help="matrix size for verification (default n)")
    s.set_defaults(func=cmd_identity)

    s = sub.add_parser("deduce-11", parents=[common], help="one-matrix relations from CH")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_deduce)

    s = sub.add_parser("ranks", parents=[common], help="rank of the multilinear invariants")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--e", type=int)
    s.add_argument("--f", type=int)
    s.set_defaults(func=cmd_ranks)

    s = sub.add_parser("charges", parents=[common], help="charge-graded trace monomials")
    s.add_argument("--lmax", type=int, required=True)
    s.add_argument("--rank-at", type=int, dest="rank_at")
    s.add_argument("--traceless", action=argparse.BooleanOptionalAction, default=True)
    s.add_argument("--max-index", type=int, dest="max_index")
    s.set_defaults(func=cmd_charges)

    s = sub.add_parser("goodperms", parents=[common], help="count d-good permutations")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.set_defaults(func=cmd_goodperms)

    s = sub.add_parser("codim", parents=[common], help="codimension table")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_codim)

    s = sub.add_parser("index", parents=[common], help="Molien-Weyl index")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--order", type=int, required=True)
    s.set_defaults(func=cmd_index)

    s = sub.add_parser("andrews", parents=[common], help="constant-term identity check")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--order", type=int, required=True)
    s.set_defaults(func=cmd_andrews)

    s = sub.add_parser("series", parents=[common], help="Hilbert series by exact rank")
    s.add_argument("--mode", choices=["invariants", "equivariants", "free", "traceless"], required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--max-index", type=int, dest="max_index")
    s.set_defaults(func=cmd_series)

    s = sub.add_parser("dynkin", parents=[common], help="one-matrix relation residual")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_dynkin)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for name in ("n", "m", "order", "lmax", "d"):
        v = getattr(args, name, None)
        if v is not None and v < (1 if name != "order" else 0):
            parser.print_usage(sys.stderr)
            print(f"supertrace: error: --{name} must be positive", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except (UsageError, ids.TooLarge, ids.BadArity) as exc:
        parser.print_usage(sys.stderr)
        print(f"supertrace: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
