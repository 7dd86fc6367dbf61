"""Command-line interface.

Exit codes: 0 success, 2 validation error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import charpoly, constructions, gqp, numtheory, permgroup, treeoracle
from .errors import ResourceLimitError, ValidationError

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RESOURCE = 3


def _load_set(args) -> permgroup.PermSet:
    if args.group is not None and args.set is not None:
        raise ValidationError("give either --group or --set, not both")
    if args.group is not None:
        return permgroup.generate(permgroup.parse_perm_list(args.group, args.d), degree=args.d)
    if args.set is not None:
        return permgroup.perm_set(permgroup.parse_perm_list(args.set, args.d), degree=args.d)
    raise ValidationError("one of --group or --set is required")


def _emit(record, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(record, indent=2) + "\n")
    elif fmt == "csv":
        rows = record if isinstance(record, list) else [record]
        flat = [{k: (json.dumps(v) if isinstance(v, (dict, list)) else v)
                 for k, v in r.items()} for r in rows]
        w = csv.DictWriter(out, fieldnames=list(flat[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(flat)
    else:
        _text(record, out)


def _text(record, out, indent: str = "") -> None:
    if isinstance(record, list):
        for i, r in enumerate(record):
            if i:
                out.write("\n")
            _text(r, out, indent)
        return
    for k, v in record.items():
        if isinstance(v, dict):
            out.write(f"{indent}{k}:\n")
            _text(v, out, indent + "  ")
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            out.write(f"{indent}{k}:\n")
            for item in v:
                out.write(f"{indent}  -\n")
                _text(item, out, indent + "    ")
        else:
            out.write(f"{indent}{k}: {v}\n")


def cmd_fpp(args, out) -> None:
    S = _load_set(args)
    prof = charpoly.profile(S)
    f = charpoly.char_polynomial(prof)
    value = charpoly.fpp_from_profile(prof, args.precision, args.digits)
    record = {
        "d": args.d,
        "set_size": len(S),
        "is_group": S.is_group,
        "profile": list(prof.counts),
        "polynomial": [charpoly.frac_str(c) for c in f.coeffs],
        "polynomial_text": str(f),
        "derivative_at_zero": charpoly.frac_str(charpoly.derivative_at_zero(prof)),
        **value.to_record(),
    }
    _emit(record, args.format, out)


def cmd_curve(args, out) -> None:
    if args.samples < 2:
        raise ValidationError("--samples must be >= 2")
    S = _load_set(args)
    prof = charpoly.profile(S)
    f = charpoly.char_polynomial(prof)
    value = charpoly.fpp_from_profile(prof, args.precision, args.digits)

    def show(q: Fraction) -> str:
        return charpoly.frac_str(q) if args.exact else charpoly.to_decimal(q, args.digits)

    w = csv.writer(out, lineterminator="\n")
    w.writerow(["x", "f", "id"])
    for i in range(args.samples):
        x = Fraction(i, args.samples - 1)
        w.writerow([show(x), show(f(x)), show(x)])
    out.write(f"# fixed_point kind={value.kind} decimal={value.decimal} "
              f"lo={charpoly.frac_str(value.lo)} hi={charpoly.frac_str(value.hi)}\n")


def cmd_gqp_report(args, out) -> None:
    spec = gqp.validate_gqp(args.d, args.Q, args.P)
    report = gqp.gqp_report(spec, args.precision, args.digits)
    _emit(report.to_record(), args.format, out)


def cmd_oracle(args, out) -> None:
    S = _load_set(args)
    record = treeoracle.oracle_report(S, args.n, args.limit)
    if args.trials:
        mc = treeoracle.monte_carlo_p(S, args.n, args.trials, args.seed)
        record["monte_carlo"] = {
            "trials": mc.trials,
            "seed": args.seed,
            "hits": mc.hits,
            "estimate": repr(mc.estimate),
            "halfwidth_99": repr(mc.halfwidth),
        }
    record["matches"] = record["matches_recurrence"]
    _emit(record, args.format, out)


def cmd_table1(args, out) -> None:
    rows = constructions.table1(args.max_n, args.workers)
    if args.format == "text":
        out.write(f"{'n':>2} {'|GL_n(F2)|':>12} {'good':>10} {'ratio':>10} {'decimal':>8}\n")
        for r in rows:
            out.write(f"{r['n']:>2} {r['gl_order']:>12} {r['good_count']:>10} "
                      f"{r['ratio']:>10} {r['decimal']:>8}\n")
    else:
        _emit(rows, args.format, out)


def cmd_construction1(args, out) -> None:
    q = constructions.fpp_construction1(args.d)
    if args.format == "text":
        out.write(f"{charpoly.frac_str(q)}\n")
        return
    record = {
        "d": args.d,
        "psi": numtheory.psi(args.d),
        "phi": numtheory.euler_phi(args.d),
        "fpp": charpoly.frac_str(q),
        "prime_product": charpoly.frac_str(numtheory.prime_ratio_product(args.d)),
        "decimal": charpoly.to_decimal(q, args.digits),
    }
    if args.verify:
        qg, pg = constructions.affine_group(args.d)
        record["fpp_gqp"] = gqp.fpp_gqp(gqp.validate_gqp(args.d, qg, pg)).to_record()["value"]
    _emit(record, args.format, out)


def cmd_construction2(args, out) -> None:
    q = constructions.fpp_construction2(args.d)
    n, r = numtheory.two_adic_split(args.d)
    if args.format == "text" and not args.verify:
        out.write(f"{charpoly.frac_str(q)}\n")
        return
    record = {"d": args.d, "n": n, "r": r, "fpp": charpoly.frac_str(q),
              "decimal": charpoly.to_decimal(q, args.digits)}
    if args.verify:
        qg, pg = constructions.realize_construction2(args.d)
        spec = gqp.validate_gqp(args.d, qg, pg)
        got = gqp.fpp_gqp(spec)
        record.update({"q_order": len(spec.Q), "p_order": len(spec.P),
                       "fpp_gqp": charpoly.frac_str(got.value),
                       "matches": got.value == q})
    _emit(record, args.format, out)


def cmd_search_unifix(args, out) -> None:
    if args.Q is None:
        if args.P is not None:
            raise ValidationError("--P needs --Q")
        reports = constructions.search_builtin(args.d, args.cap)
    else:
        qg = permgroup.parse_perm_list(args.Q, args.d)
        pg = permgroup.parse_perm_list(args.P, args.d) if args.P else None
        reports = [constructions.search_unifix(args.d, qg, pg, args.cap, label="user")]
    record = {"d": args.d, "found": any(r.found for r in reports),
              "candidates": [r.to_record() for r in reports]}
    _emit(record, args.format, out)


def cmd_psi(args, out) -> None:
    d = args.d
    record = {
        "d": d,
        "factors": [list(pe) for pe in numtheory.factorize(d).factors],
        "psi": numtheory.psi(d),
        "phi": numtheory.euler_phi(d),
        "ratio": charpoly.frac_str(Fraction(numtheory.psi(d), numtheory.euler_phi(d))),
    }
    _emit(record, args.format, out)


def cmd_classify(args, out) -> None:
    rows = []
    for H in permgroup.subgroup_classes(args.d):
        v = charpoly.fpp_of_set(H, args.precision, args.digits)
        rows.append({
            "order": len(H),
            "generators": ",".join(permgroup.format_perm(g) for g in H.generators) or "()",
            "transitive": permgroup.is_transitive(H),
            "profile": " ".join(map(str, charpoly.profile(H).counts)),
            "kind": v.kind,
            "decimal": v.decimal,
        })
    _emit(rows, args.format, out)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "csv"], default="text")
    common.add_argument("--precision", type=int, default=charpoly.DEFAULT_PRECISION,
                        help="bracket width bound 2^-precision (default 60)")
    common.add_argument("--digits", type=int, default=charpoly.DEFAULT_DIGITS,
                        help="significant digits for decimal annotations (default 15)")

    def with_set(p):
        p.add_argument("-d", type=int, required=True, help="degree")
        p.add_argument("--group", help="generators to close, e.g. \"(1,2,3),(2,3)\"")
        p.add_argument("--set", help="explicit elements, used as given")

    parser = argparse.ArgumentParser(
        prog="wreathfpp",
        description="Exact fixed-point proportions of iterated wreath products on regular trees.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fpp", parents=[common], help="FPP of W_S")
    with_set(p)
    p.set_defaults(func=cmd_fpp)

    p = sub.add_parser("curve", parents=[common], help="CSV samples of f_S on [0,1]")
    with_set(p)
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--exact", action="store_true", help="print x and f as num/den")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("gqp-report", parents=[common], help="full report for G_Q^P")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--Q", required=True, help="generators of Q")
    p.add_argument("--P", required=True, help="generators of P")
    p.set_defaults(func=cmd_gqp_report)

    p = sub.add_parser("oracle", parents=[common], help="brute force vs recurrence")
    with_set(p)
    p.add_argument("-n", type=int, required=True, help="tree depth")
    p.add_argument("--limit", type=int, default=treeoracle.DEFAULT_LIMIT)
    p.add_argument("--trials", type=int, default=0, help="Monte-Carlo trials (0 = skip)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("table1", parents=[common], help="GL_n(F2) counts")
    p.add_argument("--max-n", type=int, default=4)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("construction1", parents=[common], help="affine construction FPP")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--verify", action="store_true", help="also run the coset pipeline")
    p.set_defaults(func=cmd_construction1)

    p = sub.add_parser("construction2", parents=[common], help="C_2^n x C_r construction FPP")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--verify", action="store_true", help="realize as permutations and compare")
    p.set_defaults(func=cmd_construction2)

    p = sub.add_parser("search-unifix", parents=[common],
                       help="look for cosets whose elements all fix exactly one point")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--Q", help="generators of a transitive Q (default: built-in candidates)")
    p.add_argument("--P", help="generators of P (default: normalizer of Q)")
    p.add_argument("--cap", type=int, default=permgroup.DEFAULT_NORMALIZER_CAP)
    p.set_defaults(func=cmd_search_unifix)

    p = sub.add_parser("psi", parents=[common], help="psi(d), phi(d) and their ratio")
    p.add_argument("-d", type=int, required=True)
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("classify", parents=[common],
                       help="FPP of every subgroup class of Sym(d), d <= 5")
    p.add_argument("-d", type=int, required=True)
    p.set_defaults(func=cmd_classify)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args, out)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def run(argv) -> tuple:
    """Run the CLI in-process, returning ``(exit_code, stdout_text)``."""
    buf = io.StringIO()
    try:
        code = main(argv, buf)
    except SystemExit as exc:  # argparse usage errors
        code = exc.code if isinstance(exc.code, int) else EXIT_VALIDATION
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
