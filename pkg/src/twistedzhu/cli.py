"""Command line interface for the exact verification suites.

Exit codes: 0 all subcases pass, 1 an exact equality or certificate
replay failed, 2 a membership question stayed inconclusive at maximal
caps, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bimodule import BimodQuotient
from .certificates import verify_certificate_file
from .checks import CHECKS, make_config, make_context, run_check
from .scalars import parse_fraction
from .zhu import ZhuQuotient

USAGE_EXIT = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _frac(text):
    try:
        parse_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc))
    return text


def _add_common(sp):
    sp.add_argument("--voa", choices=("heisenberg", "virasoro"),
                    default="heisenberg")
    sp.add_argument("--central-charge", type=_frac, default=None,
                    help="virasoro backend only, e.g. 1/2")
    sp.add_argument("--T", type=int, default=2,
                    help="order of the twisting automorphism")
    sp.add_argument("--g1", choices=("id", "neg"), default="neg")
    sp.add_argument("--n", type=_frac, default=None,
                    help="outer level; omit to sweep the default grid")
    sp.add_argument("--m", type=_frac, default=None,
                    help="base level; omit to sweep the default grid")
    sp.add_argument("--p", type=_frac, default=None,
                    help="auxiliary level; omit to sweep the default grid")
    sp.add_argument("--cutoff", type=int, default=8)
    sp.add_argument("--slack", type=int, default=3)
    sp.add_argument("--probe-cap", type=int, default=5)
    sp.add_argument("--param-cap", type=int, default=1)
    sp.add_argument("--weight-cap", type=int, default=3)
    sp.add_argument("--report", default=None,
                    help="write the JSON report to this path")
    sp.add_argument("--cert-dir", default=None,
                    help="write membership certificates under this directory")
    sp.add_argument("--seed", type=int, default=None,
                    help="reserved for randomized probe selection")
    sp.add_argument("--jobs", type=int, default=1,
                    help="worker processes for independent grid cells")


def _config_from(args):
    return make_config(
        voa=args.voa, central_charge=args.central_charge, T=args.T,
        g1=args.g1, n=args.n, m=args.m, p=args.p, cutoff=args.cutoff,
        slack=args.slack, probe_cap=args.probe_cap,
        param_cap=args.param_cap, weight_cap=args.weight_cap,
        cert_dir=args.cert_dir, seed=args.seed, jobs=args.jobs)


def _context_or_usage(config):
    try:
        return make_context(config)
    except ValueError as exc:
        print(f"zhu-verify: error: {exc}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _write_report(args, report):
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")


def cmd_zhu_basis(args):
    config = _config_from(args)
    ctx = _context_or_usage(config)
    n = parse_fraction(args.n) if args.n is not None else parse_fraction("0")
    quo = ZhuQuotient(ctx, n, args.cutoff, args.slack)
    print(f"A_(g,n) basis  voa={args.voa} T={args.T} g1={args.g1} "
          f"n={n} cutoff={args.cutoff} slack={args.slack}")
    dims = quo.dims_by_weight()
    for w in sorted(dims):
        reps = [ctx.format_monomial(mono) for mono in quo.representatives
                if sum(mono) == w]
        print(f"weight {w}: dim {dims[w]}")
        for r in reps:
            print(f"  {r}")
    print(f"total dimension (up to cutoff): {len(quo.representatives)}")
    report = {"check": "zhu-basis",
              "params": {"voa": args.voa, "T": args.T, "g1": args.g1,
                         "central_charge": args.central_charge,
                         "n": str(n)},
              "caps": {"cutoff": args.cutoff, "slack": args.slack},
              "dims": {str(w): d for w, d in dims.items()},
              "representatives": [ctx.format_monomial(mono)
                                  for mono in quo.representatives]}
    _write_report(args, report)
    return 0


def cmd_bimodule_dims(args):
    config = _config_from(args)
    ctx = _context_or_usage(config)
    n = parse_fraction(args.n) if args.n is not None else parse_fraction("0")
    m = parse_fraction(args.m) if args.m is not None else parse_fraction("0")
    print(f"bimodule quotients  voa={args.voa} T={args.T} g1={args.g1} "
          f"n={n} m={m} cutoff={args.cutoff} slack={args.slack}")
    report = {"check": "bimodule-dims",
              "params": {"voa": args.voa, "T": args.T, "g1": args.g1,
                         "central_charge": args.central_charge,
                         "n": str(n), "m": str(m)},
              "caps": {"cutoff": args.cutoff, "slack": args.slack},
              "dims": {}}
    for kind, label in (("dagger", "W/O-dagger"), ("prime", "W/O-prime")):
        quo = BimodQuotient(ctx, m, n, args.cutoff, args.slack, kind=kind)
        dims = quo.dims_by_weight()
        pretty = ", ".join(f"{w}: {d}" for w, d in sorted(dims.items()))
        print(f"{label}: {{{pretty}}}  "
              f"(total {len(quo.representatives)})")
        report["dims"][kind] = {str(w): d for w, d in dims.items()}
    _write_report(args, report)
    return 0


def cmd_verify(args):
    config = _config_from(args)
    _context_or_usage(config)
    report, code = run_check(args.check_id, config)
    print(f"{report['check']}: {report['status']}"
          f"{'  (vacuous)' if report.get('vacuous') else ''}")
    for sub in report["subcases"]:
        line = f"  {sub['id']}: {sub['status']} ({sub['cases']} cases)"
        if sub.get("misses"):
            line += f"  first misses: {sub['misses']}"
        print(line)
    for ref in report["certificates"]:
        if isinstance(ref, str):
            print(f"  certificate file: {ref}")
    _write_report(args, report)
    return code


def cmd_certify(args):
    report, code = verify_certificate_file(args.file)
    for verdict in report["verdicts"]:
        line = (f"certificate {verdict['index']}: {verdict['status']} "
                f"({verdict['targets']} targets, {verdict['terms']} terms)")
        if verdict["status"] != "ok":
            for key in ("term_index", "target_index", "error"):
                if verdict.get(key) is not None:
                    line += f" {key}={verdict[key]}"
        print(line)
    print(f"{report['file']}: {report['check']} entries={report['entries']} "
          f"targets={report['targets']} failed={report['failed']}")
    if report.get("first_failure"):
        print(f"first failure: {report['first_failure']}")
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return code


def build_parser():
    parser = _Parser(prog="zhu-verify",
                     description="exact twisted Zhu algebra verification")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    sp = sub.add_parser("zhu-basis", help="print a quotient algebra basis")
    _add_common(sp)
    sp.set_defaults(func=cmd_zhu_basis)

    sp = sub.add_parser("bimodule-dims",
                        help="print bimodule quotient dimensions")
    _add_common(sp)
    sp.set_defaults(func=cmd_bimodule_dims)

    sp = sub.add_parser("verify", help="run a named verification suite")
    sp.add_argument("check_id", choices=sorted(CHECKS))
    _add_common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("certify",
                        help="independently replay a certificate file")
    sp.add_argument("file")
    sp.add_argument("--report", default=None,
                    help="write the JSON replay report to this path")
    sp.set_defaults(func=cmd_certify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except FileNotFoundError as exc:
        print(f"zhu-verify: error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (KeyError, ValueError) as exc:
        print(f"zhu-verify: error: {exc}", file=sys.stderr)
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
