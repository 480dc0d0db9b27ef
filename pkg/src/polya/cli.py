"""Command-line interface: ``polya <command> ...``.

Exit codes: 0 success, 1 input error, 2 resource bound exceeded,
3 consistency violation or rejected certificate.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__, config, constructions, families, serialize
from .errors import InputError, ResourceLimitError
from .forms import field_from_d
from .quadratic import is_polya_quadratic, polya_report, verify_range

EXIT_OK, EXIT_INPUT, EXIT_RESOURCE, EXIT_VIOLATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--oracle-bound", type=int, default=None,
                   help=f"largest |discriminant| for the class-group oracle "
                        f"(default ${config.ORACLE_BOUND_ENV} or 10^9)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes; never changes output")
    return p


def build_parser():
    common = _common()
    parser = _Parser(prog="polya", description="Pólya groups of quadratic and related number fields.")
    parser.add_argument("--version", action="version", version=f"polya {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("quad", parents=[common], help="full Pólya report for Q(sqrt d)")
    p.add_argument("d", type=int)

    cl = sub.add_parser("classify", help="Pólya criteria for a field family")
    csub = cl.add_subparsers(dest="family", required=True, parser_class=_Parser)
    p = csub.add_parser("quad", parents=[common])
    p.add_argument("d", type=int)
    p = csub.add_parser("biquad", parents=[common])
    p.add_argument("--shape", choices=sorted(families.SHAPES), required=True)
    p.add_argument("args", type=int, nargs="+")
    p = csub.add_parser("cubic", parents=[common])
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--minpoly-3x1", action="store_true", help="the field defined by X^3 - 3X + 1")
    g.add_argument("--u", type=int)
    p.add_argument("--w", type=int)
    p.add_argument("--p", type=int)
    p = csub.add_parser("quartic", parents=[common])
    for name in "ABCD":
        p.add_argument(name, type=int)
    p.add_argument("--unit-norm", choices=("trivial", "nontrivial"), default=None,
                   help="assert whether every unit of K has norm +1 (trivial) or not")
    p = csub.add_parser("sextic", parents=[common])
    p.add_argument("m", type=int)
    p.add_argument("--search-bound", type=int, default=config.SEXTIC_SEARCH_BOUND)
    p = csub.add_parser("cyclic", parents=[common])
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--r", type=int, required=True)

    p = sub.add_parser("lehmer", parents=[common], help="Lehmer quintic K_n")
    p.add_argument("n", type=int)
    p.add_argument("--to", type=int, default=None, help="report every n up to this value")

    co = sub.add_parser("construct", help="CRT constructions")
    cosub = co.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    for name in ("consecutive", "multiplicative", "iterate"):
        p = cosub.add_parser(name, parents=[common])
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--M", type=float, required=True)
        p.add_argument("--polya", action="store_true", help="Pólya-group variant (primes ≡ 3 mod 4)")
        p.add_argument("--oracle-budget", type=int, default=config.CERT_ORACLE_BUDGET)
        if name == "iterate":
            p.add_argument("--count", type=int, default=2)
        else:
            p.add_argument("--out", type=Path, default=None, help="write the certificate here")

    p = sub.add_parser("verify-cert", parents=[common], help="re-verify a certificate file")
    p.add_argument("file", type=Path)
    p.add_argument("--oracle-budget", type=int, default=config.CERT_ORACLE_BUDGET)

    sc = sub.add_parser("scan", help="exploratory scans")
    ssub = sc.add_subparsers(dest="scan", required=True, parser_class=_Parser)
    for name in ("class-gap", "polya-gap"):
        p = ssub.add_parser(name, parents=[common])
        p.add_argument("--range", type=int, nargs=2, metavar=("DMIN", "DMAX"), required=True)
        p.add_argument("--convention", choices=(constructions.SQUAREFREE_PART, constructions.SQUAREFREE_ONLY),
                       default=constructions.SQUAREFREE_PART)
    p = ssub.add_parser("odd-exp-pairs", parents=[common])
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p = ssub.add_parser("fermat", parents=[common])
    p.add_argument("--range", type=int, nargs=2, metavar=("NMIN", "NMAX"), default=(0, config.FERMAT_CAP))

    p = sub.add_parser("sweep", parents=[common], help="cross-validate quadratic results on a range")
    p.add_argument("--dmin", type=int, required=True)
    p.add_argument("--dmax", type=int, required=True)
    return parser


# ---------------------------------------------------------------------------
# handlers: each returns (command name, parameters, result, provenance, exit code)

QUAD_PROVENANCE = {
    "unit_norm": "continued fraction of the reduced quadratic surd",
    "order_formula": "2^(r_K - 2) or 2^(r_K - 1) from ramified primes and unit norm",
    "order_direct": "subgroup of the form class group generated by ramified-prime classes",
    "class_number": "reduced binary quadratic forms",
}


def _bound(args):
    return config.default_oracle_bound() if args.oracle_bound is None else args.oracle_bound


def _quad(args):
    bound = _bound(args)
    rep = polya_report(args.d, bound)
    return "quad", {"d": args.d, "oracle_bound": bound}, rep, QUAD_PROVENANCE, EXIT_OK


def _claims_result(claims):
    dicts = [c.to_dict() for c in claims]
    return dicts, serialize.claim_provenance(dicts)


def _classify(args):
    fam = args.family
    if fam == "quad":
        d = field_from_d(args.d).d
        c = is_polya_quadratic(d)
        res = {"d": d, "is_polya": c.is_polya, "case": c.case, "unit_norm": c.unit_norm}
        prov = {"unit_norm": "continued fraction of the reduced quadratic surd"} if c.unit_norm else {}
        return "classify quad", {"d": args.d}, res, prov, EXIT_OK
    if fam == "biquad":
        claims = families.classify_biquadratic(args.shape, args.args)
        ctx = families.biquadratic_context(args.shape, args.args)
        dicts, prov = _claims_result(claims)
        bad = families.conflicts(claims)
        res = {"claims": dicts, "subfields": sorted(ctx["subfields"]),
               "conflicts": [[a.theorem_id, b.theorem_id] for a, b in bad]}
        return ("classify biquad", {"shape": args.shape, "args": args.args}, res, prov,
                EXIT_VIOLATION if bad else EXIT_OK)
    if fam == "cubic":
        if args.minpoly_3x1:
            params, shown = families.MINPOLY_3X1, {"minpoly": "X^3-3X+1"}
        else:
            if args.w is None:
                raise InputError("--u requires --w")
            params = (args.u, args.w) if args.p is None else (args.p, args.u, args.w)
            shown = {"u": args.u, "w": args.w, "p": args.p}
        claim = families.cyclic_cubic_is_polya(params)
    elif fam == "quartic":
        flag = None if args.unit_norm is None else args.unit_norm == "trivial"
        claim = families.cyclic_quartic_classify(args.A, args.B, args.C, args.D, flag)
        shown = {"A": args.A, "B": args.B, "C": args.C, "D": args.D, "unit_norm": args.unit_norm}
    elif fam == "sextic":
        if args.search_bound < 0:
            raise InputError("--search-bound must be >= 0")
        claim = families.sextic_pure_cubic(args.m, args.search_bound)
        shown = {"m": args.m, "search_bound": args.search_bound}
    else:
        claim = families.cyclic_prime_degree_claim(args.ell, args.r)
        shown = {"ell": args.ell, "r": args.r}
    dicts, prov = _claims_result([claim])
    res = {"claim": dicts[0]}
    if fam == "cyclic":
        res["order"] = claim.po_order
    return f"classify {fam}", shown, res, prov, EXIT_OK


def _lehmer(args):
    hi = args.n if args.to is None else args.to
    if hi < args.n:
        raise InputError("--to must be >= n")
    reports = []
    for n in range(args.n, hi + 1):
        rep = families.lehmer_quintic(n)
        reports.append({**rep.to_dict(), "claim": rep.claim().to_dict()})
    prov = {"m_n": "m_n = n^4 + 5n^3 + 15n^2 + 25n + 25, factored exactly"}
    return "lehmer", {"n": args.n, "to": hi}, {"reports": reports}, prov, EXIT_OK


def _write_cert(path, cert):
    if path is not None:
        path.write_text(json.dumps(serialize.to_jsonable(cert), sort_keys=True, indent=2) + "\n",
                        encoding="utf-8")


def _construct(args):
    variant = constructions.POLYA if args.polya else constructions.CLASS_NUMBER
    params = {"k": args.k, "M": args.M, "variant": variant, "oracle_budget": args.oracle_budget}
    prov = {"structure": "CRT congruences and exact divisibility re-checked",
            "oracle": "exact class number (or Pólya group and unit norm) when the modulus is within budget"}
    if args.kind == "iterate":
        params["count"] = args.count
        certs = constructions.iterate_tuples(args.k, args.M, args.count, variant)
        reps = [constructions.verify_certificate(c, args.oracle_budget) for c in certs]
        vals = [v for c in certs for v in c.fields]
        disjoint = not any(constructions._same_field(a, b)
                           for i, a in enumerate(vals) for b in vals[i + 1:])
        ok = all(r.ok for r in reps) and disjoint
        res = {"certificates": certs, "verifications": reps, "fields_disjoint": disjoint}
        return "construct iterate", params, res, prov, EXIT_OK if ok else EXIT_VIOLATION
    build = (constructions.construct_consecutive if args.kind == "consecutive"
             else constructions.construct_multiplicative)
    cert = build(args.k, args.M, variant)
    rep = constructions.verify_certificate(cert, args.oracle_budget)
    _write_cert(args.out, cert)
    return (f"construct {args.kind}", params, {"certificate": cert, "verification": rep}, prov,
            EXIT_OK if rep.ok else EXIT_VIOLATION)


def _verify(args):
    try:
        data = json.loads(args.file.read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {args.file}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.file} is not JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("certificate must be a JSON object")
    rep = constructions.verify_certificate(data, args.oracle_budget)
    params = {"file": args.file.name, "oracle_budget": args.oracle_budget}
    return "verify-cert", params, rep, {}, EXIT_OK if rep.ok else EXIT_VIOLATION


def _scan(args):
    name = f"scan {args.scan}"
    if args.scan in ("class-gap", "polya-gap"):
        lo, hi = args.range
        bound = _bound(args)
        fn = constructions.scan_class_gap if args.scan == "class-gap" else constructions.scan_polya_gap
        res = fn(lo, hi, args.convention, jobs=args.jobs, bound=bound)
        params = {"range": [lo, hi], "convention": args.convention, "oracle_bound": bound}
        return name, params, res, {"values": "h or |Po| of Q(sqrt(squarefree part))"}, EXIT_OK
    if args.scan == "odd-exp-pairs":
        pairs = constructions.scan_odd_exponent_pairs(args.limit, args.k, jobs=args.jobs)
        res = {"limit": args.limit, "k": args.k, "pairs": pairs}
        return name, {"limit": args.limit, "k": args.k}, res, {}, EXIT_OK
    lo, hi = args.range
    results = [constructions.fermat_pair(n) for n in range(lo, hi + 1)]
    return name, {"range": [lo, hi]}, {"results": results}, {"primality": "complete factorization"}, EXIT_OK


def _sweep(args):
    bound = _bound(args)
    rep = verify_range(args.dmin, args.dmax, bound, jobs=args.jobs)
    params = {"dmin": args.dmin, "dmax": args.dmax, "oracle_bound": bound}
    prov = {"order_direct": "form class group oracle", "order_formula": "closed formula with unit norms"}
    return "sweep", params, rep, prov, EXIT_OK if rep.ok else EXIT_VIOLATION


HANDLERS = {"quad": _quad, "classify": _classify, "lehmer": _lehmer, "construct": _construct,
            "verify-cert": _verify, "scan": _scan, "sweep": _sweep}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_INPUT
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if getattr(args, "jobs", 1) < 1:
        print("polya: error: --jobs must be >= 1", file=stderr)
        return EXIT_INPUT
    start = time.perf_counter()
    try:
        command, params, result, prov, code = HANDLERS[args.command](args)
    except InputError as exc:
        print(f"polya: input error: {exc}", file=stderr)
        return EXIT_INPUT
    except ResourceLimitError as exc:
        print(f"polya: resource limit: {exc}", file=stderr)
        return EXIT_RESOURCE
    elapsed = (time.perf_counter() - start) * 1000
    env = serialize.envelope(command, params, result, prov, elapsed)
    if args.format == "json":
        stdout.write(serialize.dumps(env) + "\n")
    elif args.format == "text":
        stdout.write(serialize.to_text(env))
    else:
        text = serialize.scan_csv(command, env["result"])
        if text is None:
            print(f"polya: error: csv output is only available for scan commands, not {command!r}",
                  file=stderr)
            return EXIT_INPUT
        stdout.write(text)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
