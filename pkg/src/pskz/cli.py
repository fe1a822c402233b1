"""Command-line front end.

    pskz construct {hyper,sl2,qkz} --p P --s S [--r A[/B]] <family flags> --out FILE
    pskz verify FILE [--properties] [--json] [--full]
    pskz sweep {hyper,sl2,qkz} <comma ranges> --out-dir DIR
    pskz exp-table --p P --s S [--r A[/B]]
    pskz gauge-check [--p P] [--s S]

Exit codes: 0 all residuals zero, 1 a residual is nonzero, 2 usage or
format error.  PSKZ_THREADS caps sweep parallelism.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from itertools import product

from . import certio
from .certificate import ResidualEntry, ResidualReport, SolutionCertificate
from .gauge import default_gauge_case
from .hyper import (
    HyperParams,
    construct_solution,
    independence_check,
    lambda_zero_sum,
    vanishing_check,
    verify_dynamical,
    verify_kz,
)
from .padic import ParameterError, RingParams
from .qkz import QkzParams, construct_qkz_solution, verify_qkz
from .sl2 import Sl2Params, construct_solution_sl2, verify_sl2
from .truncexp import degree_bound, exp_coefficients

USAGE_ERROR = 2


class UsageError(Exception):
    pass


def _parse_r(text: str):
    parts = text.split("/")
    if len(parts) == 1:
        return int(parts[0]), 1
    if len(parts) == 2:
        return int(parts[0]), int(parts[1])
    raise UsageError(f"cannot parse r = {text!r}; expected A or A/B")


def _parse_int_list(text: str):
    try:
        return [int(x) for x in text.split(",") if x != ""]
    except ValueError:
        raise UsageError(f"cannot parse integer list {text!r}")


def _ring_from_args(args) -> RingParams:
    r_num, r_den = _parse_r(args.r)
    return RingParams(args.p, args.s, r_num, r_den)


def _build_params(family: str, args):
    ring = _ring_from_args(args)
    if family == "hyper":
        return HyperParams(ring, args.g, args.ell)
    if family == "sl2":
        m_vec = tuple(_parse_int_list(args.m))
        ell = tuple(_parse_int_list(args.ell)) if args.ell else None
        kappa_num, kappa_den = _parse_r(args.kappa)
        overrides = {}
        if args.M_override:
            try:
                raw = json.loads(args.M_override)
                overrides = {
                    "M_points": tuple(raw["points"]),
                    "M_pairs": tuple(raw["pairs"]),
                    "M_zero": int(raw["zero"]),
                }
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise UsageError(f"bad --M-override: {exc}")
        return Sl2Params(ring, m_vec, args.k, kappa_num, kappa_den, ell, **overrides)
    return QkzParams(ring)


def _construct(family: str, params) -> SolutionCertificate:
    if family == "hyper":
        return construct_solution(params)
    if family == "sl2":
        return construct_solution_sl2(params)
    return construct_qkz_solution(params)


def _verify_reports(cert: SolutionCertificate, force_full: bool = False):
    if cert.family == "hyper":
        return [verify_kz(cert, force_full), verify_dynamical(cert, force_full)]
    if cert.family == "sl2":
        return [verify_sl2(cert)]
    return [verify_qkz(cert)]


def cmd_construct(args) -> int:
    params = _build_params(args.family, args)
    cert = _construct(args.family, params)
    certio.write_certificate(cert, args.out)
    degrees = [poly.total_degree() for _, poly in cert.components]
    print(
        f"{args.family}: wrote {len(cert.components)} components to {args.out}; "
        f"max total degree {max(degrees)}"
    )
    return 0


def cmd_verify(args) -> int:
    try:
        cert = certio.read_certificate(args.file)
    except FileNotFoundError:
        raise UsageError(f"no such file: {args.file}")
    except certio.CertificateFormatError as exc:
        raise UsageError(f"malformed certificate: {exc}")
    reports = _verify_reports(cert, args.full)
    if args.properties and cert.family == "hyper":
        extra = ResidualReport("hyper")
        extra.add("sum of components at lambda = 0", lambda_zero_sum(cert))
        reports.append(extra)
        vr = vanishing_check(cert.params)
        if vr.applicable:
            print(f"vanishing range check ({vr.inequality}): " + ("pass" if vr.ok else "FAIL"))
            if not vr.ok:
                reports.append(_fail_note("vanishing range"))
        if cert.ring.modulus > 2 * cert.params.g + 1:
            ind = independence_check(cert.params)
            print(
                f"independence: rank {ind.rank}, minor columns {ind.minor_columns}, "
                f"witness {ind.witness_z} -> {ind.witness_value}"
            )
            if not ind.ok:
                reports.append(_fail_note("independence"))
    ok = all(rep.ok for rep in reports)
    if args.json:
        print(json.dumps([rep.to_dict() for rep in reports], indent=1, sort_keys=True))
    else:
        for rep in reports:
            print(rep.summary())
    return 0 if ok else 1


def _fail_note(label: str) -> ResidualReport:
    rep = ResidualReport("hyper")
    rep.notes.append(f"{label} check failed")
    rep.entries.append(ResidualEntry(label, None, False))
    return rep


def cmd_sweep(args) -> int:
    ps = _parse_int_list(args.p)
    ss = _parse_int_list(args.s)
    rs = [(r.split("/") + ["1"])[:2] for r in args.r.split(",")]
    rs = [(int(a), int(b)) for a, b in rs]
    if not ps or not ss or not rs:
        raise UsageError("empty parameter range")
    cases = []
    if args.family == "hyper":
        gs = _parse_int_list(args.g)
        ells = _parse_int_list(args.ell) if args.ell else None
        if not gs:
            raise UsageError("empty parameter range")
        for p, s, (rn, rd), g in product(ps, ss, rs, gs):
            for ell in ells if ells is not None else range(1, g + 1):
                cases.append((f"p{p}_s{s}_r{rn}-{rd}_g{g}_ell{ell}",
                              HyperParams(RingParams(p, s, rn, rd), g, ell)))
    elif args.family == "sl2":
        m_vec = tuple(_parse_int_list(args.m))
        ks = _parse_int_list(args.k)
        kappas = [_parse_r(t) for t in args.kappa.split(",")]
        for p, s, (rn, rd), k, (kn, kd) in product(ps, ss, rs, ks, kappas):
            cases.append((f"p{p}_s{s}_r{rn}-{rd}_k{k}_kappa{kn}-{kd}",
                          Sl2Params(RingParams(p, s, rn, rd), m_vec, k, kn, kd)))
    else:
        for p, s, (rn, rd) in product(ps, ss, rs):
            cases.append((f"p{p}_s{s}_r{rn}-{rd}", QkzParams(RingParams(p, s, rn, rd))))
    if not cases:
        raise UsageError("empty parameter range")

    os.makedirs(args.out_dir, exist_ok=True)
    threads = max(1, int(os.environ.get("PSKZ_THREADS", "1")))

    def run(case):
        name, params = case
        cert = _construct(args.family, params)
        reports = _verify_reports(cert)
        path = os.path.join(args.out_dir, f"{args.family}_{name}.json")
        certio.write_certificate(cert, path)
        return {
            "case": name,
            "file": os.path.basename(path),
            "verified": all(rep.ok for rep in reports),
            "zero_certificate": cert.is_zero(),
        }

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(run, cases))
    else:
        rows = [run(case) for case in cases]

    index_path = os.path.join(args.out_dir, "index.json")
    payload = json.dumps(
        {"family": args.family, "results": rows}, indent=1, sort_keys=True
    ) + "\n"
    tmp = index_path + ".tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(payload)
    os.replace(tmp, index_path)

    failed = [row for row in rows if not row["verified"]]
    for row in rows:
        status = "pass" if row["verified"] else "FAIL"
        note = " zero certificate (expected)" if row["zero_certificate"] else ""
        print(f"{row['case']}: {status}{note}")
    print(f"{len(rows) - len(failed)}/{len(rows)} verified; index at {index_path}")
    return 0 if not failed else 1


def cmd_exp_table(args) -> int:
    ring = _ring_from_args(args)
    d = degree_bound(ring)
    print(f"degree bound d = {d}")
    for k, c in enumerate(exp_coefficients(ring)):
        print(f"k={k}: {c.raw}")
    return 0


def cmd_gauge_check(args) -> int:
    report = default_gauge_case(args.p, args.s)
    print(report.summary())
    for note in report.notes:
        print(f"  note: {note}")
    if report.found and args.show_gauge:
        print(report.gauge)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pskz",
        description="Construct and verify exact polynomial solutions mod p^s.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def ring_flags(p):
        p.add_argument("--p", type=int, required=True, help="odd prime")
        p.add_argument("--s", type=int, required=True, help="power of p")
        p.add_argument("--r", default="1", help="exponent scale r as A or A/B")

    con = sub.add_parser("construct", help="construct a solution certificate")
    consub = con.add_subparsers(dest="family", required=True)
    hy = consub.add_parser("hyper")
    ring_flags(hy)
    hy.add_argument("--g", type=int, required=True)
    hy.add_argument("--ell", type=int, default=1)
    sl = consub.add_parser("sl2")
    ring_flags(sl)
    sl.add_argument("--kappa", required=True, help="kappa as A or A/B")
    sl.add_argument("--m", required=True, help="comma list of weights")
    sl.add_argument("--k", type=int, required=True)
    sl.add_argument("--ell", default="", help="comma list, one per t variable")
    sl.add_argument("--M-override", dest="M_override", default="",
                    help='JSON {"points": [...], "pairs": [...], "zero": N}')
    qk = consub.add_parser("qkz")
    ring_flags(qk)
    for p_ in (hy, sl, qk):
        p_.add_argument("--out", required=True)

    ver = sub.add_parser("verify", help="verify a certificate file")
    ver.add_argument("file")
    ver.add_argument("--properties", action="store_true",
                     help="hyper only: also check sum/vanishing/independence")
    ver.add_argument("--json", action="store_true")
    ver.add_argument("--full", action="store_true",
                     help="hyper only: skip the symmetry reduction")

    sw = sub.add_parser("sweep", help="construct+verify a parameter matrix")
    swsub = sw.add_subparsers(dest="family", required=True)
    hysw = swsub.add_parser("hyper")
    hysw.add_argument("--p", required=True)
    hysw.add_argument("--s", required=True)
    hysw.add_argument("--r", default="1")
    hysw.add_argument("--g", required=True)
    hysw.add_argument("--ell", default="")
    slsw = swsub.add_parser("sl2")
    slsw.add_argument("--p", required=True)
    slsw.add_argument("--s", required=True)
    slsw.add_argument("--r", default="1")
    slsw.add_argument("--m", required=True)
    slsw.add_argument("--k", required=True)
    slsw.add_argument("--kappa", required=True)
    qksw = swsub.add_parser("qkz")
    qksw.add_argument("--p", required=True)
    qksw.add_argument("--s", required=True)
    qksw.add_argument("--r", default="1")
    for p_ in (hysw, slsw, qksw):
        p_.add_argument("--out-dir", dest="out_dir", required=True)

    et = sub.add_parser("exp-table", help="print the truncated exponential")
    ring_flags(et)

    gc = sub.add_parser("gauge-check", help="search for the inter-family gauge")
    gc.add_argument("--p", type=int, default=5)
    gc.add_argument("--s", type=int, default=1)
    gc.add_argument("--show-gauge", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    handlers = {
        "construct": cmd_construct,
        "verify": cmd_verify,
        "sweep": cmd_sweep,
        "exp-table": cmd_exp_table,
        "gauge-check": cmd_gauge_check,
    }
    try:
        return handlers[args.command](args)
    except (UsageError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
