"""Reading and writing solution certificates as JSON.

Schema "pskz-cert-v1": one file per certificate, with a shared ordered
variable list, per-component term arrays sorted lexicographically by
exponent vector, and coefficients as arrays of decimal strings (length
r_den) so that moduli beyond 2^53 survive any JSON toolchain.  Writes are
atomic (temp file + rename) and byte-deterministic for a given input.
"""

from __future__ import annotations

import json
import os
import tempfile

from .certificate import FAMILIES, SolutionCertificate
from .hyper import HyperParams
from .mpoly import MultiPoly
from .padic import ParameterError, RingParams
from .qkz import QkzParams
from .sl2 import Sl2Params

SCHEMA = "pskz-cert-v1"


class CertificateFormatError(ValueError):
    pass


def _params_to_json(cert: SolutionCertificate) -> dict:
    p = cert.params
    if cert.family == "hyper":
        return {"g": p.g, "ell": p.ell}
    if cert.family == "sl2":
        return {
            "m": list(p.m_vec),
            "k": p.k,
            "kappa_num": p.kappa_num,
            "kappa_den": p.kappa_den,
            "ell": list(p.ell_vec),
            "M_points": list(p.M_points),
            "M_pairs": list(p.M_pairs),
            "M_zero": p.M_zero,
        }
    return {}


def _params_from_json(family: str, ring: RingParams, obj: dict):
    try:
        if family == "hyper":
            return HyperParams(ring, int(obj["g"]), int(obj["ell"]))
        if family == "sl2":
            return Sl2Params(
                ring,
                tuple(obj["m"]),
                int(obj["k"]),
                int(obj["kappa_num"]),
                int(obj["kappa_den"]),
                tuple(obj["ell"]),
                tuple(obj["M_points"]),
                tuple(obj["M_pairs"]),
                int(obj["M_zero"]),
            )
        return QkzParams(ring)
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateFormatError(f"bad params object for family {family}: {exc}")


def _coeff_strings(raw, ring: RingParams) -> list:
    parts = (raw,) if ring.r_den == 1 else raw
    return [str(x % ring.modulus) for x in parts]


def to_json_dict(cert: SolutionCertificate) -> dict:
    ring = cert.ring
    vars = sorted(set().union(*(poly.vars for _, poly in cert.components)) or set())
    comps = []
    for index, poly in cert.components:
        aligned = poly._aligned_dict(vars)
        terms = [
            {"exps": list(e), "coeff": _coeff_strings(aligned[e], ring)}
            for e in sorted(aligned)
        ]
        comps.append({"index": index, "terms": terms})
    return {
        "schema": SCHEMA,
        "family": cert.family,
        "ring": {"p": ring.p, "s": ring.s, "r_num": ring.r_num, "r_den": ring.r_den},
        "params": _params_to_json(cert),
        "vars": vars,
        "components": comps,
    }


def write_certificate(cert: SolutionCertificate, path: str):
    data = json.dumps(to_json_dict(cert), indent=1, sort_keys=True) + "\n"
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".pskz-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def from_json_dict(obj: dict) -> SolutionCertificate:
    if not isinstance(obj, dict) or obj.get("schema") != SCHEMA:
        raise CertificateFormatError(f"expected schema {SCHEMA!r}")
    family = obj.get("family")
    if family not in FAMILIES:
        raise CertificateFormatError(f"unknown family {family!r}")
    try:
        r = obj["ring"]
        ring = RingParams(int(r["p"]), int(r["s"]), int(r["r_num"]), int(r["r_den"]))
    except (KeyError, TypeError, ValueError, ParameterError) as exc:
        raise CertificateFormatError(f"bad ring object: {exc}")
    try:
        params = _params_from_json(family, ring, obj["params"])
    except ParameterError as exc:
        raise CertificateFormatError(str(exc))
    try:
        vars = tuple(obj["vars"])
        comps = []
        for comp in obj["components"]:
            terms = {}
            for term in comp["terms"]:
                exps = tuple(int(x) for x in term["exps"])
                if len(exps) != len(vars):
                    raise CertificateFormatError("exponent arity does not match vars")
                digits = [int(x) for x in term["coeff"]]
                if len(digits) != ring.r_den:
                    raise CertificateFormatError("coefficient arity does not match r_den")
                if any(not 0 <= x < ring.modulus for x in digits):
                    raise CertificateFormatError("coefficient out of reduced range")
                terms[exps] = digits[0] if ring.r_den == 1 else tuple(digits)
            comps.append((int(comp["index"]), MultiPoly.from_dict(ring, vars, terms)))
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateFormatError(f"bad components: {exc}")
    return SolutionCertificate(family, ring, params, tuple(comps))


def read_certificate(path: str) -> SolutionCertificate:
    try:
        with open(path, encoding="utf-8") as handle:
            obj = json.load(handle)
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"not valid JSON: {exc}")
    return from_json_dict(obj)
