"""Empirical comparison of the two solution families.

The scalar family (components indexed by points) and the rank-one tensor
family with all weights 1 solve the same system up to a gauge factor.  The
gauge is not hard-coded anywhere; this module searches for it at given
parameters: a unit rescaling lambda -> c lambda and a polynomial G(z, lambda)
with

    I_tensor[1_i] == G * I_scalar[i](z, c lambda)   mod p^s   for all i.

The search result (found or not) is itself the deliverable; a failed search
returns a report with found=False rather than raising.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .certificate import SolutionCertificate
from .hyper import HyperParams, construct_solution
from .mpoly import LAMBDA, MultiPoly
from .padic import NotAUnit, ParameterError, RingParams
from .sl2 import Sl2Params, basis_indices, construct_solution_sl2


def rescale_lambda(poly: MultiPoly, c: int) -> MultiPoly:
    """P(..., lambda) -> P(..., c lambda)."""
    ring = poly.ring
    if LAMBDA not in poly.vars:
        return poly
    i = poly.vars.index(LAMBDA)
    out = {}
    for e, coeff in poly.terms.items():
        out[e] = ring.raw_mul(coeff, ring.raw_from_int(pow(c, e[i], ring.modulus)))
    return MultiPoly.from_dict(ring, poly.vars, out)


def divide_exact(num: MultiPoly, den: MultiPoly):
    """Quotient num/den when den divides num exactly and den's lex-leading
    coefficient is a unit; None otherwise."""
    ring = num.ring
    if den.is_zero():
        raise ParameterError("division by the zero polynomial")
    if num.is_zero():
        return MultiPoly.zero(ring)
    vars = tuple(sorted(set(num.vars) | set(den.vars)))
    den_terms = den._aligned_dict(vars)
    lead_den = max(den_terms)
    try:
        inv_lead = ring.raw_inv(den_terms[lead_den])
    except NotAUnit:
        return None
    quotient = {}
    rem = dict(num._aligned_dict(vars))
    while rem:
        lead = max(rem)
        exp = tuple(a - b for a, b in zip(lead, lead_den))
        if any(e < 0 for e in exp):
            return None
        q = ring.raw_mul(rem[lead], inv_lead)
        quotient[exp] = q
        for e, c in den_terms.items():
            tgt = tuple(a + b for a, b in zip(exp, e))
            val = ring.raw_sub(rem.get(tgt, ring.raw_zero()), ring.raw_mul(q, c))
            if ring.raw_is_zero(val):
                rem.pop(tgt, None)
            else:
                rem[tgt] = val
    return MultiPoly.from_dict(ring, vars, quotient)


@dataclass
class GaugeReport:
    found: bool
    lambda_scale: int | None = None
    gauge: MultiPoly | None = None
    tried: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def summary(self) -> str:
        if self.found:
            return (
                f"gauge found: lambda scale c = {self.lambda_scale}, "
                f"gauge polynomial with {len(self.gauge)} terms"
            )
        return f"no gauge found (tried lambda scales {self.tried})"


def _component_pairs(scalar_cert: SolutionCertificate, tensor_cert: SolutionCertificate):
    """Align scalar component i with the tensor basis index 1_i."""
    params = tensor_cert.params
    order = basis_indices(params.m_vec, params.k)
    pairs = []
    for i in range(1, params.n + 1):
        unit = tuple(1 if s == i - 1 else 0 for s in range(params.n))
        pairs.append((scalar_cert.component(i), tensor_cert.component(order.index(unit) + 1)))
    return pairs


def gauge_search(
    scalar_cert: SolutionCertificate, tensor_cert: SolutionCertificate
) -> GaugeReport:
    ring = scalar_cert.ring
    if ring != tensor_cert.ring:
        raise ParameterError("certificates disagree on the ring")
    pairs = _component_pairs(scalar_cert, tensor_cert)
    report = GaugeReport(False)
    base = next((h for h, t in pairs if not h.is_zero()), None)
    if base is None:
        report.notes.append("scalar certificate is zero; gauge underdetermined")
        return report
    for c in range(1, ring.modulus):
        if c % ring.p == 0:
            continue
        report.tried.append(c)
        rescaled = [(rescale_lambda(h, c), t) for h, t in pairs]
        anchor = next((pair for pair in rescaled if not pair[0].is_zero()))
        gauge = divide_exact(anchor[1], anchor[0])
        if gauge is None:
            continue
        if all(gauge * h == t for h, t in rescaled):
            report.found = True
            report.lambda_scale = c
            report.gauge = gauge
            report.notes.append("verified on every component, exact mod p^s")
            return report
    return report


def default_gauge_case(p: int = 5, s: int = 1):
    """The standard small comparison point: three weight-1 points, one
    integration variable, kappa = 2 on both sides."""
    ring = RingParams(p, s)
    scalar = construct_solution(HyperParams(ring, g=1, ell=1))
    tensor = construct_solution_sl2(Sl2Params(ring, (1, 1, 1), 1, 2))
    return gauge_search(scalar, tensor)
