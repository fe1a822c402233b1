"""A scalar difference ("baby qKZ") equation and its polynomial solution.

The master polynomial is

    Phi_{r,s}(t, z, lambda)
        = E_{r,s}(p^r lambda t) (t - z - 1)_{(p^s-1)/2} (t - z - 1)_{(p^s+1)/2},

with (x)_m = x (x-1) ... (x-m+1).  Expanding in the Pochhammer basis
(t)_d and picking the coefficient at d = p^s - 1 gives a polynomial
I(z, lambda) satisfying

    E_{r,s}(p^r lambda) I(z-1, lambda) = I(z, lambda)   mod p^s,

verified here as an exact polynomial identity with lambda formal.
"""

from __future__ import annotations

from dataclasses import dataclass

from .certificate import ResidualReport, SolutionCertificate
from .mpoly import LAMBDA, MultiPoly, to_pochhammer_basis
from .padic import ParameterError, RingParams
from .truncexp import trunc_exp_poly

TVAR = "t"
ZVAR = "z"


@dataclass(frozen=True)
class QkzParams:
    ring: RingParams


def _shifted_pochhammer(ring: RingParams, m: int) -> MultiPoly:
    """(t - z - 1)_m = prod_{i=1}^m (t - z - i)."""
    acc = MultiPoly.const(ring, 1)
    for i in range(1, m + 1):
        acc = acc * MultiPoly.linear(ring, {TVAR: 1, ZVAR: -1}, -i)
    return acc


def qkz_master(params: QkzParams) -> MultiPoly:
    ring = params.ring
    arg = MultiPoly.variable(ring, LAMBDA) * MultiPoly.variable(ring, TVAR)
    half = (ring.modulus - 1) // 2
    return (
        trunc_exp_poly(arg, ring)
        * _shifted_pochhammer(ring, half)
        * _shifted_pochhammer(ring, half + 1)
    )


def construct_qkz_solution(params: QkzParams) -> SolutionCertificate:
    """Coefficient of (t)_{p^s - 1} in the Pochhammer expansion of the
    master polynomial; a single-component certificate in z and lambda."""
    ring = params.ring
    expansion = to_pochhammer_basis(qkz_master(params), TVAR)
    comp = expansion.coefficient(ring.modulus - 1)
    return SolutionCertificate("qkz", ring, params, ((1, comp),))


def verify_qkz(cert: SolutionCertificate, params: QkzParams = None) -> ResidualReport:
    """Residual E_{r,s}(p^r lambda) I(z-1, lambda) - I(z, lambda)."""
    if cert.family != "qkz":
        raise ParameterError(f"expected a qkz certificate, got {cert.family}")
    ring = cert.ring
    comp = cert.component(1)
    exp_lambda = trunc_exp_poly(MultiPoly.variable(ring, LAMBDA), ring)
    shifted = comp.substitute(ZVAR, MultiPoly.linear(ring, {ZVAR: 1}, -1))
    report = ResidualReport("qkz")
    report.add("difference equation", exp_lambda * shifted - comp)
    return report
