"""Truncated exponential polynomials.

``exp(p^r * A)`` agrees mod p^s with the polynomial
``sum_{k=0}^{d} (p^{kr}/k!) A^k`` where ``d`` is the degree bound below: the
tail coefficients all have p-adic valuation >= s.
"""

from __future__ import annotations

from .mpoly import MultiPoly
from .padic import ParameterError, RamifiedElem, RingParams, p_power_over_factorial


def degree_bound(ring: RingParams) -> int:
    """floor(s(p-1) / (r(p-1)-1)) + 1, the truncation degree d(r, s)."""
    num = ring.s * (ring.p - 1) * ring.r_den
    den = ring.r_num * (ring.p - 1) - ring.r_den
    if den <= 0:
        raise ParameterError("degree bound needs r > 1/(p-1)")
    return num // den + 1


def exp_coefficients(ring: RingParams) -> list[RamifiedElem]:
    """The exact coefficients p^{kr}/k! for k = 0..d(r, s)."""
    return [p_power_over_factorial(k, ring) for k in range(degree_bound(ring) + 1)]


def trunc_exp_poly(arg: MultiPoly, ring: RingParams) -> MultiPoly:
    """The truncated exponential at argument ``p^r * arg``.

    The caller passes the content A multiplying p^r (e.g. lambda*t); the
    power of p is folded into the coefficients p^{kr}/k!.
    """
    acc = MultiPoly.const(ring, 1)
    power = MultiPoly.const(ring, 1)
    for k, c in enumerate(exp_coefficients(ring)):
        if k > 0:
            power = power * arg
            acc = acc + power.scale(c.raw)
    return acc
