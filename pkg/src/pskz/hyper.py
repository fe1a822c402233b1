"""The hyperelliptic family: 2g+1 points, one integration variable.

The solution vector is read off the expansion of

    Psi_i = E(p^r lambda t) * (t - z_i)^{h-1} * prod_{j != i} (t - z_j)^h,
    h = (p^s - 1)/2,

as the coefficient of t^{ell p^s - 1}.  The verifiers check the
cleared-denominator KZ and dynamical residuals with lambda formal.

Both construction and verification exploit that the integrand is symmetric
in the z's: component i is component 1 with z_1 and z_i swapped.  The
verifier only relies on this after explicitly checking the equivariance of
the certificate at hand, and falls back to the full residual matrix
otherwise (or when forced).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .certificate import ResidualReport, SolutionCertificate
from .mpoly import LAMBDA, MultiPoly, binomial_power, truncated_product
from .padic import ParameterError, RingParams, embed_rational
from .truncexp import degree_bound, exp_coefficients, trunc_exp_poly

TVAR = "t"


def zvar(i: int) -> str:
    return f"z_{i}"


@dataclass(frozen=True)
class HyperParams:
    ring: RingParams
    g: int
    ell: int = 1

    def __post_init__(self):
        if self.g < 1:
            raise ParameterError("genus g must be a positive integer")
        if self.ell < 1:
            raise ParameterError("ell must be a positive integer")

    @property
    def n(self) -> int:
        return 2 * self.g + 1

    @property
    def half(self) -> int:
        return (self.ring.modulus - 1) // 2

    @property
    def target_degree(self) -> int:
        return self.ell * self.ring.modulus - 1


def master_poly(params: HyperParams) -> MultiPoly:
    """Phi^o = prod_i (t - z_i)^{(p^s-1)/2}, fully expanded."""
    ring = params.ring
    factors = [binomial_power(ring, TVAR, zvar(i), params.half) for i in range(1, params.n + 1)]
    return truncated_product(factors)


def psi_vector(params: HyperParams) -> list[MultiPoly]:
    """The full integrand components E(p^r lambda t) * Phi^o / (t - z_i).

    The division is an exponent decrement in the factored form; nothing is
    ever divided.  Intended for desk-scale parameters; construct_solution
    extracts coefficients without this full expansion.
    """
    ring = params.ring
    exp_factor = trunc_exp_poly(
        MultiPoly.variable(ring, LAMBDA) * MultiPoly.variable(ring, TVAR), ring
    )
    out = []
    for i in range(1, params.n + 1):
        factors = [
            binomial_power(ring, TVAR, zvar(j), params.half - (1 if j == i else 0))
            for j in range(1, params.n + 1)
        ]
        out.append(truncated_product(factors) * exp_factor)
    return out


def _first_component(params: HyperParams) -> MultiPoly:
    """I_1 = sum_k (p^{kr}/k!) lambda^k * [t^{D-k}] Phi^o/(t - z_1)."""
    ring = params.ring
    coeffs = exp_coefficients(ring)
    targets = [params.target_degree - k for k in range(len(coeffs)) if params.target_degree - k >= 0]
    factors = [
        binomial_power(ring, TVAR, zvar(j), params.half) for j in range(2, params.n + 1)
    ]
    factors.append(binomial_power(ring, TVAR, zvar(1), params.half - 1))
    prod_poly = truncated_product(factors, {TVAR: (min(targets), max(targets))})
    acc = MultiPoly.zero(ring)
    for k, c in enumerate(coeffs):
        d = params.target_degree - k
        if d < 0:
            continue
        slice_k = prod_poly.coefficient_of(TVAR, d)
        if slice_k.is_zero():
            continue
        acc = acc + slice_k * MultiPoly.monomial(ring, {LAMBDA: k}, c.raw)
    return acc


def construct_solution(params: HyperParams) -> SolutionCertificate:
    """The p^s-hypergeometric solution certificate for the given ell."""
    first = _first_component(params)
    comps = [(1, first)]
    for i in range(2, params.n + 1):
        comps.append((i, first.relabel({zvar(1): zvar(i), zvar(i): zvar(1)})))
    return SolutionCertificate("hyper", params.ring, params, tuple(comps))


def _require_family(cert: SolutionCertificate, family: str):
    if cert.family != family:
        raise ParameterError(f"expected a {family} certificate, got {cert.family}")


def _is_equivariant(cert: SolutionCertificate) -> bool:
    """True iff swapping z_a and z_b swaps components a and b, for a
    generating set of transpositions."""
    n = cert.params.n
    comp = {i: poly for i, poly in cert.components}
    for i in range(2, n + 1):
        swapped = comp[1].relabel({zvar(1): zvar(i), zvar(i): zvar(1)})
        if swapped != comp[i]:
            return False
    for a in range(2, n):
        swapped = comp[1].relabel({zvar(a): zvar(a + 1), zvar(a + 1): zvar(a)})
        if swapped != comp[1]:
            return False
    return True


def _zdiff(ring: RingParams, i: int, j: int) -> MultiPoly:
    return MultiPoly.linear(ring, {zvar(i): 1, zvar(j): -1})


def _prod_zdiff(ring: RingParams, i: int, skip, n: int) -> MultiPoly:
    acc = MultiPoly.const(ring, 1)
    for m in range(1, n + 1):
        if m == i or m in skip:
            continue
        acc = acc * _zdiff(ring, i, m)
    return acc


def verify_kz(cert: SolutionCertificate, force_full: bool = False) -> ResidualReport:
    """Cleared residuals of the rescaled KZ equations, lambda formal.

    For i != j:  R_ij = (z_i - z_j) dI_j/dz_i - (1/2)(I_i - I_j).
    For each i:  R_i  = prod_{j != i}(z_i - z_j) (dI_i/dz_i - p^r lambda I_i)
                        + (1/2) sum_{j != i} prod_{m != i,j}(z_i - z_m) (I_i - I_j).
    """
    _require_family(cert, "hyper")
    ring = cert.ring
    n = cert.params.n
    comp = {i: poly for i, poly in cert.components}
    inv2 = embed_rational(1, 2, ring).value
    pr = ring.raw_pi_power(ring.r_num)
    report = ResidualReport("hyper")

    use_sym = not force_full and _is_equivariant(cert)
    if use_sym:
        report.symmetry_reduced = True
        report.notes.append(
            "certificate is S_n-equivariant; residual orbits reduced to representatives"
        )
    pairs = [(1, 2)] if use_sym and n >= 2 else [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    singles = [1] if use_sym else list(range(1, n + 1))

    for i, j in pairs:
        r = _zdiff(ring, i, j) * comp[j].partial_derivative(zvar(i)) - (comp[i] - comp[j]).scale(inv2)
        report.add(f"KZ off-diagonal (i={i}, j={j})", r)
    for i in singles:
        lam_term = comp[i].partial_derivative(zvar(i)) - MultiPoly.monomial(ring, {LAMBDA: 1}, pr) * comp[i]
        r = _prod_zdiff(ring, i, (), n) * lam_term
        for j in range(1, n + 1):
            if j == i:
                continue
            r = r + (_prod_zdiff(ring, i, (j,), n) * (comp[i] - comp[j])).scale(inv2)
        report.add(f"KZ diagonal (i={i})", r)
    return report


def verify_dynamical(cert: SolutionCertificate, force_full: bool = False) -> ResidualReport:
    """Cleared residual of the rescaled dynamical equation, valid for unit
    lambda:  D_i = 2 lambda dI_i/dlambda - 2 p^r lambda z_i I_i - sum_j I_j.
    """
    _require_family(cert, "hyper")
    ring = cert.ring
    n = cert.params.n
    comp = {i: poly for i, poly in cert.components}
    pr = ring.raw_pi_power(ring.r_num)
    report = ResidualReport("hyper")

    use_sym = not force_full and _is_equivariant(cert)
    if use_sym:
        report.symmetry_reduced = True
        report.notes.append(
            "certificate is S_n-equivariant; residual orbits reduced to representatives"
        )
    total = MultiPoly.zero(ring)
    for j in range(1, n + 1):
        total = total + comp[j]
    lam = MultiPoly.variable(ring, LAMBDA)
    for i in [1] if use_sym else range(1, n + 1):
        r = (
            (lam * comp[i].partial_derivative(LAMBDA)).scale(2)
            - (MultiPoly.monomial(ring, {LAMBDA: 1, zvar(i): 1}, pr) * comp[i]).scale(2)
            - total
        )
        report.add(f"dynamical (i={i})", r)
    return report


def lambda_zero_sum(cert: SolutionCertificate) -> MultiPoly:
    """sum_j I_j(z, 0); zero mod p^s by the lambda-independent sum identity."""
    _require_family(cert, "hyper")
    acc = MultiPoly.zero(cert.ring)
    for _, poly in cert.components:
        acc = acc + poly.substitute(LAMBDA, 0)
    return acc


@dataclass
class VanishingResult:
    applicable: bool
    inequality: str
    zero_by_ell: dict

    @property
    def ok(self) -> bool:
        return not self.applicable or all(self.zero_by_ell.values())


def vanishing_check(params: HyperParams, ells=None) -> VanishingResult:
    """I^ell must vanish for ell > g when p^s + 2g - 1 > s(2p-2)/(p-2)."""
    ring, g = params.ring, params.g
    lhs = (ring.modulus + 2 * g - 1) * (ring.p - 2)
    rhs = 2 * ring.s * (ring.p - 1)
    desc = f"(p^s + 2g - 1)(p - 2) = {lhs} vs 2s(p - 1) = {rhs}"
    if lhs <= rhs:
        return VanishingResult(False, desc, {})
    ells = list(ells) if ells is not None else [g + 1, g + 2, g + 3]
    zero = {}
    for ell in ells:
        cert = construct_solution(HyperParams(ring, g, ell))
        zero[ell] = cert.is_zero()
    return VanishingResult(True, desc, zero)


@dataclass
class IndependenceResult:
    ok: bool
    rank: int
    minor_columns: tuple | None = None
    witness_z: dict | None = None
    witness_value: int | None = None


def _det(matrix: list[list[MultiPoly]], ring: RingParams) -> MultiPoly:
    if len(matrix) == 1:
        return matrix[0][0]
    acc = MultiPoly.zero(ring)
    for c in range(len(matrix)):
        sub = [row[:c] + row[c + 1:] for row in matrix[1:]]
        cof = matrix[0][c] * _det(sub, ring)
        acc = acc + (cof if c % 2 == 0 else -cof)
    return acc


def independence_check(params: HyperParams, witness_budget: int = 100_000) -> IndependenceResult:
    """Linear independence over F_p[z] of I^1(z,0), ..., I^g(z,0) mod p.

    Returns the first column set with a nonzero g x g polynomial minor and,
    when the budget allows, a point of F_p^n where that minor is a nonzero
    scalar.
    """
    ring, g, n = params.ring, params.g, params.n
    if ring.modulus <= 2 * g + 1:
        raise ParameterError("independence theorem needs p^s > 2g + 1")
    ring_p = RingParams(ring.p, 1, ring.r_num, ring.r_den)
    rows = []
    for ell in range(1, g + 1):
        cert = construct_solution(HyperParams(ring, g, ell))
        rows.append(
            [cert.component(i).substitute(LAMBDA, 0).reduce_to(ring_p) for i in range(1, n + 1)]
        )
    for cols in combinations(range(n), g):
        minor = _det([[rows[r][c] for c in cols] for r in range(g)], ring_p)
        if minor.is_zero():
            continue
        witness_z = witness_value = None
        zvars = [zvar(i) for i in range(1, n + 1)]
        for count, point in enumerate(product(range(ring.p), repeat=n)):
            if count >= witness_budget:
                break
            assignment = dict(zip(zvars, point))
            value = minor.evaluate(assignment)
            if not value.is_zero():
                witness_z = assignment
                witness_value = value.coeffs[0]
                break
        return IndependenceResult(
            True, g, tuple(c + 1 for c in cols), witness_z, witness_value
        )
    return IndependenceResult(False, 0)
