"""The sl2 family: tensor products of finite-dimensional modules, Gaudin and
dynamical Hamiltonians, weight functions, and polynomial solutions read off
the master polynomial.

Vectors in the weight space are held as TensorVector: a map from a basis
index J = (j_1..j_n) to a MultiPoly coefficient in z and lambda.  Slot
actions follow the usual conventions

    f . f_J v = sum_s f_{J+1_s} v   (terms with j_s = m_s drop),
    h . f_J v = (|m| - 2|J|) f_J v,
    e . f_J v = sum_s j_s (m_s - j_s + 1) f_{J-1_s} v,

and Omega = e (x) f + f (x) e + (1/2) h (x) h.

The weight functions are computed factorial-free as sums over assignments
of integration variables to points with prescribed fiber sizes, so no
division by j_1! ... j_n! ever happens.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from math import prod as int_prod

from .certificate import ResidualReport, SolutionCertificate
from .mpoly import LAMBDA, MultiPoly, binomial_power, truncated_product
from .padic import ParameterError, RingParams, embed_rational
from .truncexp import degree_bound, exp_coefficients, trunc_exp_poly


def tvar(i: int) -> str:
    return f"t_{i}"


def zvar(i: int) -> str:
    return f"z_{i}"


def _smallest_positive(value_num: int, value_den: int, ring: RingParams) -> int:
    """Smallest positive residue of value_num/value_den mod p^s."""
    res = (value_num * embed_rational(1, value_den, ring).value) % ring.modulus
    return res if res else ring.modulus


@dataclass(frozen=True)
class Sl2Params:
    ring: RingParams
    m_vec: tuple
    k: int
    kappa_num: int
    kappa_den: int = 1
    ell_vec: tuple = None
    M_points: tuple = None  # M_l, one per point
    M_pairs: tuple = None   # M_{ij} for i<j, in combinations order
    M_zero: int = None      # M^0

    def __post_init__(self):
        ring = self.ring
        object.__setattr__(self, "m_vec", tuple(self.m_vec))
        if not self.m_vec or any(m < 1 for m in self.m_vec):
            raise ParameterError("m_vec must be a nonempty tuple of positive integers")
        if self.k < 1:
            raise ParameterError("k must be a positive integer")
        if self.kappa_num % ring.p == 0 or self.kappa_den % ring.p == 0:
            raise ParameterError("p must not divide kappa's numerator or denominator")
        ell = self.ell_vec if self.ell_vec is not None else (1,) * self.k
        object.__setattr__(self, "ell_vec", tuple(ell))
        if len(self.ell_vec) != self.k or any(e < 1 for e in self.ell_vec):
            raise ParameterError("ell_vec needs k positive integers")
        n = self.n
        # -m_l/kappa, m_i m_j/(2 kappa), 2/kappa as positive representatives
        pts = self.M_points if self.M_points is not None else tuple(
            _smallest_positive(-m * self.kappa_den, self.kappa_num, ring) for m in self.m_vec
        )
        prs = self.M_pairs if self.M_pairs is not None else tuple(
            _smallest_positive(self.m_vec[i] * self.m_vec[j] * self.kappa_den, 2 * self.kappa_num, ring)
            for i, j in combinations(range(n), 2)
        )
        mz = self.M_zero if self.M_zero is not None else _smallest_positive(
            2 * self.kappa_den, self.kappa_num, ring
        )
        object.__setattr__(self, "M_points", tuple(pts))
        object.__setattr__(self, "M_pairs", tuple(prs))
        object.__setattr__(self, "M_zero", mz)
        self._validate_exponents()

    def _validate_exponents(self):
        ring, n = self.ring, self.n
        mod = ring.modulus
        inv_kappa = embed_rational(self.kappa_den, self.kappa_num, ring).value
        if len(self.M_points) != n or len(self.M_pairs) != n * (n - 1) // 2:
            raise ParameterError("wrong number of exponent representatives")
        for l, M in enumerate(self.M_points):
            if M < 1:
                raise ParameterError("point exponents must be positive")
            if (M + self.m_vec[l] * inv_kappa) % mod:
                raise ParameterError(f"M_points[{l}] is not congruent to -m_{l+1}/kappa")
        inv2 = embed_rational(1, 2, ring).value
        for (i, j), M in zip(combinations(range(n), 2), self.M_pairs):
            if M < 1 or (M - self.m_vec[i] * self.m_vec[j] * inv2 * inv_kappa) % mod:
                raise ParameterError(f"M_pairs[{i},{j}] is not congruent to m_i m_j/(2 kappa)")
        if self.M_zero < 1 or (self.M_zero - 2 * inv_kappa) % mod:
            raise ParameterError("M_zero is not congruent to 2/kappa")

    @property
    def n(self) -> int:
        return len(self.m_vec)

    @property
    def weight(self) -> int:
        return sum(self.m_vec) - 2 * self.k

    def pair_exponent(self, i: int, j: int) -> int:
        """M_{ij} for 1-based i < j."""
        lookup = dict(zip(combinations(range(1, self.n + 1), 2), self.M_pairs))
        return lookup[(i, j)] if i < j else lookup[(j, i)]


def basis_indices(m_vec, k: int) -> list:
    """All J with |J| = k and 0 <= j_s <= m_s, in lexicographic order."""
    out = []
    ranges = [range(min(m, k) + 1) for m in m_vec]
    for J in product(*ranges):
        if sum(J) == k:
            out.append(J)
    return out


@dataclass
class TensorVector:
    """Element of the weight space: basis index J -> MultiPoly coefficient."""

    params: Sl2Params
    entries: dict = field(default_factory=dict)

    def _cleaned(self):
        return {J: poly for J, poly in self.entries.items() if not poly.is_zero()}

    def component(self, J) -> MultiPoly:
        return self.entries.get(tuple(J), MultiPoly.zero(self.params.ring))

    def is_zero(self) -> bool:
        return all(poly.is_zero() for poly in self.entries.values())

    def add_term(self, J, poly: MultiPoly):
        J = tuple(J)
        if J in self.entries:
            self.entries[J] = self.entries[J] + poly
        else:
            self.entries[J] = poly

    def __add__(self, other: "TensorVector") -> "TensorVector":
        out = TensorVector(self.params, dict(self.entries))
        for J, poly in other.entries.items():
            out.add_term(J, poly)
        return out

    def __sub__(self, other: "TensorVector") -> "TensorVector":
        return self + other.scale(-1)

    def scale(self, c) -> "TensorVector":
        return TensorVector(
            self.params, {J: poly.scale(c) for J, poly in self.entries.items()}
        )

    def times_poly(self, q: MultiPoly) -> "TensorVector":
        return TensorVector(
            self.params, {J: poly * q for J, poly in self.entries.items()}
        )

    def map_polys(self, fn) -> "TensorVector":
        return TensorVector(self.params, {J: fn(poly) for J, poly in self.entries.items()})

    def __eq__(self, other):
        if not isinstance(other, TensorVector):
            return NotImplemented
        return self.params == other.params and self._cleaned() == other._cleaned()


def _check_slot(params: Sl2Params, i: int):
    if not 1 <= i <= params.n:
        raise ParameterError(f"slot {i} out of range 1..{params.n}")


def act_f(i: int, v: TensorVector) -> TensorVector:
    _check_slot(v.params, i)
    m = v.params.m_vec[i - 1]
    out = TensorVector(v.params)
    for J, poly in v.entries.items():
        if J[i - 1] < m:
            out.add_term(J[: i - 1] + (J[i - 1] + 1,) + J[i:], poly)
    return out


def act_h(i: int, v: TensorVector) -> TensorVector:
    _check_slot(v.params, i)
    m = v.params.m_vec[i - 1]
    out = TensorVector(v.params)
    for J, poly in v.entries.items():
        out.add_term(J, poly.scale(m - 2 * J[i - 1]))
    return out


def act_e(i: int, v: TensorVector) -> TensorVector:
    _check_slot(v.params, i)
    m = v.params.m_vec[i - 1]
    out = TensorVector(v.params)
    for J, poly in v.entries.items():
        j = J[i - 1]
        if j > 0:
            out.add_term(J[: i - 1] + (j - 1,) + J[i:], poly.scale(j * (m - j + 1)))
    return out


def casimir_apply(i: int, j: int, v: TensorVector) -> TensorVector:
    """Omega^{(i,j)} = e^{(i)}f^{(j)} + f^{(i)}e^{(j)} + (1/2) h^{(i)}h^{(j)}."""
    if i == j:
        raise ParameterError("Casimir acts in two distinct slots")
    inv2 = embed_rational(1, 2, v.params.ring).value
    return (
        act_e(i, act_f(j, v))
        + act_f(i, act_e(j, v))
        + act_h(i, act_h(j, v)).scale(inv2)
    )


def _zdiff(ring: RingParams, i: int, j: int) -> MultiPoly:
    return MultiPoly.linear(ring, {zvar(i): 1, zvar(j): -1})


def gaudin_apply(i: int, v: TensorVector, params: Sl2Params) -> TensorVector:
    """Pi_{j != i}(z_i - z_j) H_i v for the rescaled Hamiltonian
    H_i = p^r (lambda/2) h^{(i)} + sum_{j != i} Omega^{(i,j)}/(z_i - z_j)."""
    _check_slot(params, i)
    ring, n = params.ring, params.n
    half_pr_lam = MultiPoly.monomial(
        ring, {LAMBDA: 1}, ring.raw_mul(ring.raw_pi_power(ring.r_num), embed_rational(1, 2, ring).value)
    )
    all_but_i = MultiPoly.const(ring, 1)
    for j in range(1, n + 1):
        if j != i:
            all_but_i = all_but_i * _zdiff(ring, i, j)
    out = act_h(i, v).times_poly(all_but_i * half_pr_lam)
    for j in range(1, n + 1):
        if j == i:
            continue
        others = MultiPoly.const(ring, 1)
        for m in range(1, n + 1):
            if m not in (i, j):
                others = others * _zdiff(ring, i, m)
        out = out + casimir_apply(i, j, v).times_poly(others)
    return out


def dynamical_apply(v: TensorVector, params: Sl2Params) -> TensorVector:
    """lambda D v for the rescaled D = p^r sum_i (z_i/2) h^{(i)}
    + sum_{i,j} f^{(i)} e^{(j)} / lambda."""
    ring, n = params.ring, params.n
    half_pr = ring.raw_mul(ring.raw_pi_power(ring.r_num), embed_rational(1, 2, ring).value)
    out = TensorVector(params)
    for i in range(1, n + 1):
        out = out + act_h(i, v).times_poly(
            MultiPoly.monomial(ring, {LAMBDA: 1, zvar(i): 1}, half_pr)
        )
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            out = out + act_f(i, act_e(j, v))
    return out


def weight_assignments(J, k: int, n: int) -> list:
    """All maps a: {1..k} -> {1..n} with fiber sizes |a^{-1}(s)| = j_s.

    Returned as tuples (a(1), ..., a(k)), 1-based point labels.  Summing the
    products prod_i 1/(t_i - z_{a(i)}) over these maps gives the weight
    function W_J without dividing by j_1! ... j_n!.
    """
    J = tuple(J)
    if len(J) != n or sum(J) != k or any(j < 0 for j in J):
        raise ParameterError("need |J| = k with nonnegative entries")
    base = []
    for s, j in enumerate(J, start=1):
        base.extend([s] * j)
    return sorted(set(permutations(base)))


def master_polynomial(params: Sl2Params) -> MultiPoly:
    """The master polynomial Phi_s, fully expanded (desk-scale oracle)."""
    ring, n, k = params.ring, params.n, params.k
    factors = []
    for (i, j), M in zip(combinations(range(1, n + 1), 2), params.M_pairs):
        factors.append(binomial_power(ring, zvar(i), zvar(j), M))
    for i, j in combinations(range(1, k + 1), 2):
        factors.append(binomial_power(ring, tvar(i), tvar(j), params.M_zero))
    for l in range(1, n + 1):
        for i in range(1, k + 1):
            factors.append(binomial_power(ring, tvar(i), zvar(l), params.M_points[l - 1]))
    poly = truncated_product(factors)
    lam = MultiPoly.variable(ring, LAMBDA)
    inv_2k = embed_rational(params.kappa_den, 2 * params.kappa_num, ring).value
    neg_inv_k = ring.raw_neg(embed_rational(params.kappa_den, params.kappa_num, ring).value)
    for l in range(1, n + 1):
        poly = poly * trunc_exp_poly(
            (MultiPoly.variable(ring, zvar(l)) * lam).scale(inv_2k), ring
        )
    for i in range(1, k + 1):
        poly = poly * trunc_exp_poly(
            (MultiPoly.variable(ring, tvar(i)) * lam).scale(neg_inv_k), ring
        )
    return poly


def _z_prefactor(params: Sl2Params) -> MultiPoly:
    """The t-independent part of Phi_s: the z-pair powers and the z-side
    exponential factors."""
    ring, n = params.ring, params.n
    lam = MultiPoly.variable(ring, LAMBDA)
    inv_2k = embed_rational(params.kappa_den, 2 * params.kappa_num, ring).value
    poly = MultiPoly.const(ring, 1)
    for (i, j), M in zip(combinations(range(1, n + 1), 2), params.M_pairs):
        poly = poly * binomial_power(ring, zvar(i), zvar(j), M)
    for l in range(1, n + 1):
        poly = poly * trunc_exp_poly(
            (MultiPoly.variable(ring, zvar(l)) * lam).scale(inv_2k), ring
        )
    return poly


def construct_solution_sl2(params: Sl2Params) -> SolutionCertificate:
    """Certificate with one component per basis index J of the weight space.

    Component J is the coefficient of prod_i t_i^{ell_i p^s - 1} in
    Phi_s W_J, where Phi_s W_J is assembled per weight assignment by
    dropping one power of each matched (t_i - z_{a(i)}) factor.
    """
    ring, n, k = params.ring, params.n, params.k
    d = degree_bound(ring)
    coeffs = exp_coefficients(ring)
    neg_inv_k = ring.raw_neg(embed_rational(params.kappa_den, params.kappa_num, ring).value)
    targets = [ell * ring.modulus - 1 for ell in params.ell_vec]
    windows = {tvar(i + 1): (max(targets[i] - d, 0), targets[i]) for i in range(k)}
    tt_factors = [
        binomial_power(ring, tvar(i), tvar(j), params.M_zero)
        for i, j in combinations(range(1, k + 1), 2)
    ]
    prefactor = _z_prefactor(params)

    comps = []
    for idx, J in enumerate(basis_indices(params.m_vec, k), start=1):
        acc = MultiPoly.zero(ring)
        for a in weight_assignments(J, k, n):
            factors = list(tt_factors)
            for i in range(1, k + 1):
                for l in range(1, n + 1):
                    e = params.M_points[l - 1] - (1 if a[i - 1] == l else 0)
                    factors.append(binomial_power(ring, tvar(i), zvar(l), e))
            poly = truncated_product(factors, windows)
            for kvec in product(range(d + 1), repeat=k):
                piece = poly
                for i in range(k):
                    if targets[i] - kvec[i] < 0:
                        piece = MultiPoly.zero(ring)
                        break
                    piece = piece.coefficient_of(tvar(i + 1), targets[i] - kvec[i])
                if piece.is_zero():
                    continue
                scalar = ring.raw_one()
                for ki in kvec:
                    scalar = ring.raw_mul(scalar, coeffs[ki].raw)
                    for _ in range(ki):
                        scalar = ring.raw_mul(scalar, neg_inv_k)
                acc = acc + piece.scale(scalar) * MultiPoly.monomial(
                    ring, {LAMBDA: sum(kvec)}, 1
                )
        comps.append((idx, acc * prefactor))
    return SolutionCertificate("sl2", ring, params, tuple(comps))


def certificate_vector(cert: SolutionCertificate) -> TensorVector:
    """View an sl2 certificate as a TensorVector over the basis indices."""
    params = cert.params
    entries = {}
    for (idx, poly), J in zip(cert.components, basis_indices(params.m_vec, params.k)):
        entries[J] = poly
    return TensorVector(params, entries)


def verify_sl2(cert: SolutionCertificate, params: Sl2Params = None) -> ResidualReport:
    """Cleared residuals of the rescaled KZ and dynamical equations:

      kappa Pi_{j != i}(z_i - z_j) dI/dz_i - gaudin_apply(i, I)   for each i,
      kappa lambda dI/dlambda - dynamical_apply(I),

    each a zero TensorVector mod p^s with lambda formal.
    """
    if cert.family != "sl2":
        raise ParameterError(f"expected an sl2 certificate, got {cert.family}")
    params = params if params is not None else cert.params
    ring, n = params.ring, params.n
    kappa = embed_rational(params.kappa_num, params.kappa_den, ring).value
    vec = certificate_vector(cert)
    report = ResidualReport("sl2")
    order = basis_indices(params.m_vec, params.k)

    for i in range(1, n + 1):
        clear = MultiPoly.const(ring, 1)
        for j in range(1, n + 1):
            if j != i:
                clear = clear * _zdiff(ring, i, j)
        lhs = vec.map_polys(lambda poly: (poly.partial_derivative(zvar(i)) * clear).scale(kappa))
        res = lhs - gaudin_apply(i, vec, params)
        for J in order:
            report.add(f"KZ (i={i}) component J={J}", res.component(J))
    lam = MultiPoly.variable(ring, LAMBDA)
    lhs = vec.map_polys(lambda poly: (poly.partial_derivative(LAMBDA) * lam).scale(kappa))
    res = lhs - dynamical_apply(vec, params)
    for J in order:
        report.add(f"dynamical component J={J}", res.component(J))
    return report
