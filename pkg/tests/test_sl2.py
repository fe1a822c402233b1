import random
from itertools import combinations

import pytest

from pskz.mpoly import LAMBDA, MultiPoly, binomial_power, truncated_product
from pskz.padic import ParameterError, RingParams, embed_rational
from pskz.sl2 import (
    Sl2Params,
    TensorVector,
    act_e,
    act_f,
    act_h,
    basis_indices,
    casimir_apply,
    construct_solution_sl2,
    dynamical_apply,
    gaudin_apply,
    master_polynomial,
    tvar,
    verify_sl2,
    weight_assignments,
    zvar,
    _z_prefactor,
)
from pskz.truncexp import trunc_exp_poly


def params_11(k=1, kappa=2, p=5, s=1):
    return Sl2Params(RingParams(p, s), (1, 1), k, kappa)


def unit_vec(params, J):
    return TensorVector(params, {tuple(J): MultiPoly.const(params.ring, 1)})


def test_exponent_defaults():
    params = params_11()
    # -1/2 = 2, 1/4 = 4, 2/2 = 1 mod 5
    assert params.M_points == (2, 2)
    assert params.M_pairs == (4,)
    assert params.M_zero == 1


def test_exponent_validation():
    ring = RingParams(5, 1)
    with pytest.raises(ParameterError):
        Sl2Params(ring, (1, 1), 1, 2, M_points=(3, 2), M_pairs=(4,), M_zero=1)
    with pytest.raises(ParameterError):
        Sl2Params(ring, (1, 1), 1, 5)  # p divides kappa numerator
    # adding p^s to a representative stays valid
    Sl2Params(ring, (1, 1), 1, 2, M_points=(7, 2), M_pairs=(9,), M_zero=6)


def test_slot_actions_worked_examples():
    params = params_11()
    v = unit_vec(params, (1, 0))
    assert act_e(1, v) == unit_vec(params, (0, 0))
    assert act_h(2, v) == v  # m_2 - 2 j_2 = 1
    assert act_e(1, unit_vec(params, (0, 1))).is_zero()
    assert act_f(1, v).is_zero()  # j_1 = m_1 already


def test_commutation_relations():
    """[h,e] = 2e, [h,f] = -2f, [e,f] = h on random vectors."""
    rng = random.Random(5)
    ring = RingParams(7, 2)
    params = Sl2Params(ring, (2, 3, 1), 2, 3)
    for _ in range(30):
        entries = {}
        for J in basis_indices(params.m_vec, params.k):
            entries[J] = MultiPoly.const(ring, rng.randrange(ring.modulus))
        v = TensorVector(params, entries)
        for i in (1, 2, 3):
            he = act_h(i, act_e(i, v)) - act_e(i, act_h(i, v))
            assert he == act_e(i, v).scale(2)
            hf = act_h(i, act_f(i, v)) - act_f(i, act_h(i, v))
            assert hf == act_f(i, v).scale(-2)
            ef = act_e(i, act_f(i, v)) - act_f(i, act_e(i, v))
            assert ef == act_h(i, v)


def test_casimir():
    params = params_11()
    inv2 = embed_rational(1, 2, params.ring).value
    v = unit_vec(params, (1, 0))
    expected = TensorVector(params)
    expected.add_term((0, 1), MultiPoly.const(params.ring, 1))
    expected.add_term((1, 0), MultiPoly.const(params.ring, 1).scale(
        params.ring.raw_neg(inv2)
    ))
    assert casimir_apply(1, 2, v) == expected
    # symmetry of the Casimir element
    w = unit_vec(params, (0, 1))
    assert casimir_apply(1, 2, w) == casimir_apply(2, 1, w)
    with pytest.raises(ParameterError):
        casimir_apply(1, 1, v)


def test_casimir_on_highest_vector():
    params = Sl2Params(RingParams(7, 1), (2, 2), 2, 3)
    v = TensorVector(params, {(0, 0): MultiPoly.const(params.ring, 1)})
    out = casimir_apply(1, 2, v)
    # e x f and f x e produce off-diagonal terms that e kills; h x h gives m^2/2
    inv2 = embed_rational(1, 2, params.ring).value
    assert out.component((0, 0)) == MultiPoly.const(params.ring, 4).scale(inv2)


def test_weight_assignments_examples():
    assert weight_assignments((1, 0), 1, 2) == [(1,)]
    assert weight_assignments((2, 0), 2, 2) == [(1, 1)]
    assert weight_assignments((1, 1), 2, 2) == [(1, 2), (2, 1)]
    # counts are multinomial
    assert len(weight_assignments((2, 1), 3, 2)) == 3
    with pytest.raises(ParameterError):
        weight_assignments((1, 0), 2, 2)


def test_basis_indices():
    assert basis_indices((1, 1), 1) == [(0, 1), (1, 0)]
    assert basis_indices((1, 1), 2) == [(1, 1)]
    assert basis_indices((2, 1), 2) == [(1, 1), (2, 0)]


def test_master_polynomial_oracle():
    """Naive factor-by-factor expansion of the p=5, s=1, m=(1,1), kappa=2
    master polynomial."""
    params = params_11()
    ring = params.ring
    lam = MultiPoly.variable(ring, LAMBDA)
    expected = (
        binomial_power(ring, zvar(1), zvar(2), 4)
        * binomial_power(ring, tvar(1), zvar(1), 2)
        * binomial_power(ring, tvar(1), zvar(2), 2)
    )
    inv4 = embed_rational(1, 4, ring).value
    neg_inv2 = ring.raw_neg(embed_rational(1, 2, ring).value)
    for l in (1, 2):
        expected = expected * trunc_exp_poly(
            (MultiPoly.variable(ring, zvar(l)) * lam).scale(inv4), ring
        )
    expected = expected * trunc_exp_poly(
        (MultiPoly.variable(ring, tvar(1)) * lam).scale(neg_inv2), ring
    )
    assert master_polynomial(params) == expected


def test_construction_matches_naive_master_extraction():
    """Certificate components equal coefficients extracted from the naive
    product Phi_s W_J (computed with one factor's exponent reduced)."""
    for p, s, k, kappa in [(5, 1, 1, 2), (5, 1, 1, 3), (5, 1, 2, 3), (7, 1, 1, 2)]:
        params = Sl2Params(RingParams(p, s), (1, 1), k, kappa)
        ring = params.ring
        lam = MultiPoly.variable(ring, LAMBDA)
        neg_inv_k = ring.raw_neg(embed_rational(params.kappa_den, params.kappa_num, ring).value)
        cert = construct_solution_sl2(params)
        for (idx, comp), J in zip(cert.components, basis_indices(params.m_vec, k)):
            acc = MultiPoly.zero(ring)
            for a in weight_assignments(J, k, params.n):
                factors = [
                    binomial_power(ring, tvar(i), tvar(j), params.M_zero)
                    for i, j in combinations(range(1, k + 1), 2)
                ]
                for i in range(1, k + 1):
                    for l in range(1, params.n + 1):
                        factors.append(
                            binomial_power(
                                ring, tvar(i), zvar(l),
                                params.M_points[l - 1] - (a[i - 1] == l),
                            )
                        )
                poly = truncated_product(factors)
                for i in range(1, k + 1):
                    poly = poly * trunc_exp_poly(
                        (MultiPoly.variable(ring, tvar(i)) * lam).scale(neg_inv_k), ring
                    )
                acc = acc + poly
            acc = acc * _z_prefactor(params)
            for i in range(1, k + 1):
                acc = acc.coefficient_of(tvar(i), params.ell_vec[i - 1] * ring.modulus - 1)
            assert acc == comp


def test_verify_small_grid():
    nonzero_seen = False
    for p, s, k, kappa in [(5, 1, 1, 3), (5, 2, 1, 2), (7, 1, 2, 2), (7, 2, 1, 2)]:
        params = Sl2Params(RingParams(p, s), (1, 1), k, kappa)
        cert = construct_solution_sl2(params)
        assert verify_sl2(cert).ok
        nonzero_seen = nonzero_seen or not cert.is_zero()
    assert nonzero_seen  # the grid exercises nontrivial certificates


def test_verify_larger_modules():
    params = Sl2Params(RingParams(5, 1), (2, 1), 2, 3)
    cert = construct_solution_sl2(params)
    assert verify_sl2(cert).ok


def test_perturbed_certificate_fails_at_right_index():
    params = Sl2Params(RingParams(5, 2), (1, 1), 1, 2)
    cert = construct_solution_sl2(params)
    bad = cert.replace_component(1, cert.component(1) + MultiPoly.const(cert.ring, 1))
    report = verify_sl2(bad)
    assert not report.ok
    labels = [e.label for e in report.failures()]
    assert any("(0, 1)" in lab or "(1, 0)" in lab for lab in labels)


def test_gaudin_and_dynamical_on_zero():
    params = params_11()
    zero = TensorVector(params)
    assert gaudin_apply(1, zero, params).is_zero()
    assert dynamical_apply(zero, params).is_zero()
