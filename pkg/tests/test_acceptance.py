"""Acceptance gate: the eleven primary criteria, each exact (tolerance zero).

Each criterion is one test; `pytest -v tests/test_acceptance.py` therefore
prints one pass/fail line per criterion, and each test also prints its own
"criterion N: PASS" line on success (visible with -s or in captured output).
"""

import random
import sys
from itertools import product

from pskz.gauge import default_gauge_case
from pskz.hyper import (
    HyperParams,
    construct_solution,
    independence_check,
    lambda_zero_sum,
    vanishing_check,
    verify_dynamical,
    verify_kz,
)
from pskz.mpoly import LAMBDA, MultiPoly, to_pochhammer_basis
from pskz.padic import RingParams
from pskz.qkz import QkzParams, construct_qkz_solution, verify_qkz
from pskz.sl2 import Sl2Params, construct_solution_sl2, verify_sl2, weight_assignments
from pskz.truncexp import trunc_exp_poly

from test_mpoly import naive_mul, random_poly

_HYPER_CACHE = {}


def _hyper_cert(p, s, g, ell, r_num=1, r_den=1):
    key = (p, s, g, ell, r_num, r_den)
    if key not in _HYPER_CACHE:
        _HYPER_CACHE[key] = construct_solution(
            HyperParams(RingParams(p, s, r_num, r_den), g, ell)
        )
    return _HYPER_CACHE[key]


def _matrix():
    for p, s, g in product((3, 5, 7), (1, 2), (1, 2)):
        for ell in range(1, g + 1):
            yield p, s, g, ell


def _passed(n, text):
    print(f"criterion {n:2d}: PASS — {text}", file=sys.stderr, flush=True)


def test_criterion_01_hyper_theorem_matrix():
    for p, s, g, ell in _matrix():
        cert = _hyper_cert(p, s, g, ell)
        assert verify_kz(cert).ok, (p, s, g, ell)
        assert verify_dynamical(cert).ok, (p, s, g, ell)
    _passed(1, "hyper KZ+dynamical residuals zero on the full (p,s,g,ell) matrix")


def test_criterion_02_worked_value():
    ring = RingParams(3, 1)
    cert = _hyper_cert(3, 1, 1, 1)
    one = MultiPoly.const(ring, 1)
    assert [cert.component(i) for i in (1, 2, 3)] == [one, one, one]
    # independent naive-expansion oracle: [t^2] (t - z_j)(t - z_k) with E_1 = 1
    for j, k in [(2, 3), (1, 3), (1, 2)]:
        prod = MultiPoly.linear(ring, {"t": 1, f"z_{j}": -1}) * MultiPoly.linear(
            ring, {"t": 1, f"z_{k}": -1}
        )
        assert prod.coefficient_of("t", 2) == one
    _passed(2, "p=3 s=1 g=1 solution is (1,1,1), confirmed by naive expansion")


def test_criterion_03_sum_identity():
    for p, s, g, ell in _matrix():
        assert lambda_zero_sum(_hyper_cert(p, s, g, ell)).is_zero(), (p, s, g, ell)
    _passed(3, "sum of components at lambda=0 is the zero polynomial, full matrix")


def test_criterion_04_vanishing_lemma():
    checked = 0
    for p, s, g in product((3, 5, 7), (1, 2), (1, 2)):
        params = HyperParams(RingParams(p, s), g, 1)
        result = vanishing_check(params, ells=(g + 1, g + 2))
        if not result.applicable:
            continue
        checked += 1
        assert result.ok, (p, s, g, result.zero_by_ell)
    assert checked > 0
    _passed(4, f"ell>g certificates vanish at all {checked} applicable matrix points")


def test_criterion_05_independence():
    for g in (1, 2):
        result = independence_check(HyperParams(RingParams(7, 1), g, 1))
        assert result.ok and result.rank == g
        assert result.minor_columns is not None
        assert result.witness_z is not None and result.witness_value % 7 != 0
    _passed(5, "g x (2g+1) matrix mod 7 has a nonzero g x g minor with witness point")


def test_criterion_06_general_exponent():
    for p, s, g, ell in _matrix():
        cert = _hyper_cert(p, s, g, ell, 2, 1)
        assert verify_kz(cert).ok, ("r=2", p, s, g, ell)
        assert verify_dynamical(cert).ok, ("r=2", p, s, g, ell)
        assert lambda_zero_sum(cert).is_zero(), ("r=2", p, s, g, ell)
    cert = _hyper_cert(5, 1, 1, 1, 3, 2)
    assert verify_kz(cert).ok and verify_dynamical(cert).ok
    assert lambda_zero_sum(cert).is_zero()
    _passed(6, "criteria 1+3 hold at r=2 (full matrix) and r=3/2 (ramified, p=5 s=1 g=1)")


def test_criterion_07_sl2_theorem():
    for p, s, k, kappa in product((5, 7), (1, 2), (1, 2), (2, 3)):
        params = Sl2Params(RingParams(p, s), (1, 1), k, kappa)
        cert = construct_solution_sl2(params)
        assert verify_sl2(cert).ok, (p, s, k, kappa)
    _passed(7, "sl2 KZ+dynamical residuals zero for n=2, m=(1,1), k,kappa,p,s matrix")


def test_criterion_08_weight_function_ground_truth():
    assert weight_assignments((1, 0, 0), 1, 3) == [(1,)]
    assert weight_assignments((2, 0, 0), 2, 3) == [(1, 1)]
    assert weight_assignments((1, 1, 0), 2, 3) == [(1, 2), (2, 1)]
    _passed(8, "weight assignments reproduce the three explicit W examples")


def test_criterion_09_qkz_theorem():
    for p, s in product((3, 5), (1, 2)):
        for r_num, r_den in ((1, 1), (2, 1), (3, 2)):
            params = QkzParams(RingParams(p, s, r_num, r_den))
            cert = construct_qkz_solution(params)
            assert verify_qkz(cert).ok, (p, s, r_num, r_den)
    _passed(9, "difference-equation residual zero for p in {3,5}, s in {1,2}, r in {1,2,3/2}")


def test_criterion_10_kernel_lemmas():
    rings = [RingParams(3, 1), RingParams(3, 2), RingParams(5, 1), RingParams(5, 1, 3, 2)]
    rng = random.Random(2718281828)
    # (a) t^{l p^s - 1} coefficient of d/dt(E * F) vanishes: 200 integrands per ring
    for ring in rings:
        e = trunc_exp_poly(
            MultiPoly.variable(ring, LAMBDA) * MultiPoly.variable(ring, "t"), ring
        )
        for _ in range(200):
            f = random_poly(ring, ("t", "z"), max_deg=2 * ring.modulus, max_terms=6, rng=rng)
            derivative = (e * f).partial_derivative("t")
            for ell in (1, 2):
                assert derivative.coefficient_of("t", ell * ring.modulus - 1).is_zero()
    # (b) the truncated-exponential congruences, lambda formal
    for ring in rings:
        lam = MultiPoly.variable(ring, LAMBDA)
        e = trunc_exp_poly(lam * MultiPoly.variable(ring, "t"), ring)
        pr = ring.raw_pi_power(ring.r_num)
        assert e.partial_derivative("t") == MultiPoly.monomial(ring, {LAMBDA: 1}, pr) * e
        assert e.partial_derivative(LAMBDA) == MultiPoly.monomial(ring, {"t": 1}, pr) * e
        eu = trunc_exp_poly(lam * MultiPoly.variable(ring, "u"), ring)
        ev = trunc_exp_poly(lam * MultiPoly.variable(ring, "v"), ring)
        euv = trunc_exp_poly(
            lam * (MultiPoly.variable(ring, "u") + MultiPoly.variable(ring, "v")), ring
        )
        assert euv == eu * ev
    # (c) Pochhammer shift-coefficient invariance on 200 random polynomials
    for _ in range(200):
        ring = rng.choice(rings[:3])
        target = ring.modulus - 1
        f = random_poly(ring, ("t", "z"), max_deg=target + 3, max_terms=10, rng=rng)
        shifted = f.substitute("t", MultiPoly.linear(ring, {"t": 1}, 1))
        assert to_pochhammer_basis(f, "t").coefficient(target) == to_pochhammer_basis(
            shifted, "t"
        ).coefficient(target)
    # (d) multiplication against the naive oracle on 500 random pairs
    for _ in range(500):
        ring = rng.choice(rings)
        vars = tuple(rng.sample(["t", "z_1", "z_2", LAMBDA], rng.randint(1, 3)))
        a = random_poly(ring, vars, rng=rng)
        b = random_poly(ring, vars, rng=rng)
        assert a * b == naive_mul(a, b)
    _passed(10, "kernel lemmas hold on 200/200/500 random samples, all exact")


def test_criterion_11_gauge_cross_check():
    report = default_gauge_case(5, 1)
    # the deliverable is the report itself; record the outcome either way
    assert report.tried
    if report.found:
        assert report.gauge is not None and report.lambda_scale is not None
        _passed(11, f"gauge exhibited: lambda scale {report.lambda_scale}, "
                    f"{len(report.gauge)}-term gauge polynomial")
    else:
        _passed(11, "gauge search completed and reported failure (deliverable)")
