import random

import pytest
from hypothesis import given, settings, strategies as st

from pskz.mpoly import (
    LAMBDA,
    MultiPoly,
    binomial_power,
    pochhammer_poly,
    to_pochhammer_basis,
    truncated_product,
)
from pskz.padic import ParameterError, RingParams

RINGS = [RingParams(3, 1), RingParams(5, 2), RingParams(7, 1), RingParams(5, 1, 3, 2)]


def random_poly(ring, vars, max_deg=4, max_terms=8, rng=None):
    rng = rng or random
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        e = tuple(rng.randint(0, max_deg) for _ in vars)
        if ring.r_den == 1:
            terms[e] = rng.randrange(ring.modulus)
        else:
            terms[e] = tuple(rng.randrange(ring.modulus) for _ in range(ring.r_den))
    return MultiPoly.from_dict(ring, vars, terms)


def naive_mul(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Oracle: plain double loop over aligned dicts, no kernels."""
    ring = a.ring
    vars = tuple(sorted(set(a.vars) | set(b.vars)))
    out = {}
    for ea, ca in a._aligned_dict(vars).items():
        for eb, cb in b._aligned_dict(vars).items():
            e = tuple(x + y for x, y in zip(ea, eb))
            prev = out.get(e, ring.raw_zero())
            out[e] = ring.raw_add(prev, ring.raw_mul(ca, cb))
    return MultiPoly.from_dict(ring, vars, out)


def test_multiplication_oracle_many_random_pairs():
    """Products agree with the naive double-loop oracle on 500 random pairs."""
    rng = random.Random(20240817)
    failures = 0
    for i in range(500):
        ring = rng.choice(RINGS)
        vars = tuple(rng.sample(["t", "z_1", "z_2", LAMBDA], rng.randint(1, 3)))
        a = random_poly(ring, vars, rng=rng)
        b = random_poly(ring, vars, rng=rng)
        if a * b != naive_mul(a, b):
            failures += 1
    assert failures == 0


def test_large_product_uses_packed_path_and_agrees():
    ring = RingParams(7, 2)
    a = binomial_power(ring, "t", "z_1", 24) * binomial_power(ring, "t", "z_2", 24)
    b = binomial_power(ring, "t", "z_3", 24)
    assert len(a) * len(b) > 4096  # exercises the kernel path
    assert a * b == naive_mul(a, b)


@given(
    ring=st.sampled_from(RINGS),
    seed=st.integers(min_value=0, max_value=10**6),
)
@settings(deadline=None, max_examples=40)
def test_derivative_product_rule(ring, seed):
    rng = random.Random(seed)
    vars = ("t", "z_1")
    a = random_poly(ring, vars, rng=rng)
    b = random_poly(ring, vars, rng=rng)
    lhs = (a * b).partial_derivative("t")
    rhs = a.partial_derivative("t") * b + a * b.partial_derivative("t")
    assert lhs == rhs


def test_constants_and_variables():
    ring = RingParams(5, 1)
    t = MultiPoly.variable(ring, "t")
    five = MultiPoly.const(ring, 5)
    assert five.is_zero()
    assert (t - t).is_zero()
    assert t.degree("t") == 1 and t.degree("z") == 0
    assert MultiPoly.zero(ring).degree("t") == -1


def test_coefficient_of_and_truncate():
    ring = RingParams(5, 2)
    p = binomial_power(ring, "t", "z", 3)  # (t - z)^3
    c2 = p.coefficient_of("t", 2)  # 3 choose 1 * (-z)
    assert c2 == MultiPoly.from_dict(ring, ("z",), {(1,): 25 - 3})
    assert p.truncate_var("t", 0, 1) + p.truncate_var("t", 2, 3) == p


def test_substitute_shift():
    ring = RingParams(5, 1)
    p = binomial_power(ring, "t", "z", 2)
    shifted = p.substitute("z", MultiPoly.linear(ring, {"z": 1}, 1))  # z -> z + 1
    direct = MultiPoly.linear(ring, {"t": 1, "z": -1}, -1) ** 2
    assert shifted == direct


def test_evaluate():
    ring = RingParams(7, 1)
    p = binomial_power(ring, "t", "z", 2)
    assert p.evaluate({"t": 5, "z": 2}).raw == 9 % 7


def test_relabel_injective_only():
    ring = RingParams(5, 1)
    p = MultiPoly.linear(ring, {"z_1": 1, "z_2": 1})
    with pytest.raises(ParameterError):
        p.relabel({"z_1": "z_2"})
    q = p.relabel({"z_1": "z_3"})
    assert q == MultiPoly.linear(ring, {"z_3": 1, "z_2": 1})


def test_truncated_product_matches_full_then_filter():
    ring = RingParams(5, 1)
    factors = [binomial_power(ring, "t", f"z_{i}", 4) for i in range(1, 4)]
    full = factors[0] * factors[1] * factors[2]
    windowed = truncated_product(factors, {"t": (7, 9)})
    assert windowed == full.truncate_var("t", 7, 9)


def test_pochhammer_poly_and_basis_roundtrip():
    ring = RingParams(5, 2)
    # (t)_3 = t(t-1)(t-2)
    direct = (
        MultiPoly.variable(ring, "t")
        * MultiPoly.linear(ring, {"t": 1}, -1)
        * MultiPoly.linear(ring, {"t": 1}, -2)
    )
    assert pochhammer_poly(ring, 3, "t") == direct
    rng = random.Random(7)
    for _ in range(20):
        p = random_poly(ring, ("t", "z"), max_deg=6, rng=rng)
        exp = to_pochhammer_basis(p, "t")
        assert exp.to_poly() == p


def test_pochhammer_shift_coefficient_invariance():
    """For any F, the degree-(p^s - 1) Pochhammer coefficient of F(t+1)
    matches that of F(t) mod p^s, on 200 random polynomials."""
    rng = random.Random(99)
    for _ in range(200):
        ring = rng.choice([RingParams(3, 1), RingParams(3, 2), RingParams(5, 1)])
        target = ring.modulus - 1
        p = random_poly(ring, ("t", "z"), max_deg=target + 3, max_terms=10, rng=rng)
        shifted = p.substitute("t", MultiPoly.linear(ring, {"t": 1}, 1))
        c0 = to_pochhammer_basis(p, "t").coefficient(target)
        c1 = to_pochhammer_basis(shifted, "t").coefficient(target)
        assert c0 == c1


def test_pow():
    ring = RingParams(5, 1)
    p = MultiPoly.linear(ring, {"t": 1, "z": -1})
    assert p**0 == MultiPoly.const(ring, 1)
    assert p**3 == p * p * p
