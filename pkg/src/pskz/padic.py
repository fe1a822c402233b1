"""Exact arithmetic modulo p^s and in the ramified extension Z[pi]/(pi^r2 - p).

Scalars come in two public flavours:

* ``ResidueInt`` -- an integer residue in ``[0, p^s)``.
* ``RamifiedElem`` -- an element ``sum_i c_i pi^i`` of ``Z[pi]/(pi^r2 - p)``
  with each ``c_i`` reduced mod ``p^s``.  For ``r_den == 1`` this degenerates
  to a single residue.

Internally polynomials carry *raw* scalars: a plain ``int`` when
``r_den == 1`` and a tuple of ``r_den`` ints otherwise.  The ``raw_*``
functions operate on that representation and are what the polynomial layer
calls in its inner loops.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


class NotAUnit(ArithmeticError):
    """Raised when inverting a residue divisible by p."""


class ParameterError(ValueError):
    """Raised when ring or family parameters violate an invariant."""


def _is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class RingParams:
    """Parameters (p, s, r) of the coefficient ring.

    ``r = r_num / r_den > 1/(p-1)`` is the exponent rescaling: the variable
    lambda in the equations stands for ``p^r * lambda``.  The scalars live in
    ``Z[pi]/(pi^r_den - p)`` reduced mod ``p^s``; for ``r_den == 1`` that is
    just ``Z/p^s``.
    """

    p: int
    s: int
    r_num: int = 1
    r_den: int = 1

    def __post_init__(self):
        if not _is_odd_prime(self.p):
            raise ParameterError(f"p must be an odd prime, got {self.p}")
        if self.s < 1:
            raise ParameterError(f"s must be a positive integer, got {self.s}")
        if self.r_num < 1 or self.r_den < 1:
            raise ParameterError("r_num and r_den must be positive integers")
        if math.gcd(self.r_num, self.r_den) != 1:
            raise ParameterError("r_num and r_den must be coprime")
        if self.r_num * (self.p - 1) <= self.r_den:
            raise ParameterError(
                f"r = {self.r_num}/{self.r_den} must exceed 1/(p-1) = 1/{self.p - 1}"
            )

    @property
    def modulus(self) -> int:
        return self.p**self.s

    @property
    def r(self) -> Fraction:
        return Fraction(self.r_num, self.r_den)

    # --- raw scalar helpers -------------------------------------------------

    def raw_zero(self):
        return 0 if self.r_den == 1 else (0,) * self.r_den

    def raw_one(self):
        return 1 if self.r_den == 1 else (1,) + (0,) * (self.r_den - 1)

    def raw_from_int(self, n: int):
        n %= self.modulus
        return n if self.r_den == 1 else (n,) + (0,) * (self.r_den - 1)

    def raw_pi_power(self, e: int):
        """pi^e as a raw scalar (pi^r_den = p)."""
        if e < 0:
            raise ValueError("negative pi power")
        q, rem = divmod(e, self.r_den)
        c = pow(self.p, q, self.modulus) if q < self.s else 0
        if self.r_den == 1:
            return c
        coeffs = [0] * self.r_den
        coeffs[rem] = c
        return tuple(coeffs)

    def raw_add(self, a, b):
        if self.r_den == 1:
            return (a + b) % self.modulus
        m = self.modulus
        return tuple((x + y) % m for x, y in zip(a, b))

    def raw_sub(self, a, b):
        if self.r_den == 1:
            return (a - b) % self.modulus
        m = self.modulus
        return tuple((x - y) % m for x, y in zip(a, b))

    def raw_neg(self, a):
        if self.r_den == 1:
            return (-a) % self.modulus
        m = self.modulus
        return tuple((-x) % m for x in a)

    def raw_mul(self, a, b):
        if self.r_den == 1:
            return (a * b) % self.modulus
        m, p, rd = self.modulus, self.p, self.r_den
        out = [0] * rd
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                q, rem = divmod(i + j, rd)
                out[rem] = (out[rem] + x * y * p**q) % m
        return tuple(out)

    def raw_is_zero(self, a) -> bool:
        if self.r_den == 1:
            return a == 0
        return all(x == 0 for x in a)

    def raw_inv(self, a):
        """Inverse of an integer-valued raw scalar (pi-free)."""
        if self.r_den == 1:
            return inv_mod(a, self)
        if any(a[1:]):
            raise NotAUnit("only pi-free scalars can be inverted here")
        return (inv_mod(a[0], self),) + (0,) * (self.r_den - 1)


def inv_mod(value: int, ring: RingParams) -> int:
    value %= ring.modulus
    if value % ring.p == 0:
        raise NotAUnit(f"{value} is not a unit mod {ring.p}^{ring.s}")
    return pow(value, -1, ring.modulus)


@dataclass(frozen=True)
class ResidueInt:
    """Integer residue in [0, p^s)."""

    value: int
    params: RingParams

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.params.modulus)

    def _check(self, other: "ResidueInt"):
        if self.params != other.params:
            raise ParameterError("mismatched ring parameters")

    def __add__(self, other: "ResidueInt") -> "ResidueInt":
        self._check(other)
        return ResidueInt(self.value + other.value, self.params)

    def __sub__(self, other: "ResidueInt") -> "ResidueInt":
        self._check(other)
        return ResidueInt(self.value - other.value, self.params)

    def __neg__(self) -> "ResidueInt":
        return ResidueInt(-self.value, self.params)

    def __mul__(self, other: "ResidueInt") -> "ResidueInt":
        self._check(other)
        return ResidueInt(self.value * other.value, self.params)

    def inv(self) -> "ResidueInt":
        return ResidueInt(inv_mod(self.value, self.params), self.params)

    def valuation(self) -> int:
        """Largest v <= s with p^v | value; s for the zero residue."""
        return valuation(self)

    def is_zero(self) -> bool:
        return self.value == 0


@dataclass(frozen=True)
class RamifiedElem:
    """Element sum_i coeffs[i] * pi^i of Z[pi]/(pi^r_den - p) mod p^s."""

    coeffs: tuple
    params: RingParams

    def __post_init__(self):
        m = self.params.modulus
        c = tuple(x % m for x in self.coeffs)
        if len(c) != self.params.r_den:
            raise ParameterError(
                f"expected {self.params.r_den} coefficients, got {len(c)}"
            )
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_int(cls, n: int, params: RingParams) -> "RamifiedElem":
        return cls.from_raw(params.raw_from_int(n), params)

    @classmethod
    def from_raw(cls, raw, params: RingParams) -> "RamifiedElem":
        if params.r_den == 1:
            return cls((raw,), params)
        return cls(raw, params)

    @property
    def raw(self):
        return self.coeffs[0] if self.params.r_den == 1 else self.coeffs

    def _check(self, other: "RamifiedElem"):
        if self.params != other.params:
            raise ParameterError("mismatched ring parameters")

    def __add__(self, other: "RamifiedElem") -> "RamifiedElem":
        self._check(other)
        return RamifiedElem.from_raw(self.params.raw_add(self.raw, other.raw), self.params)

    def __sub__(self, other: "RamifiedElem") -> "RamifiedElem":
        self._check(other)
        return RamifiedElem.from_raw(self.params.raw_sub(self.raw, other.raw), self.params)

    def __neg__(self) -> "RamifiedElem":
        return RamifiedElem.from_raw(self.params.raw_neg(self.raw), self.params)

    def __mul__(self, other: "RamifiedElem") -> "RamifiedElem":
        self._check(other)
        return RamifiedElem.from_raw(self.params.raw_mul(self.raw, other.raw), self.params)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coeffs)

    def pi_valuation(self) -> int:
        """pi-adic valuation (pi^r_den = p), capped at s * r_den for zero."""
        ring = self.params
        best = ring.s * ring.r_den
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            v = 0
            while c % ring.p == 0:
                c //= ring.p
                v += 1
            best = min(best, v * ring.r_den + i)
        return best


def add(a: RamifiedElem, b: RamifiedElem) -> RamifiedElem:
    return a + b


def mul(a: RamifiedElem, b: RamifiedElem) -> RamifiedElem:
    return a * b


def inv(a: ResidueInt) -> ResidueInt:
    return a.inv()


def valuation(a: ResidueInt) -> int:
    ring = a.params
    if a.value == 0:
        return ring.s
    v, x = 0, a.value
    while x % ring.p == 0:
        x //= ring.p
        v += 1
    return min(v, ring.s)


def embed_rational(num: int, den: int, ring: RingParams) -> ResidueInt:
    """num/den mod p^s; requires p not dividing den."""
    return ResidueInt(num * inv_mod(den, ring), ring)


def legendre_vp_factorial(k: int, p: int) -> int:
    """v_p(k!) by Legendre's sum."""
    v, q = 0, p
    while q <= k:
        v += k // q
        q *= p
    return v


def p_power_over_factorial(k: int, ring: RingParams) -> RamifiedElem:
    """The exact ring element p^{k r} / k! = pi^{k r_num} / k!.

    With ``v = v_p(k!)`` this is ``pi^{k r_num - v r_den} * (k!/p^v)^{-1}``;
    the exponent is nonnegative because ``r > 1/(p-1)``.
    """
    if k < 0:
        raise ParameterError("k must be nonnegative")
    if k == 0:
        return RamifiedElem.from_raw(ring.raw_one(), ring)
    v = legendre_vp_factorial(k, ring.p)
    e = k * ring.r_num - v * ring.r_den
    assert e > 0, "valuation bound violated; r <= 1/(p-1)?"
    unit = math.factorial(k) // ring.p**v
    raw = ring.raw_mul(ring.raw_pi_power(e), ring.raw_from_int(inv_mod(unit, ring)))
    return RamifiedElem.from_raw(raw, ring)
