"""Sparse multivariate polynomials over Z/p^s and its ramified extension.

Terms map exponent vectors to nonzero raw scalars (see ``padic``).  For the
unramified ring with ``p^s < 2^31`` the heavy operations run on packed int64
arrays through ``kernels``; everything else uses plain dict arithmetic.

Variable names follow the families' conventions: ``t``, ``t_1``..``t_k``,
``z_1``..``z_n``, ``lambda``.  The variable list of a polynomial is always
canonically sorted and contains only variables that actually occur.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .padic import ParameterError, RamifiedElem, RingParams

LAMBDA = "lambda"

# dict arithmetic is faster than packing below roughly this many term pairs
_SMALL_PRODUCT = 4096


def var_key(name: str):
    """Canonical sort key: t-variables, then z-variables, then lambda."""
    if name == "t":
        return (0, 0, name)
    if name.startswith("t_"):
        return (1, int(name[2:]), name)
    if name.startswith("z_"):
        return (2, int(name[2:]), name)
    if name == LAMBDA:
        return (3, 0, name)
    return (4, 0, name)


def _merge_vars(a, b):
    return tuple(sorted(set(a) | set(b), key=var_key))


class MultiPoly:
    """Sparse polynomial with raw-scalar coefficients.

    Storage is a dict ``exponent tuple -> raw coeff`` and/or a pair of
    aligned numpy arrays; either representation can be materialized from
    the other on demand.
    """

    __slots__ = ("ring", "vars", "_dict", "_exps", "_coeffs")

    def __init__(self, ring: RingParams, vars: tuple, *, terms=None, exps=None, coeffs=None):
        self.ring = ring
        self.vars = vars
        self._dict = terms
        self._exps = exps
        self._coeffs = coeffs

    # --- construction -----------------------------------------------------

    @classmethod
    def from_dict(cls, ring: RingParams, vars, terms: dict) -> "MultiPoly":
        vars = tuple(vars)
        order = tuple(sorted(range(len(vars)), key=lambda i: var_key(vars[i])))
        svars = tuple(vars[i] for i in order)
        clean = {}
        for exp, c in terms.items():
            if ring.raw_is_zero(c):
                continue
            clean[tuple(exp[i] for i in order)] = c
        used = [i for i in range(len(svars)) if any(e[i] for e in clean)]
        if len(used) != len(svars):
            svars = tuple(svars[i] for i in used)
            clean = {tuple(e[i] for i in used): c for e, c in clean.items()}
        return cls(ring, svars, terms=clean)

    @classmethod
    def _from_arrays(cls, ring: RingParams, vars, exps, coeffs) -> "MultiPoly":
        # vars must already be sorted; zero coefficients already dropped
        if len(coeffs) == 0:
            return cls.zero(ring)
        used = np.flatnonzero(exps.max(axis=0) > 0)
        if len(used) != len(vars):
            vars = tuple(vars[i] for i in used)
            exps = exps[:, used]
        return cls(ring, tuple(vars), exps=np.ascontiguousarray(exps), coeffs=coeffs)

    @classmethod
    def zero(cls, ring: RingParams) -> "MultiPoly":
        return cls(ring, (), terms={})

    @classmethod
    def const(cls, ring: RingParams, c) -> "MultiPoly":
        raw = ring.raw_from_int(c) if isinstance(c, int) else c
        if ring.raw_is_zero(raw):
            return cls.zero(ring)
        return cls(ring, (), terms={(): raw})

    @classmethod
    def variable(cls, ring: RingParams, name: str) -> "MultiPoly":
        return cls(ring, (name,), terms={(1,): ring.raw_one()})

    @classmethod
    def monomial(cls, ring: RingParams, powers: dict, coeff) -> "MultiPoly":
        raw = ring.raw_from_int(coeff) if isinstance(coeff, int) else coeff
        vars = tuple(v for v in powers if powers[v])
        return cls.from_dict(ring, vars, {tuple(powers[v] for v in vars): raw})

    @classmethod
    def linear(cls, ring: RingParams, terms: dict, const: int = 0) -> "MultiPoly":
        """sum coeff*var over ``terms`` plus an integer constant."""
        vars = tuple(terms)
        out = {}
        for i, v in enumerate(vars):
            e = [0] * len(vars)
            e[i] = 1
            out[tuple(e)] = ring.raw_from_int(terms[v])
        if const:
            out[(0,) * len(vars)] = ring.raw_from_int(const)
        return cls.from_dict(ring, vars, out)

    # --- storage ----------------------------------------------------------

    @property
    def terms(self) -> dict:
        if self._dict is None:
            exps = self._exps.tolist()
            coeffs = self._coeffs.tolist()
            self._dict = dict(zip(map(tuple, exps), coeffs))
        return self._dict

    def _arrays(self):
        if self._exps is None:
            n = len(self._dict)
            exps = np.array(list(self._dict.keys()), dtype=np.int64).reshape(n, len(self.vars))
            coeffs = np.fromiter(self._dict.values(), dtype=np.int64, count=n)
            self._exps, self._coeffs = exps, coeffs
        return self._exps, self._coeffs

    def _array_mode(self) -> bool:
        return (
            self.ring.r_den == 1
            and self.ring.modulus < 2**31
            and kernels.backend() != "python"
        )

    def _aligned(self, vars):
        """(exps, coeffs) arrays aligned to the variable tuple ``vars``."""
        exps, coeffs = self._arrays()
        if self.vars == tuple(vars):
            return exps, coeffs
        out = np.zeros((len(coeffs), len(vars)), dtype=np.int64)
        for j, v in enumerate(vars):
            if v in self.vars:
                out[:, j] = exps[:, self.vars.index(v)]
        return out, coeffs

    def _aligned_dict(self, vars):
        if self.vars == tuple(vars):
            return self.terms
        idx = [self.vars.index(v) if v in self.vars else -1 for v in vars]
        return {
            tuple(e[i] if i >= 0 else 0 for i in idx): c for e, c in self.terms.items()
        }

    # --- basic queries ------------------------------------------------------

    def __len__(self):
        return len(self._dict) if self._dict is not None else len(self._coeffs)

    def is_zero(self) -> bool:
        return len(self) == 0

    def degree(self, v: str) -> int:
        """Degree in v; -1 for the zero polynomial, 0 if v does not occur."""
        if self.is_zero():
            return -1
        if v not in self.vars:
            return 0
        j = self.vars.index(v)
        if self._exps is not None:
            return int(self._exps[:, j].max())
        return max(e[j] for e in self._dict)

    def total_degree(self) -> int:
        if self.is_zero():
            return -1
        if not self.vars:
            return 0
        if self._exps is not None:
            return int(self._exps.sum(axis=1).max())
        return max(sum(e) for e in self._dict)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.vars == other.vars
            and self.terms == other.terms
        )

    def __hash__(self):
        raise TypeError("MultiPoly is not hashable")

    def __repr__(self):
        if self.is_zero():
            return "MultiPoly(0)"
        parts = []
        for exp, c in sorted(self.terms.items())[:8]:
            mono = "*".join(
                f"{v}^{e}" if e > 1 else v for v, e in zip(self.vars, exp) if e
            )
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        more = " + ..." if len(self) > 8 else ""
        return f"MultiPoly({' + '.join(parts)}{more})"

    def lowest_monomial(self):
        """(vars, exponents, coeff) of the lexicographically least term."""
        exp = min(self.terms)
        return self.vars, exp, self.terms[exp]

    # --- ring operations ----------------------------------------------------

    def _check_ring(self, other: "MultiPoly"):
        if self.ring != other.ring:
            raise ParameterError("mismatched ring parameters")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check_ring(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        vars = _merge_vars(self.vars, other.vars)
        if self._array_mode() and len(self) + len(other) >= _SMALL_PRODUCT:
            ea, ca = self._aligned(vars)
            eb, cb = other._aligned(vars)
            exps = np.concatenate([ea, eb])
            coeffs = np.concatenate([ca, cb])
            bounds = exps.max(axis=0) + 1
            packed = _pack(exps, bounds)
            if packed is not None:
                keys, vals = kernels.combine_packed(packed, coeffs, self.ring.modulus)
                return MultiPoly._from_arrays(self.ring, vars, _unpack(keys, bounds), vals)
        ring = self.ring
        out = dict(self._aligned_dict(vars))
        for e, c in other._aligned_dict(vars).items():
            acc = ring.raw_add(out.get(e, ring.raw_zero()), c)
            if ring.raw_is_zero(acc):
                out.pop(e, None)
            else:
                out[e] = acc
        return MultiPoly.from_dict(ring, vars, out)

    def __neg__(self) -> "MultiPoly":
        return self.scale(-1)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def scale(self, c) -> "MultiPoly":
        """Multiply by a scalar (int or raw)."""
        ring = self.ring
        raw = ring.raw_from_int(c) if isinstance(c, int) else c
        if ring.raw_is_zero(raw):
            return MultiPoly.zero(ring)
        if self.is_zero():
            return self
        if ring.r_den == 1 and self._exps is not None and self._dict is None:
            coeffs = self._coeffs * raw % ring.modulus
            keep = coeffs != 0
            return MultiPoly._from_arrays(ring, self.vars, self._exps[keep], coeffs[keep])
        out = {}
        for e, v in self.terms.items():
            prod = ring.raw_mul(v, raw)
            if not ring.raw_is_zero(prod):
                out[e] = prod
        return MultiPoly(ring, self.vars, terms=out) if len(out) == len(self.terms) \
            else MultiPoly.from_dict(ring, self.vars, out)

    def __mul__(self, other):
        if isinstance(other, MultiPoly):
            return self._mul_poly(other)
        return self.scale(other)

    __rmul__ = __mul__

    def _mul_poly(self, other: "MultiPoly") -> "MultiPoly":
        self._check_ring(other)
        if self.is_zero() or other.is_zero():
            return MultiPoly.zero(self.ring)
        vars = _merge_vars(self.vars, other.vars)
        if self._array_mode() and len(self) * len(other) >= _SMALL_PRODUCT:
            result = self._mul_packed(other, vars)
            if result is not None:
                return result
        ring = self.ring
        out = {}
        zero = ring.raw_zero()
        for ea, ca in self._aligned_dict(vars).items():
            for eb, cb in other._aligned_dict(vars).items():
                e = tuple(x + y for x, y in zip(ea, eb))
                acc = ring.raw_add(out.get(e, zero), ring.raw_mul(ca, cb))
                if ring.raw_is_zero(acc):
                    out.pop(e, None)
                else:
                    out[e] = acc
        return MultiPoly.from_dict(ring, vars, out)

    def _mul_packed(self, other: "MultiPoly", vars):
        ea, ca = self._aligned(vars)
        eb, cb = other._aligned(vars)
        bounds = ea.max(axis=0) + eb.max(axis=0) + 1
        ka = _pack(ea, bounds)
        kb = _pack(eb, bounds)
        if ka is None or kb is None:
            return None
        keys, vals = kernels.multiply_packed(ka, ca, kb, cb, self.ring.modulus)
        return MultiPoly._from_arrays(self.ring, vars, _unpack(keys, bounds), vals)

    def pow(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ParameterError("negative exponent")
        result = MultiPoly.const(self.ring, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    __pow__ = pow

    # --- calculus and extraction ---------------------------------------------

    def partial_derivative(self, v: str) -> "MultiPoly":
        ring = self.ring
        if v not in self.vars:
            return MultiPoly.zero(ring)
        i = self.vars.index(v)
        if ring.r_den == 1 and self._exps is not None and self._dict is None:
            exps, coeffs = self._exps, self._coeffs
            col = exps[:, i]
            keep = col > 0
            coeffs = coeffs[keep] * (col[keep] % ring.modulus) % ring.modulus
            exps = exps[keep].copy()
            exps[:, i] -= 1
            nz = coeffs != 0
            return MultiPoly._from_arrays(ring, self.vars, exps[nz], coeffs[nz])
        out = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            prod = ring.raw_mul(c, ring.raw_from_int(e[i]))
            if ring.raw_is_zero(prod):
                continue
            out[e[:i] + (e[i] - 1,) + e[i + 1:]] = prod
        return MultiPoly.from_dict(ring, self.vars, out)

    def coefficient_of(self, v: str, d: int) -> "MultiPoly":
        """Coefficient of v^d, a polynomial in the remaining variables."""
        if d < 0:
            raise ParameterError("degree must be nonnegative")
        if v not in self.vars:
            return self if d == 0 else MultiPoly.zero(self.ring)
        i = self.vars.index(v)
        rest = self.vars[:i] + self.vars[i + 1:]
        if self._exps is not None and self._dict is None:
            exps, coeffs = self._exps, self._coeffs
            keep = exps[:, i] == d
            exps = np.delete(exps[keep], i, axis=1)
            return MultiPoly._from_arrays(self.ring, rest, exps, coeffs[keep])
        out = {
            e[:i] + e[i + 1:]: c for e, c in self.terms.items() if e[i] == d
        }
        return MultiPoly.from_dict(self.ring, rest, out)

    def truncate_var(self, v: str, lo: int, hi: int) -> "MultiPoly":
        """Keep only terms whose degree in v lies in [lo, hi]."""
        if v not in self.vars:
            return self if lo <= 0 <= hi else MultiPoly.zero(self.ring)
        i = self.vars.index(v)
        if self._exps is not None and self._dict is None:
            exps, coeffs = self._exps, self._coeffs
            keep = (exps[:, i] >= lo) & (exps[:, i] <= hi)
            if keep.all():
                return self
            return MultiPoly._from_arrays(self.ring, self.vars, exps[keep], coeffs[keep])
        out = {e: c for e, c in self.terms.items() if lo <= e[i] <= hi}
        if len(out) == len(self.terms):
            return self
        return MultiPoly.from_dict(self.ring, self.vars, out)

    def substitute(self, v: str, repl) -> "MultiPoly":
        """Exact composition P[v := repl]; repl may be a MultiPoly or int."""
        ring = self.ring
        if not isinstance(repl, MultiPoly):
            repl = MultiPoly.const(ring, repl)
        if v not in self.vars:
            return self
        i = self.vars.index(v)
        rest = self.vars[:i] + self.vars[i + 1:]
        slices = {}
        for e, c in self.terms.items():
            slices.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
        result = MultiPoly.zero(ring)
        for d in range(max(slices), -1, -1):
            result = result * repl
            if d in slices:
                result = result + MultiPoly.from_dict(ring, rest, slices[d])
        return result

    def evaluate(self, assignment: dict) -> RamifiedElem:
        """Value at a full scalar assignment of the variables."""
        ring = self.ring
        raws = {}
        for v in self.vars:
            if v not in assignment:
                raise ParameterError(f"missing assignment for variable {v}")
        for v, val in assignment.items():
            if isinstance(val, RamifiedElem):
                raws[v] = val.raw
            elif isinstance(val, int):
                raws[v] = ring.raw_from_int(val)
            else:
                raws[v] = val
        powers = {}
        for i, v in enumerate(self.vars):
            top = self.degree(v)
            col = [ring.raw_one()]
            for _ in range(top):
                col.append(ring.raw_mul(col[-1], raws[v]))
            powers[i] = col
        acc = ring.raw_zero()
        for e, c in self.terms.items():
            term = c
            for i, d in enumerate(e):
                if d:
                    term = ring.raw_mul(term, powers[i][d])
            acc = ring.raw_add(acc, term)
        return RamifiedElem.from_raw(acc, ring)

    def relabel(self, mapping: dict) -> "MultiPoly":
        """Rename variables via an injective mapping old -> new."""
        new_vars = tuple(mapping.get(v, v) for v in self.vars)
        if len(set(new_vars)) != len(new_vars):
            raise ParameterError("relabel mapping must stay injective")
        if self._exps is not None:
            order = sorted(range(len(new_vars)), key=lambda i: var_key(new_vars[i]))
            exps, coeffs = self._exps, self._coeffs
            return MultiPoly._from_arrays(
                self.ring,
                tuple(new_vars[i] for i in order),
                exps[:, order],
                coeffs,
            )
        return MultiPoly.from_dict(self.ring, new_vars, self.terms)

    def reduce_to(self, ring: RingParams) -> "MultiPoly":
        """Reduce coefficients into a ring with smaller s (same p, r)."""
        if (ring.p, ring.r_num, ring.r_den) != (self.ring.p, self.ring.r_num, self.ring.r_den):
            raise ParameterError("can only reduce within the same p and r")
        if ring.s > self.ring.s:
            raise ParameterError("target ring must not be larger")
        m = ring.modulus
        out = {}
        for e, c in self.terms.items():
            out[e] = c % m if ring.r_den == 1 else tuple(x % m for x in c)
        return MultiPoly.from_dict(ring, self.vars, out)


# --- packing ------------------------------------------------------------------


def _pack(exps, bounds):
    cap = 1
    for b in bounds.tolist():
        cap *= int(b)
        if cap >= 2**62:
            return None
    weights = np.ones(len(bounds), dtype=np.int64)
    for i in range(len(bounds) - 2, -1, -1):
        weights[i] = weights[i + 1] * bounds[i + 1]
    return exps @ weights


def _unpack(keys, bounds):
    n = len(keys)
    out = np.empty((n, len(bounds)), dtype=np.int64)
    rem = keys
    for i in range(len(bounds) - 1, -1, -1):
        rem, out[:, i] = np.divmod(rem, bounds[i])
    return out


# --- spec-level operation names -------------------------------------------------


def poly_add(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    return p + q


def poly_mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    return p * q


def poly_pow(p: MultiPoly, n: int) -> MultiPoly:
    return p.pow(n)


def partial_derivative(p: MultiPoly, v: str) -> MultiPoly:
    return p.partial_derivative(v)


def coefficient_of(p: MultiPoly, v: str, d: int) -> MultiPoly:
    return p.coefficient_of(v, d)


def substitute(p: MultiPoly, v: str, q) -> MultiPoly:
    return p.substitute(v, q)


def evaluate(p: MultiPoly, assignment: dict) -> RamifiedElem:
    return p.evaluate(assignment)


# --- products with degree targeting ----------------------------------------------


def truncated_product(factors, var_bounds: dict | None = None) -> MultiPoly:
    """Product of ``factors`` keeping, per constrained variable, only the
    degrees that can still land inside [lo, hi] by the end of the product.

    ``var_bounds`` maps a variable name to an inclusive (lo, hi) window on the
    degree of that variable in the final product.  Terms that over- or
    under-shoot the window given the remaining factors' maximal degrees are
    pruned after every step, which keeps intermediate expansions small.
    """
    factors = list(factors)
    if not factors:
        raise ParameterError("empty product")
    ring = factors[0].ring
    var_bounds = var_bounds or {}
    # remaining[v][j] = max degree in v contributed by factors[j:]
    remaining = {}
    for v in var_bounds:
        caps = [max(f.degree(v), 0) for f in factors]
        suffix = [0] * (len(factors) + 1)
        for j in range(len(factors) - 1, -1, -1):
            suffix[j] = suffix[j + 1] + caps[j]
        remaining[v] = suffix
    acc = MultiPoly.const(ring, 1)
    for j, f in enumerate(factors):
        acc = acc * f
        for v, (lo, hi) in var_bounds.items():
            acc = acc.truncate_var(v, lo - remaining[v][j + 1], hi)
        if acc.is_zero():
            return acc
    return acc


def binomial_power(ring: RingParams, va: str, vb: str, e: int) -> MultiPoly:
    """(va - vb)^e, expanded."""
    from math import comb

    m = ring.modulus
    terms = {}
    for a in range(e + 1):
        c = comb(e, a) * (-1) ** a % m
        if c:
            terms[(e - a, a)] = ring.raw_from_int(c)
    return MultiPoly.from_dict(ring, (va, vb), terms)


# --- Pochhammer (falling factorial) basis ----------------------------------------


def pochhammer_poly(ring: RingParams, m: int, v: str) -> MultiPoly:
    """(t)_m = prod_{i=1}^{m} (t - i + 1) in the variable ``v``."""
    if m < 0:
        raise ParameterError("Pochhammer length must be nonnegative")
    out = MultiPoly.const(ring, 1)
    for j in range(m):
        out = out * MultiPoly.linear(ring, {v: 1}, const=-j)
    return out


@lru_cache(maxsize=None)
def _stirling2_rows(n: int, mod: int):
    """Rows 0..n of Stirling numbers of the second kind, reduced mod ``mod``."""
    rows = [[1]]
    for i in range(1, n + 1):
        prev = rows[-1]
        row = [0] * (i + 1)
        for k in range(1, i + 1):
            row[k] = (k * (prev[k] if k < i else 0) + prev[k - 1]) % mod
        rows.append(row)
    return rows


@dataclass
class PochhammerExpansion:
    """Expansion sum_d coeffs[d] * (v)_d with polynomial coefficients."""

    ring: RingParams
    variable: str
    coeffs: dict

    def coefficient(self, d: int) -> MultiPoly:
        return self.coeffs.get(d, MultiPoly.zero(self.ring))

    def to_poly(self) -> MultiPoly:
        acc = MultiPoly.zero(self.ring)
        for d, c in self.coeffs.items():
            acc = acc + c * pochhammer_poly(self.ring, d, self.variable)
        return acc


def to_pochhammer_basis(p: MultiPoly, v: str) -> PochhammerExpansion:
    """Exact rewrite of ``p`` in the falling-factorial basis of ``v``,
    using t^n = sum_k S(n,k) (t)_k with Stirling numbers mod p^s."""
    ring = p.ring
    deg = max(p.degree(v), 0)
    rows = _stirling2_rows(deg, ring.modulus)
    buckets: dict[int, dict] = {}
    iv = p.vars.index(v) if v in p.vars else None
    for e, c in p.terms.items():
        if iv is None:
            n, rest = 0, e
        else:
            n, rest = e[iv], e[:iv] + e[iv + 1:]
        for k in range(n + 1):
            s = rows[n][k]
            if not s:
                continue
            b = buckets.setdefault(k, {})
            acc = ring.raw_add(b.get(rest, ring.raw_zero()), ring.raw_mul(c, ring.raw_from_int(s)))
            if ring.raw_is_zero(acc):
                b.pop(rest, None)
            else:
                b[rest] = acc
    rest_vars = p.vars if iv is None else p.vars[:iv] + p.vars[iv + 1:]
    coeffs = {}
    for k, b in buckets.items():
        poly = MultiPoly.from_dict(ring, rest_vars, b)
        if not poly.is_zero():
            coeffs[k] = poly
    return PochhammerExpansion(ring, v, coeffs)
