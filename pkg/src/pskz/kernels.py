"""Packed-key kernels for sparse polynomial multiplication.

A term ``coeff * x1^e1 ... xn^en`` with all coefficients in ``Z/m`` (m <
2^31) is packed into a single int64 key via a mixed-radix encoding of the
exponent vector.  Multiplying two polynomials is then: form all pairwise key
sums and coefficient products, sort, and merge equal keys.

Three backends implement the merge:

* ``numba`` -- @njit kernel (default when numba imports);
* ``numpy`` -- pure-numpy argsort/reduceat fallback;
* ``python`` -- signals the caller to use plain dict arithmetic.

Select with the ``PSKZ_KERNEL`` environment variable.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        return wrap(args[0]) if args and callable(args[0]) else wrap


_VALID_BACKENDS = ("numba", "numpy", "python")


def backend() -> str:
    """Active backend name, honouring PSKZ_KERNEL."""
    env = os.environ.get("PSKZ_KERNEL", "").strip().lower()
    if env:
        if env not in _VALID_BACKENDS:
            raise ValueError(
                f"PSKZ_KERNEL must be one of {_VALID_BACKENDS}, got {env!r}"
            )
        if env == "numba" and not HAS_NUMBA:
            raise ValueError("PSKZ_KERNEL=numba but numba is not installed")
        return env
    return "numba" if HAS_NUMBA else "numpy"


@njit(cache=True)
def _merge_sorted_numba(keys, coeffs, mod):
    order = np.argsort(keys, kind="mergesort")
    n = keys.shape[0]
    out_k = np.empty(n, np.int64)
    out_c = np.empty(n, np.int64)
    m = 0
    i = 0
    while i < n:
        k = keys[order[i]]
        acc = 0
        while i < n and keys[order[i]] == k:
            acc += coeffs[order[i]]
            i += 1
        acc %= mod
        if acc:
            out_k[m] = k
            out_c[m] = acc
            m += 1
    return out_k[:m].copy(), out_c[:m].copy()


def _merge_sorted_numpy(keys, coeffs, mod):
    order = np.argsort(keys, kind="stable")
    sk = keys[order]
    sc = coeffs[order]
    starts = np.flatnonzero(np.concatenate(([True], sk[1:] != sk[:-1])))
    sums = np.add.reduceat(sc, starts) % mod
    nz = sums != 0
    return sk[starts][nz], sums[nz]


def multiply_packed(ka, ca, kb, cb, mod: int):
    """Multiply two packed polynomials; returns (keys, coeffs), zero-free.

    Coefficients must already be reduced mod ``mod`` with ``mod < 2^31``,
    so pairwise products fit in int64; duplicate-key runs have length at
    most ``min(len a, len b)``, so the reduced-product sums fit as well.
    """
    if len(ka) == 0 or len(kb) == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    if len(ka) < len(kb):
        ka, ca, kb, cb = kb, cb, ka, ca
    keys = (ka[:, None] + kb[None, :]).ravel()
    coeffs = (ca[:, None] * cb[None, :] % mod).ravel()
    if backend() == "numba":
        return _merge_sorted_numba(keys, coeffs, mod)
    return _merge_sorted_numpy(keys, coeffs, mod)


def combine_packed(keys, coeffs, mod: int):
    """Merge duplicate keys in a single packed polynomial."""
    if len(keys) == 0:
        return keys, coeffs
    if backend() == "numba":
        return _merge_sorted_numba(keys, coeffs, mod)
    return _merge_sorted_numpy(keys, coeffs, mod)


def warmup():
    """Trigger numba compilation outside of timed sections."""
    if HAS_NUMBA:
        k = np.arange(4, dtype=np.int64)
        c = np.ones(4, dtype=np.int64)
        _merge_sorted_numba(k, c, 5)
