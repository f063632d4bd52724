"""Integer inner loops, compiled with numba when available.

Set ``PROTORI_DISABLE_NUMBA=1`` to force the pure-numpy path (useful for
debugging and for the benchmark comparison).  Both backends take and return
int64 numpy arrays and must agree exactly; ``tests/test_kernels.py`` checks
that they do.

Contracts
---------
carry_add(x, y, radices)
    Row-wise mixed-radix sum of digit arrays, carries moving to higher
    positions and falling off the end.
negate(x, radices)
    Row-wise additive inverse modulo the product of the radices.
window(x, radices, k)
    Integer value of digits 0..k of each row.
from_ints(z, radices)
    Mixed-radix digits of each integer modulo the product of the radices.
hom_images(matrix, src_orders, tgt_orders)
    For each element of Z/d_0 + ... (mixed-radix index) the index of its
    image under the integer matrix.
functional_scan(cands, v, hi, strand_int, strand_den, special, delta,
                gen_delta, forced, maxexp)
    Boolean mask over rows u of ``cands``.  With d = u.v, a row passes when
    1 <= d <= hi and, for every strand i, c_i = (u.strand_int[i]) /
    (d * strand_den[i]) is zero or satisfies v_p(c_i) >= delta[i, s] at
    the special primes and v_p(c_i) >= gen_delta[i] at all other primes.
    ``forced[i]`` demands c_i = 0.  NEG_INF marks an absent constraint and
    ``maxexp[n]`` is the largest prime exponent of n.
"""

from __future__ import annotations

import os

import numpy as np

from . import _numpy_impl

NEG_INF = _numpy_impl.NEG_INF


def _numba_requested() -> bool:
    return os.environ.get("PROTORI_DISABLE_NUMBA", "").strip().lower() in ("", "0", "false", "no")


BACKEND = "numpy"
_impl = _numpy_impl
if _numba_requested():
    try:
        from . import _numba_impl

        _impl = _numba_impl
        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba is an optional accelerator
        pass

carry_add = _impl.carry_add
negate = _impl.negate
window = _impl.window
from_ints = _impl.from_ints
hom_images = _impl.hom_images
functional_scan = _impl.functional_scan


def maxexp_table(n: int) -> np.ndarray:
    """``t[k]`` = largest exponent in the factorization of k, for k < n (t[0] = t[1] = 0)."""
    n = max(n, 2)
    t = np.zeros(n, dtype=np.int64)
    sieve = np.ones(n, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    for p in np.nonzero(sieve)[0]:
        pk, e = int(p), 1
        while pk < n:
            t[pk::pk] = np.maximum(t[pk::pk], e)
            pk *= int(p)
            e += 1
    return t


def backends():
    """Both implementations, for differential tests and benchmarks."""
    out = {"numpy": _numpy_impl}
    try:
        from . import _numba_impl

        out["numba"] = _numba_impl
    except ImportError:  # pragma: no cover
        pass
    return out
