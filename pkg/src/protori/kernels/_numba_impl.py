"""numba-compiled versions of the hot loops.  Same contracts as _numpy_impl."""

import numpy as np
from numba import njit

NEG_INF = -(1 << 40)


@njit(cache=True)
def carry_add(x, y, radices):
    b, n = x.shape
    out = np.empty_like(x)
    for i in range(b):
        carry = 0
        for k in range(n):
            s = x[i, k] + y[i, k] + carry
            if s >= radices[k]:
                out[i, k] = s - radices[k]
                carry = 1
            else:
                out[i, k] = s
                carry = 0
    return out


@njit(cache=True)
def negate(x, radices):
    b, n = x.shape
    out = np.empty_like(x)
    for i in range(b):
        borrow = 0
        for k in range(n):
            s = -x[i, k] - borrow
            if s < 0:
                out[i, k] = s + radices[k]
                borrow = 1
            else:
                out[i, k] = s
                borrow = 0
    return out


@njit(cache=True)
def window(x, radices, k):
    b = x.shape[0]
    out = np.zeros(b, dtype=np.int64)
    for i in range(b):
        acc = 0
        place = 1
        for j in range(k + 1):
            acc += x[i, j] * place
            place *= radices[j]
        out[i] = acc
    return out


@njit(cache=True)
def from_ints(z, radices):
    n = radices.shape[0]
    out = np.empty((z.shape[0], n), dtype=np.int64)
    for i in range(z.shape[0]):
        rest = z[i]
        for k in range(n):
            d = rest % radices[k]
            if d < 0:
                d += radices[k]
            out[i, k] = d
            rest = (rest - d) // radices[k]
    return out


@njit(cache=True)
def hom_images(matrix, src_orders, tgt_orders):
    t = src_orders.shape[0]
    size = 1
    for j in range(t):
        size *= src_orders[j]
    coords = np.zeros(t, dtype=np.int64)
    out = np.zeros(size, dtype=np.int64)
    for i in range(size):
        rest = i
        for j in range(t):
            coords[j] = rest % src_orders[j]
            rest //= src_orders[j]
        idx = 0
        place = 1
        for r in range(tgt_orders.shape[0]):
            val = 0
            for j in range(t):
                val += matrix[r, j] * coords[j]
            val %= tgt_orders[r]
            if val < 0:
                val += tgt_orders[r]
            idx += val * place
            place *= tgt_orders[r]
        out[i] = idx
    return out


@njit(cache=True)
def _gcd(a, b):
    a = abs(a)
    b = abs(b)
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def functional_scan(cands, v, hi, strand_int, strand_den, special, delta, gen_delta, forced,
                    maxexp):
    m, r = cands.shape
    keep = np.zeros(m, dtype=np.bool_)
    for c in range(m):
        d = 0
        for j in range(r):
            d += cands[c, j] * v[j]
        if d < 1 or d > hi:
            continue
        ok = True
        for i in range(strand_int.shape[0]):
            num = 0
            for j in range(r):
                num += cands[c, j] * strand_int[i, j]
            if num == 0:
                continue
            if forced[i]:
                ok = False
                break
            den = d * strand_den[i]
            g = _gcd(num, den)
            num = abs(num // g)
            den = den // g
            for s in range(special.shape[0]):
                p = special[s]
                vden = 0
                while den % p == 0:
                    den //= p
                    vden += 1
                if delta[i, s] == NEG_INF:
                    continue
                vnum = 0
                while num % p == 0:
                    num //= p
                    vnum += 1
                if vnum - vden < delta[i, s]:
                    ok = False
                    break
            if not ok:
                break
            if gen_delta[i] != NEG_INF and maxexp[den] > -gen_delta[i]:
                ok = False
                break
        keep[c] = ok
    return keep
