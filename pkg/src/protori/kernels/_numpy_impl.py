"""Pure-numpy versions of the hot loops.  Vectorized over the batch axis."""

import numpy as np


def carry_add(x, y, radices):
    n = x.shape[1]
    out = np.empty_like(x)
    carry = np.zeros(x.shape[0], dtype=np.int64)
    for k in range(n):
        s = x[:, k] + y[:, k] + carry
        carry = (s >= radices[k]).astype(np.int64)
        out[:, k] = s - carry * radices[k]
    return out


def negate(x, radices):
    # -x = (complement digits) + 1, computed as a borrow chain from zero.
    n = x.shape[1]
    out = np.empty_like(x)
    borrow = np.zeros(x.shape[0], dtype=np.int64)
    for k in range(n):
        s = -x[:, k] - borrow
        borrow = (s < 0).astype(np.int64)
        out[:, k] = s + borrow * radices[k]
    return out


def window(x, radices, k):
    acc = np.zeros(x.shape[0], dtype=np.int64)
    place = 1
    for j in range(k + 1):
        acc += x[:, j] * place
        place *= radices[j]
    return acc


def from_ints(z, radices):
    n = radices.shape[0]
    out = np.empty((z.shape[0], n), dtype=np.int64)
    rest = z.copy()
    for k in range(n):
        out[:, k] = np.mod(rest, radices[k])
        rest = np.floor_divide(rest - out[:, k], radices[k])
    return out


def hom_images(matrix, src_orders, tgt_orders):
    """Target index of f(x) for every source element x, in mixed-radix order.

    Element index i of a group with orders (d_0, ..., d_{t-1}) has
    coordinate j equal to (i // (d_0 ... d_{j-1})) % d_j.
    """
    size = int(np.prod(src_orders)) if src_orders.shape[0] else 1
    idx = np.arange(size, dtype=np.int64)
    coords = np.empty((size, src_orders.shape[0]), dtype=np.int64)
    place = 1
    for j in range(src_orders.shape[0]):
        coords[:, j] = (idx // place) % src_orders[j]
        place *= src_orders[j]
    out = np.zeros(size, dtype=np.int64)
    place = 1
    for r in range(tgt_orders.shape[0]):
        val = np.zeros(size, dtype=np.int64)
        for j in range(src_orders.shape[0]):
            val += matrix[r, j] * coords[:, j]
        out += np.mod(val, tgt_orders[r]) * place
        place *= tgt_orders[r]
    return out


NEG_INF = -(1 << 40)


def _strip(vals, p):
    """Remove every factor p from positive integers; return (rest, valuation)."""
    rest = vals.copy()
    v = np.zeros(vals.shape, dtype=np.int64)
    mask = rest % p == 0
    while mask.any():
        v[mask] += 1
        rest[mask] //= p
        mask = rest % p == 0
    return rest, v


def functional_scan(cands, v, hi, strand_int, strand_den, special, delta, gen_delta, forced,
                    maxexp):
    """Boolean mask over candidate rows u; see ``protori.kernels`` for the contract."""
    d = cands @ v
    keep = (d >= 1) & (d <= hi)
    dd = np.where(keep, d, 1)
    for i in range(strand_int.shape[0]):
        num = cands @ strand_int[i]
        if forced[i]:
            keep &= num == 0
            continue
        nz = num != 0
        den = dd * strand_den[i]
        g = np.gcd(num, den)
        num_r = np.where(nz, num // np.where(nz, g, 1), 1)
        den_r = den // np.where(nz, g, den)
        for s in range(special.shape[0]):
            p = special[s]
            den_r, vden = _strip(den_r, p)
            if delta[i, s] == NEG_INF:
                continue
            _, vnum = _strip(np.abs(num_r), p)
            keep &= ~nz | (vnum - vden >= delta[i, s])
        if gen_delta[i] == NEG_INF:
            continue
        keep &= ~nz | (maxexp[den_r] <= -gen_delta[i])
    return keep
