"""Exact linear algebra over Q, over the local rings Z_(p), and over Z."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .arith import vp


def as_vec(v) -> tuple:
    return tuple(Fraction(x) for x in v)


def is_zero(v) -> bool:
    return all(x == 0 for x in v)


def rref(rows):
    """Reduced row echelon basis of the Q-span: (basis, pivot columns)."""
    rows = [list(as_vec(r)) for r in rows]
    basis: list[list[Fraction]] = []
    pivots: list[int] = []
    for r in rows:
        r = _reduce_list(r, basis, pivots)
        j = next((j for j, x in enumerate(r) if x != 0), None)
        if j is None:
            continue
        lead = r[j]
        r = [x / lead for x in r]
        for b, pj in zip(basis, pivots):
            if b[j] != 0:
                c = b[j]
                for t in range(len(b)):
                    b[t] -= c * r[t]
        basis.append(r)
        pivots.append(j)
    order = sorted(range(len(pivots)), key=pivots.__getitem__)
    return [tuple(basis[i]) for i in order], [pivots[i] for i in order]


def _reduce_list(r, basis, pivots):
    r = list(r)
    for b, j in zip(basis, pivots):
        if r[j] != 0:
            c = r[j]
            r = [x - c * y for x, y in zip(r, b)]
    return r


def reduce_mod(v, basis, pivots) -> tuple:
    """Projection along span(basis): zeroes the pivot columns.  Kernel = span."""
    return tuple(_reduce_list(as_vec(v), basis, pivots))


def rank(rows) -> int:
    return len(rref(rows)[0])


def in_span(v, basis, pivots) -> bool:
    return is_zero(reduce_mod(v, basis, pivots))


def span_coords(v, basis, pivots):
    """Coordinates of v in an RREF basis (entries at the pivot columns), or None."""
    v = as_vec(v)
    if not in_span(v, basis, pivots):
        return None
    return tuple(v[j] for j in pivots)


def solve_combination(x, gens):
    """Some rational c with x = sum c_i gens[i], or None if x is not in the span."""
    gens = [as_vec(g) for g in gens]
    x = as_vec(x)
    n = len(x)
    m = len(gens)
    # Augmented system: columns are generators.
    rows = [[gens[i][k] for i in range(m)] + [x[k]] for k in range(n)]
    basis, pivots = rref(rows)
    if m in pivots:
        return None
    c = [Fraction(0)] * m
    for b, j in zip(basis, pivots):
        c[j] = b[m]
    return tuple(c)


def intersect_spans(a_basis, b_basis, n: int):
    """RREF basis of span(a) intersected with span(b) inside Q^n."""
    if not a_basis or not b_basis:
        return [], []
    # x = sum s_i a_i = sum t_j b_j; solve for (s, t) in the kernel.
    cols = [as_vec(v) for v in a_basis] + [tuple(-x for x in as_vec(v)) for v in b_basis]
    kern = nullspace_cols(cols, n)
    vecs = []
    for k in kern:
        vecs.append(tuple(sum(k[i] * a_basis[i][t] for i in range(len(a_basis))) for t in range(n)))
    return rref(vecs)


def nullspace_cols(cols, n: int):
    """Basis of {c : sum c_i cols[i] = 0}."""
    m = len(cols)
    rows = [[cols[i][k] for i in range(m)] for k in range(n)]
    basis, pivots = rref(rows)
    free = [j for j in range(m) if j not in pivots]
    out = []
    for f in free:
        c = [Fraction(0)] * m
        c[f] = Fraction(1)
        for b, j in zip(basis, pivots):
            c[j] = -b[f]
        out.append(tuple(c))
    return out


def mat_vec(m, v) -> tuple:
    return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in m)


def mat_mul(a, b):
    bt = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt) for row in a)


def identity(n: int):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def mat_inverse(m):
    """Inverse of a square rational matrix, or None if singular."""
    n = len(m)
    aug = [list(as_vec(row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        lead = aug[col][col]
        aug[col] = [x / lead for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                c = aug[r][col]
                aug[r] = [x - c * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def common_denominator(values) -> int:
    d = 1
    for x in values:
        d = math.lcm(d, Fraction(x).denominator)
    return d


# --- local rings Z_(p) ------------------------------------------------------


def _val(x: Fraction, p: int):
    return None if x == 0 else vp(x, p)


def local_echelon(rows, p: int):
    """Row echelon basis over Z_(p) of the module generated by ``rows``.

    Pivots are chosen with minimal p-valuation, so every elimination factor
    lies in Z_(p) and the module is unchanged.  Returns (rows, pivot
    columns), pivot columns strictly increasing.
    """
    work = [list(as_vec(r)) for r in rows if not is_zero(r)]
    if not work:
        return [], []
    n = len(work[0])
    out, pivots = [], []
    for col in range(n):
        cand = [(vp(r[col], p), i) for i, r in enumerate(work) if r[col] != 0]
        if not cand:
            continue
        _, i = min(cand)
        piv = work.pop(i)
        rest = []
        for r in work:
            if r[col] != 0:
                c = r[col] / piv[col]
                r = [x - c * y for x, y in zip(r, piv)]
            if not is_zero(r):
                rest.append(r)
        work = rest
        out.append(tuple(piv))
        pivots.append(col)
        if not work:
            break
    return out, pivots


def echelon_coords(v, rows, pivots):
    """Coefficients of v in an echelon basis, or None if v is outside the Q-span."""
    v = list(as_vec(v))
    coeffs = []
    for r, j in zip(rows, pivots):
        c = v[j] / r[j]
        if c != 0:
            v = [x - c * y for x, y in zip(v, r)]
        coeffs.append(c)
    if not is_zero(v):
        return None
    return coeffs


# --- integers ---------------------------------------------------------------


def integer_row_basis(rows):
    """Hermite-style basis (as a list of integer rows) of the Z-span of ``rows``."""
    work = [list(map(int, r)) for r in rows if any(r)]
    if not work:
        return []
    n = len(work[0])
    out = []
    for col in range(n):
        active = [r for r in work if r[col] != 0]
        others = [r for r in work if r[col] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            piv = active[0]
            nxt = [piv]
            for r in active[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                if r[col] != 0:
                    nxt.append(r)
                elif any(r):
                    others.append(r)
            active = nxt
        if active:
            out.append(active[0])
        work = others
        if not work:
            break
    return out


def determinantal_divisor(rows) -> int:
    """gcd of the maximal nonzero minors of an integer matrix (1 for the empty matrix)."""
    basis = integer_row_basis(rows)
    if not basis:
        return 1
    r = len(basis)
    n = len(basis[0])
    g = 0
    for cols in itertools.combinations(range(n), r):
        g = math.gcd(g, _int_det([[row[c] for c in cols] for row in basis]))
        if g == 1:
            break
    return g


def _int_det(m) -> int:
    """Exact determinant via fraction-free (Bareiss) elimination."""
    m = [list(r) for r in m]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if sw is None:
                return 0
            m[k], m[sw] = m[sw], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1


def smith_normal_form(m):
    """Integer Smith form: returns (S, U, V) with U * M * V = S, U and V unimodular.

    The diagonal of S is nonnegative and forms a divisibility chain.
    """
    a = [list(map(int, r)) for r in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, c):  # row dst += c * row src
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        for r in a:
            r[dst] += c * r[src]
        for r in v:
            r[dst] += c * r[src]

    t = 0
    while t < min(rows, cols):
        nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j] != 0]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    add_row(t, i, -q)
                    if a[i][t] != 0:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    add_col(t, j, -q)
                    if a[t][j] != 0:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # enforce divisibility of the remaining block by the pivot
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return a, u, v
