"""Bounded searches: rank-1 idempotents and near-isomorphism witnesses.

All searches work in the pivot coordinates of the Q-span of the group
(the coordinates at the pivot columns of its reduced row echelon basis),
so their size depends on the rank, not on the ambient dimension.

Enumeration order
-----------------
Integer vectors in [-B, B]^r are visited by increasing max-norm, then by
increasing number of nonzero entries, then lexicographically under the
entry order 1, -1, 2, -2, ..., 0 read along ``coord_order`` (so among unit
vectors e_1 comes first).  Lines are
represented by primitive vectors whose first nonzero entry (along
``coord_order``) is positive.  Functionals f = u / d are visited by
increasing common denominator d, then by the vector order on u.  The first
witness in this order is returned, so results are deterministic and depend
only on the group, the bound, and the coordinate order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .. import _linalg as la
from .. import kernels
from ..arith import INF
from .strands import LineHeights, StrandGroup, maps_into

NEG_INF = kernels.NEG_INF
POS_INF = -NEG_INF


@lru_cache(maxsize=16)
def candidate_vectors(r: int, bound: int, coord_order: tuple | None = None) -> np.ndarray:
    """All of [-bound, bound]^r as an int64 array in enumeration order."""
    order = tuple(range(r)) if coord_order is None else tuple(coord_order)
    vals = np.arange(-bound, bound + 1, dtype=np.int64)
    grids = np.meshgrid(*([vals] * r), indexing="ij")
    cands = np.stack([g.ravel() for g in grids], axis=1) if r else np.zeros((1, 0), np.int64)
    # 1, -1, 2, -2, ..., 0 -> 0, 1, 2, 3, ..., 2 * bound
    entry_rank = np.where(cands == 0, 2 * bound, 2 * np.abs(cands) - (cands > 0) - 1)
    norm = np.abs(cands).max(axis=1) if r else np.zeros(1, np.int64)
    nnz = (cands != 0).sum(axis=1)
    keys = [entry_rank[:, j] for j in reversed(order)] + [nnz, norm]
    idx = np.lexsort(keys)
    out = cands[idx]
    out.setflags(write=False)
    return out


def line_candidates(r: int, bound: int, coord_order: tuple | None = None):
    """Primitive vectors with positive leading entry along coord_order, in order."""
    order = tuple(range(r)) if coord_order is None else tuple(coord_order)
    for u in candidate_vectors(r, bound, coord_order):
        if not u.any():
            continue
        lead = next(int(u[j]) for j in order if u[j] != 0)
        if lead < 0:
            continue
        if math.gcd(*map(int, u)) != 1:
            continue
        yield tuple(int(t) for t in u)


@dataclass(frozen=True)
class Idempotent:
    """e = v f with f . v = 1."""

    v: tuple
    f: tuple

    @property
    def matrix(self):
        return tuple(tuple(a * b for b in self.f) for a in self.v)

    def complement_matrix(self):
        n = len(self.v)
        return tuple(
            tuple(Fraction(int(i == j)) - self.v[i] * self.f[j] for j in range(n)) for i in range(n)
        )


def _delta(h, g):
    """Lower bound on v_p(c) for c * (line of g) to absorb a strand of height h."""
    if h is INF:
        return NEG_INF if g is INF else POS_INF
    if g is INF:
        return NEG_INF
    return h - g


def _functional_constraints(a: StrandGroup, g: LineHeights):
    """Kernel inputs describing which values f(w_i) are admissible."""
    special = sorted(set(g.keys).union(*(s.coeff.keys for s in a.strands)))
    n_s = len(a.strands)
    delta = np.zeros((n_s, len(special)), dtype=np.int64)
    gen = np.zeros(n_s, dtype=np.int64)
    forced = np.zeros(n_s, dtype=np.bool_)
    for i, s in enumerate(a.strands):
        gd = _delta(s.coeff.default, g.default)
        gen[i] = gd
        if gd == POS_INF or (gd != NEG_INF and gd > 0):
            forced[i] = True
        for k, p in enumerate(special):
            d = _delta(s.coeff[p], g[p])
            delta[i, k] = d
            if d == POS_INF:
                forced[i] = True
    return np.asarray(special, dtype=np.int64), delta, gen, forced


def _strand_pivot_data(a: StrandGroup):
    ints, dens = [], []
    for s in a.strands:
        c = a.pivot_coords(s.w)
        d = la.common_denominator(c)
        ints.append([int(t * d) for t in c])
        dens.append(d)
    return np.asarray(ints, dtype=np.int64).reshape(len(a.strands), a.rank), np.asarray(
        dens, dtype=np.int64
    )


def find_rank1_idempotent(a: StrandGroup, bound: int, coord_order=None, verify: bool = True):
    """First idempotent e = v f (in the documented order) with e(A) in A, or None.

    v runs over primitive integer pivot-coordinate vectors with entries in
    [-bound, bound]; f = u / d with u in [-bound, bound]^r and 1 <= d <= bound.
    For a fixed v the admissible f are exactly those whose values on the
    strands satisfy the valuation bounds v_p(f(w_i)) >= h_i(p) - h_p(v);
    the compiled kernel filters all u at once.
    """
    r = a.rank
    if r == 0:
        return None
    order = None if coord_order is None else tuple(coord_order)
    cands = candidate_vectors(r, bound, order)
    strand_int, strand_den = _strand_pivot_data(a)
    maxexp = kernels.maxexp_table(int(bound * strand_den.max()) + 2)
    for v in line_candidates(r, bound, order):
        v_full = a.from_pivot_coords(v)
        g = a.line_heights(v_full)
        special, delta, gen, forced = _functional_constraints(a, g)
        forced_rows = [a.pivot_coords(s.w) for s, f in zip(a.strands, forced) if f]
        if forced_rows:
            basis, pivots = la.rref(forced_rows)
            if la.in_span(v, basis, pivots):
                continue
        v_arr = np.asarray(v, dtype=np.int64)
        mask = kernels.functional_scan(
            cands, v_arr, bound, strand_int, strand_den, special, delta, gen, forced, maxexp
        )
        hits = np.nonzero(mask)[0]
        if hits.size == 0:
            continue
        dvals = cands[hits] @ v_arr
        best = hits[np.lexsort((hits, dvals))[0]]
        u = cands[best]
        d = int(u @ v_arr)
        f_piv = [Fraction(int(t), d) for t in u]
        f_full = [Fraction(0)] * a.ambient
        for k, col in enumerate(a.span[1]):
            f_full[col] = f_piv[k]
        e = Idempotent(tuple(v_full), tuple(f_full))
        if verify and not maps_into(e.matrix, a, a):
            raise AssertionError(f"kernel accepted an idempotent that does not preserve A: {e}")
        return e
    return None


# --- near-isomorphism ---------------------------------------------------------


def _pivot_map_to_matrix(m_piv, a: StrandGroup, b: StrandGroup):
    """Ambient matrix acting on span(A) as m_piv in pivot coordinates, zero elsewhere."""
    basis_b, _ = b.span
    _, piv_a = a.span
    out = [[Fraction(0)] * a.ambient for _ in range(b.ambient)]
    for i in range(b.rank):
        for k in range(a.rank):
            c = m_piv[i][k]
            if c:
                col = piv_a[k]
                for row in range(b.ambient):
                    out[row][col] += c * basis_b[i][row]
    return tuple(tuple(r) for r in out)


def matrix_candidates(r: int, bound: int):
    """Invertible r x r matrices U / d in enumeration order (d first, then entries of U)."""
    for d in range(1, bound + 1):
        for entries in _lazy_vectors(r * r, bound):
            if d > 1 and math.gcd(math.gcd(*entries), d) != 1:
                continue
            m = tuple(tuple(Fraction(entries[i * r + j], d) for j in range(r)) for i in range(r))
            inv = la.mat_inverse(m)
            if inv is None:
                continue
            yield m, inv


def _lazy_vectors(n: int, bound: int):
    """Enumeration order of :func:`candidate_vectors` without materializing it."""
    ranks = []
    for k in range(1, bound + 1):
        ranks += [k, -k]
    ranks.append(0)
    for norm in range(0, bound + 1):
        vals = [t for t in ranks if abs(t) <= norm]
        for nnz in range(0, n + 1):
            yield from _vectors_with(n, vals, norm, nnz)


def _vectors_with(n, vals, norm, nnz):
    def rec(prefix, left_nnz, hit):
        pos = len(prefix)
        if pos == n:
            if left_nnz == 0 and (hit or norm == 0):
                yield tuple(prefix)
            return
        if n - pos < left_nnz:
            return
        for t in vals:
            if t == 0:
                yield from rec(prefix + [0], left_nnz, hit)
            elif left_nnz > 0:
                yield from rec(prefix + [t], left_nnz - 1, hit or abs(t) == norm)

    yield from rec([], nnz, False)


@dataclass
class NearIsoResult:
    multipliers: set
    verdict: str
    witnesses: list
    searched: int
    exhausted: bool
    reason: str = ""


def near_iso_search(a: StrandGroup, b: StrandGroup, bound: int, budget: int = 2000) -> NearIsoResult:
    """Collect multipliers n with phi: A -> B, psi = n phi^-1: B -> A.

    Stops as soon as the gcd of the collected multipliers is 1, or after
    ``budget`` candidate matrices.
    """
    r = a.rank
    mults: set = set()
    witnesses = []
    searched = 0
    exhausted = True
    g = 0
    for m_piv, inv in matrix_candidates(r, bound):
        if searched >= budget:
            exhausted = False
            break
        searched += 1
        phi = _pivot_map_to_matrix(m_piv, a, b)
        if not maps_into(phi, a, b):
            continue
        for n in range(1, bound + 1):
            psi_piv = tuple(tuple(n * t for t in row) for row in inv)
            psi = _pivot_map_to_matrix(psi_piv, b, a)
            if maps_into(psi, b, a):
                if n not in mults:
                    mults.add(n)
                    witnesses.append({"n": n, "phi": phi, "psi": psi})
                    g = math.gcd(g, n)
                break
        if g == 1:
            break
    verdict = "yes" if g == 1 else "inconclusive"
    return NearIsoResult(mults, verdict, witnesses, searched, exhausted)
