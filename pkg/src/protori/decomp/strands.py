"""Finite-rank torsion-free groups A = sum_i A(h_i) w_i inside Q^n.

Every question about A is answered prime by prime.  A subgroup of Q^n is
the intersection of its localizations A_(p) = A (x) Z_(p), and

    A_(p) = span_Q{w_i : h_i(p) = inf} + sum_{h_i(p) < inf} p^{-h_i(p)} Z_(p) w_i.

After projecting away the Q-span of the infinite strands, A_(p) is a free
Z_(p)-module with an echelon basis, so membership and p-heights reduce to
valuations of echelon coordinates.

Only finitely many primes need a local computation:

* membership of x: if x = sum c_i w_i over Q, every prime outside the
  exception keys of the strands and the denominators of c already sees x
  as a Z_(p)-combination;
* the p-height of x: outside the exception keys all strands take their
  default heights d_i, and the height equals the largest threshold t with x
  in span{w_i : d_i >= t} (modulo the infinite strands), except at primes
  where one of the lattices N_t = sum_{d_i >= t} Z w_i, or N_t' + Z x for the
  threshold t' just above, fails to be p-saturated.  Those primes divide a
  determinantal divisor, so the exceptional set is finite and computable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .. import _linalg as la
from ..arith import INF, factor, vp
from ..errors import DimensionMismatch, NotAMember, ZeroVector
from ..typesys import HeightSequence, TypeClass, canonical_type, format_heights


@dataclass(frozen=True)
class Strand:
    coeff: HeightSequence
    w: tuple

    def __init__(self, coeff: HeightSequence, w: Sequence):
        w = la.as_vec(w)
        if la.is_zero(w):
            raise ZeroVector("strand vector must be nonzero")
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "w", w)


@dataclass(frozen=True)
class LineHeights:
    """Heights of a nonzero vector, allowed to be negative at finitely many primes."""

    default: object
    exceptions: tuple

    def __getitem__(self, p):
        return dict(self.exceptions).get(p, self.default)

    @property
    def keys(self):
        return tuple(p for p, _ in self.exceptions)

    def as_heights(self) -> HeightSequence:
        return HeightSequence(self.default, dict(self.exceptions))

    def type(self) -> TypeClass:
        if self.default is INF:
            return TypeClass(INF, (p for p, v in self.exceptions if v is not INF))
        return TypeClass(self.default, (p for p, v in self.exceptions if v is INF))


class _Local:
    """A_(p) presented as (Q-span to project away, echelon Z_(p)-basis)."""

    __slots__ = ("p", "inf_basis", "inf_pivots", "rows", "pivots")

    def __init__(self, group: "StrandGroup", p: int):
        self.p = p
        inf_vecs = [s.w for s in group.strands if s.coeff[p] is INF]
        self.inf_basis, self.inf_pivots = la.rref(inf_vecs)
        gens = []
        for s in group.strands:
            h = s.coeff[p]
            if h is INF:
                continue
            y = la.reduce_mod(s.w, self.inf_basis, self.inf_pivots)
            if not la.is_zero(y):
                scale = Fraction(1, p**h)
                gens.append(tuple(scale * t for t in y))
        self.rows, self.pivots = la.local_echelon(gens, p)

    def height(self, x):
        """sup{k in Z : x / p^k in A_(p)} for x in span(A), x != 0."""
        y = la.reduce_mod(x, self.inf_basis, self.inf_pivots)
        if la.is_zero(y):
            return INF
        coeffs = la.echelon_coords(y, self.rows, self.pivots)
        if coeffs is None:
            raise NotAMember("vector is outside the rational span of the group")
        return min(vp(c, self.p) for c in coeffs if c != 0)


class StrandGroup:
    """A = sum_i A(coeff_i) * w_i as a subgroup of Q^ambient."""

    def __init__(self, strands: Sequence, ambient: int | None = None):
        strands = tuple(s if isinstance(s, Strand) else Strand(*s) for s in strands)
        if ambient is None:
            if not strands:
                raise DimensionMismatch("ambient dimension needed for an empty strand list")
            ambient = len(strands[0].w)
        for s in strands:
            if len(s.w) != ambient:
                raise DimensionMismatch(f"strand vector of length {len(s.w)} in ambient {ambient}")
        self.strands = strands
        self.ambient = ambient
        self._local_cache: dict = {}

    def __eq__(self, other):
        return (
            isinstance(other, StrandGroup)
            and self.ambient == other.ambient
            and self.strands == other.strands
        )

    def __hash__(self):
        return hash((self.ambient, self.strands))

    def __repr__(self):
        body = ", ".join(f"({format_heights(s.coeff)}, {list(map(str, s.w))})" for s in self.strands)
        return f"StrandGroup[{body}]"

    # --- structure ---------------------------------------------------------

    @cached_property
    def span(self):
        """RREF basis and pivot columns of the Q-span of the strand vectors."""
        return la.rref([s.w for s in self.strands])

    @property
    def rank(self) -> int:
        return len(self.span[0])

    @cached_property
    def exceptional_primes(self) -> tuple:
        ps = set()
        for s in self.strands:
            ps.update(s.coeff.keys)
        return tuple(sorted(ps))

    def local(self, p: int) -> _Local:
        loc = self._local_cache.get(p)
        if loc is None:
            loc = _Local(self, p)
            self._local_cache[p] = loc
        return loc

    @cached_property
    def _generic(self):
        inf_vecs = [s.w for s in self.strands if s.coeff.default is INF]
        basis, pivots = la.rref(inf_vecs)
        finite = []
        for s in self.strands:
            if s.coeff.default is INF:
                continue
            y = la.reduce_mod(s.w, basis, pivots)
            if not la.is_zero(y):
                finite.append((s.coeff.default, y))
        thresholds = sorted({0} | {d for d, _ in finite})
        spans = {t: la.rref([y for d, y in finite if d >= t]) for t in thresholds}
        return basis, pivots, finite, thresholds, spans

    def in_span(self, x) -> bool:
        basis, pivots = self.span
        return la.in_span(x, basis, pivots)

    def _check_dim(self, x):
        if len(x) != self.ambient:
            raise DimensionMismatch(f"vector of length {len(x)} in ambient {self.ambient}")

    # --- membership --------------------------------------------------------

    def relevant_primes(self, x) -> set | None:
        """Primes at which membership of x must be checked locally (None: x not in span)."""
        c = la.solve_combination(x, [s.w for s in self.strands])
        if c is None:
            return None
        ps = set(self.exceptional_primes)
        for ci in c:
            ps.update(factor(Fraction(ci).denominator))
        return ps

    def member(self, x) -> bool:
        x = la.as_vec(x)
        self._check_dim(x)
        if la.is_zero(x):
            return True
        ps = self.relevant_primes(x)
        if ps is None:
            return False
        return all(self.local(p).height(x) >= 0 for p in ps)

    # --- heights -----------------------------------------------------------

    def generic_height(self, x):
        """Height of x at every prime outside :meth:`height_primes`."""
        basis, pivots, finite, thresholds, spans = self._generic
        y = la.reduce_mod(x, basis, pivots)
        if la.is_zero(y):
            return INF
        best = None
        for t in thresholds:
            b, pv = spans[t]
            if la.in_span(y, b, pv):
                best = t
        if best is None:
            raise NotAMember("vector is outside the rational span of the group")
        return best

    def height_primes(self, x) -> set:
        """A finite set of primes outside which the p-height of x is generic."""
        basis, pivots, finite, thresholds, spans = self._generic
        y = la.reduce_mod(x, basis, pivots)
        ps = set(self.exceptional_primes)
        if la.is_zero(y):
            return ps
        denom = la.common_denominator([t for _, v in finite for t in v] + list(y))
        ps.update(factor(denom))
        scaled = [(d, [int(t * denom) for t in v]) for d, v in finite]
        ys = [int(t * denom) for t in y]
        for t in thresholds:
            ps.update(factor(la.determinantal_divisor([v for d, v in scaled if d >= t])))
        top = self.generic_height(x)
        above = [t for t in thresholds if t > top]
        nxt = [v for d, v in scaled if above and d >= above[0]]
        ps.update(factor(la.determinantal_divisor(nxt + [ys])))
        return ps

    def line_heights(self, x) -> LineHeights:
        """p-heights of a nonzero x in the Q-span of A (negative where x/1 is not in A_(p))."""
        x = la.as_vec(x)
        self._check_dim(x)
        if la.is_zero(x):
            raise ZeroVector("heights of the zero vector are all infinite")
        if not self.in_span(x):
            raise NotAMember("vector is outside the rational span of the group")
        gen = self.generic_height(x)
        exc = []
        for p in sorted(self.height_primes(x)):
            h = self.local(p).height(x)
            if h != gen:
                exc.append((p, h))
        return LineHeights(gen, tuple(exc))

    def element_heights(self, x) -> HeightSequence:
        lh = self.line_heights(x)
        if any(h is not INF and h < 0 for _, h in lh.exceptions):
            raise NotAMember("vector is not in the group")
        return lh.as_heights()

    def element_type(self, x) -> TypeClass:
        return canonical_type(self.element_heights(x))

    def element_height_at(self, x, p: int):
        """h_p(x) by direct local computation (oracle for :meth:`element_heights`)."""
        return self.local(p).height(la.as_vec(x))

    # --- derived groups ----------------------------------------------------

    def image(self, m) -> "StrandGroup":
        """M * A, dropping strands sent to zero."""
        out = []
        for s in self.strands:
            y = la.mat_vec(m, s.w)
            if not la.is_zero(y):
                out.append(Strand(s.coeff, y))
        return StrandGroup(out, ambient=len(m))

    def permuted(self, order) -> "StrandGroup":
        return StrandGroup([self.strands[i] for i in order], ambient=self.ambient)

    def pivot_coords(self, x) -> tuple:
        """Coordinates of x in span(A) w.r.t. the RREF basis."""
        basis, pivots = self.span
        c = la.span_coords(x, basis, pivots)
        if c is None:
            raise NotAMember("vector is outside the rational span of the group")
        return c

    def from_pivot_coords(self, c) -> tuple:
        basis, _ = self.span
        out = [Fraction(0)] * self.ambient
        for ck, row in zip(c, basis):
            if ck:
                for j, t in enumerate(row):
                    out[j] += ck * t
        return tuple(out)


def heights_dominate(lower: HeightSequence, upper: LineHeights) -> bool:
    """lower(p) <= upper(p) at every prime."""
    if not lower.default <= upper.default:
        return False
    for p in set(lower.keys) | set(upper.keys):
        if not lower[p] <= upper[p]:
            return False
    return True


def maps_into(m, a: StrandGroup, b: StrandGroup) -> bool:
    """Does the rational matrix m (b.ambient x a.ambient) send A into B?

    Per strand (h, w) of A: m*A(h)*w lies in B iff the heights of m*w in B
    dominate h at every prime (an infinite height of h asks for m*w in the
    span of B's infinite strands at that prime).
    """
    if len(m) != b.ambient or any(len(row) != a.ambient for row in m):
        raise DimensionMismatch("matrix shape does not match the ambients")
    for s in a.strands:
        y = la.mat_vec(m, s.w)
        if la.is_zero(y):
            continue
        if not b.in_span(y):
            return False
        if not heights_dominate(s.coeff, b.line_heights(y)):
            return False
    return True


def direct_sum(a: StrandGroup, b: StrandGroup) -> StrandGroup:
    """A + B in Q^(n_a + n_b), block diagonal."""
    za = (Fraction(0),) * b.ambient
    zb = (Fraction(0),) * a.ambient
    strands = [Strand(s.coeff, s.w + za) for s in a.strands]
    strands += [Strand(s.coeff, zb + s.w) for s in b.strands]
    return StrandGroup(strands, ambient=a.ambient + b.ambient)


def rank(a: StrandGroup) -> int:
    return a.rank


def member(a: StrandGroup, x) -> bool:
    return a.member(x)


def element_heights(a: StrandGroup, x) -> HeightSequence:
    return a.element_heights(x)


def scale_vec(c, v) -> tuple:
    return tuple(Fraction(c) * t for t in v)


def lcm_all(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v)
    return out
