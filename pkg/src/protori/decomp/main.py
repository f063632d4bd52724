"""The Main Decomposition A = (completely decomposable) + (clipped) and its invariants."""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .. import _linalg as la
from ..arith import INF, prime_support, vp
from ..errors import NotIdempotentOnA
from ..typesys import TP_Z, HeightSequence, TypeClass, canonical_type
from .search import Idempotent, find_rank1_idempotent, near_iso_search
from .strands import StrandGroup, direct_sum, maps_into

DEFAULT_BOUND = 6


def split(a: StrandGroup, e: Idempotent):
    """(type of e(A), (1 - e)(A)) for an idempotent e = v f preserving A.

    e(A) = (sum_i f(w_i) A(h_i)) v, a rank-1 group whose p-height relative
    to v is max_i (h_i(p) - v_p(f(w_i))) over strands with f(w_i) != 0.
    """
    fv = sum((x * y for x, y in zip(e.f, e.v)), Fraction(0))
    if fv != 1 or not maps_into(e.matrix, a, a):
        raise NotIdempotentOnA("e = v f must satisfy f.v = 1 and e(A) in A")
    summand = summand_heights(a, e)
    comp = a.image(e.complement_matrix())
    return canonical_type(summand), comp


def summand_heights(a: StrandGroup, e: Idempotent) -> HeightSequence:
    """Heights of e(A) measured against the generator v (clipped below at 0)."""
    vals = []
    for s in a.strands:
        c = sum((x * y for x, y in zip(e.f, s.w)), Fraction(0))
        if c != 0:
            vals.append((s.coeff, c))
    if not vals:
        raise NotIdempotentOnA("e kills every strand")
    primes = set()
    for h, c in vals:
        primes.update(h.keys)
        primes.update(prime_support(c))

    def at(p):
        best = None
        for h, c in vals:
            hp = h[p]
            cand = INF if hp is INF else hp - vp(c, p)
            best = cand if best is None or cand > best else best
        return best

    default = max((h.default for h, _ in vals), key=lambda t: (t is INF, 0 if t is INF else t))
    exc = {}
    for p in primes:
        hp = at(p)
        exc[p] = hp if hp is INF else max(hp, 0)
    return HeightSequence(default, exc)


@dataclass
class Decomposition:
    torus_types: list
    remainder: StrandGroup
    complete: bool
    bound_used: int
    idempotents: list = field(default_factory=list)

    @property
    def certified(self) -> bool:
        """True when the remainder has rank 0, i.e. A is completely decomposable."""
        return self.remainder.rank == 0

    def type_multiset(self) -> Counter:
        return Counter(self.torus_types)


def main_decompose(a: StrandGroup, bound: int = DEFAULT_BOUND, coord_order=None) -> Decomposition:
    """Split off rank-1 summands until none is found at ``bound`` or the rank is 0."""
    types = []
    steps = []
    cur = a
    while cur.rank > 0:
        order = _restrict_order(coord_order, cur.rank)
        e = find_rank1_idempotent(cur, bound, order)
        if e is None:
            break
        t, cur = split(cur, e)
        types.append(t)
        steps.append(e)
    types.sort(key=TypeClass.sort_key)
    return Decomposition(types, cur, True, bound, steps)


def _restrict_order(order, r):
    if order is None:
        return None
    return tuple(i for i in order if i < r)


# --- Hom(A, Z) and the divisible part -------------------------------------------


def hom_to_z_witness(a: StrandGroup):
    """A nonzero functional f with f(A) in Z, or None when Hom(A, Z) = 0.

    f(A(h) w) lies in Z only if f(w) = 0 or A(h) is cyclic, i.e. h is
    finite with finitely many nonzero values.  Strands of any other type
    force f(w) = 0; on the rest, f(w)/N must be an integer where
    A(h) = (1/N) Z, which scaling always achieves.  So Hom(A, Z) != 0 iff the
    forced strands do not span span(A).
    """
    forced = [s.w for s in a.strands if canonical_type(s.coeff) != TP_Z]
    basis_f, _ = la.rref(forced)
    if len(basis_f) == a.rank:
        return None
    # A functional vanishing on span(forced) but not on span(A).
    ann = _annihilator(basis_f, a.ambient) if basis_f else la.identity(a.ambient)
    f = next(
        fn for fn in ann if any(sum(x * y for x, y in zip(fn, s.w)) != 0 for s in a.strands)
    )
    scale = 1
    for s in a.strands:
        val = sum((x * y for x, y in zip(f, s.w)), Fraction(0))
        if val == 0:
            continue
        n = math.prod(p**h for p, h in s.coeff.exceptions)
        scale = math.lcm(scale, (val / n).denominator)
    return tuple(scale * x for x in f)


def _annihilator(rows, n):
    """Basis of {f in Q^n : f . r = 0 for all rows r}."""
    # f . r = 0 for each r  <=>  f in nullspace of the matrix with rows r;
    # columns of that system are the coordinate vectors.
    cols = [tuple(r[j] for r in rows) for j in range(n)]
    return la.nullspace_cols(cols, len(rows))


def is_torus_free(a: StrandGroup) -> bool:
    """Hom(A, Z) = 0, i.e. the dual protorus has no torus factor."""
    return hom_to_z_witness(a) is None


def divisible_part(a: StrandGroup):
    """RREF basis of d(A), the intersection over all primes of the infinite-strand spans."""
    basis, pivots = a.span
    profiles = [a._generic[:2]]
    for p in a.exceptional_primes:
        loc = a.local(p)
        profiles.append((loc.inf_basis, loc.inf_pivots))
    for b, _ in profiles:
        basis, pivots = la.intersect_spans(basis, b, a.ambient)
        if not basis:
            break
    return basis, pivots


def has_Q_summand(a: StrandGroup) -> bool:
    return bool(divisible_part(a)[0])


# --- isomorphism tests ----------------------------------------------------------


def cd_iso(types_a, types_b) -> bool:
    """Completely decomposable groups are isomorphic iff their type multisets agree."""
    return Counter(types_a) == Counter(types_b)


@dataclass
class NearIso:
    multipliers: set
    verdict: str
    witnesses: list
    searched: int
    exhausted: bool
    reason: str


def near_iso(a: StrandGroup, b: StrandGroup, bound: int = DEFAULT_BOUND, budget: int = 2000) -> NearIso:
    if a.rank != b.rank:
        return NearIso(set(), "no", [], 0, True, "rank mismatch")
    if a.rank == 0:
        return NearIso({1}, "yes", [], 0, True, "both trivial")
    res = near_iso_search(a, b, bound, budget)
    if res.verdict == "yes":
        return NearIso(res.multipliers, "yes", res.witnesses, res.searched, res.exhausted,
                       "multipliers with gcd 1")
    # Complete obstruction for completely decomposable inputs: compare types.
    da, db = main_decompose(a, bound), main_decompose(b, bound)
    if da.certified and db.certified:
        same = cd_iso(da.torus_types, db.torus_types)
        return NearIso(res.multipliers, "yes" if same else "no", res.witnesses, res.searched,
                       res.exhausted, "completely decomposable type multisets "
                       + ("agree" if same else "differ"))
    return NearIso(res.multipliers, "inconclusive", res.witnesses, res.searched, res.exhausted,
                   "no gcd-1 multiplier set within the bound")


# --- protori ---------------------------------------------------------------------


@dataclass(frozen=True)
class ProtorusDesc:
    """A finite-dimensional protorus, given by its discrete dual."""

    dual: StrandGroup


def protorus_dim(p: ProtorusDesc) -> int:
    return p.dual.rank


def product(p: ProtorusDesc, q: ProtorusDesc) -> ProtorusDesc:
    """G x H, whose dual is the direct sum of the duals."""
    return ProtorusDesc(direct_sum(p.dual, q.dual))


def solenoid_label(t: TypeClass) -> str:
    return "T" if t == TP_Z else f"Sigma[{t}]"


@dataclass
class ProtorusDecomposition:
    torus_part: list
    clipped_part: ProtorusDesc
    report: dict


def decompose_protorus(p: ProtorusDesc, bound: int = DEFAULT_BOUND) -> ProtorusDecomposition:
    d = main_decompose(p.dual, bound)
    rem = d.remainder
    report = {
        "bound_used": bound,
        "complete": d.complete,
        "certified": d.certified,
        "max_torus_rank": sum(1 for t in d.torus_types if t == TP_Z),
        "factors": [solenoid_label(t) for t in d.torus_types],
        "clipped_torus_free": is_torus_free(rem),
        "clipped_no_Q_quotient": not has_Q_summand(rem),
        "dimension": p.dual.rank,
        "clipped_dimension": rem.rank,
    }
    return ProtorusDecomposition(d.torus_types, ProtorusDesc(rem), report)


def uniqueness_check(a: StrandGroup, trials: int = 3, bound: int = DEFAULT_BOUND, seed: int = 0,
                     budget: int = 2000) -> dict:
    """Decompose under permuted strand and coordinate orders and compare the results."""
    if trials < 2:
        raise ValueError("uniqueness check needs at least two trials")
    runs = []
    for t in range(trials):
        rng = random.Random(seed * 1000003 + t)
        strand_order = list(range(len(a.strands)))
        coord_order = list(range(a.rank))
        if t:
            rng.shuffle(strand_order)
            rng.shuffle(coord_order)
        d = main_decompose(a.permuted(strand_order), bound, coord_order)
        runs.append({"strand_order": strand_order, "coord_order": coord_order, "decomposition": d})
    base = runs[0]["decomposition"]
    types_equal = all(cd_iso(base.torus_types, r["decomposition"].torus_types) for r in runs)
    pairs = []
    for i in range(len(runs)):
        for j in range(i + 1, len(runs)):
            res = near_iso(runs[i]["decomposition"].remainder, runs[j]["decomposition"].remainder,
                           bound, budget)
            pairs.append({"runs": (i, j), "verdict": res.verdict,
                          "multipliers": sorted(res.multipliers)})
    ok = types_equal and all(p["verdict"] in ("yes", "inconclusive") for p in pairs)
    return {"ok": ok, "types_equal": types_equal, "runs": runs, "pairs": pairs}
