"""Sequences a = (a_0, a_1, ...) with a_i >= 2, their rational groups A_a,
and classification of the solenoids Sigma_a by type.

Two finite descriptions are supported: eventually periodic sequences
(``ExplicitASeq``) and the canonical sequence synthesized from a height
sequence (``CanonicalASeq``).  For the canonical sequence the primes of
finite positive height are taken in ascending order as p_1, p_2, ... and
the primes of infinite height as q_1, q_2, ...; then

    a_k = p_{k+1}^{h(p_{k+1})} * q_1 * ... * q_{k+1}

where a factor whose index runs past the end of a finite list is 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .arith import INF, factor, is_prime, next_prime, vp_int
from .errors import SemanticError
from .typesys import (
    TP_Z,
    HeightSequence,
    TypeClass,
    canonical_type,
    format_heights,
    rg_contains,
    type_le,
)


@dataclass(frozen=True)
class ExplicitASeq:
    pre: tuple
    period: tuple

    def __init__(self, pre=(), period=(2,)):
        pre, period = tuple(int(a) for a in pre), tuple(int(a) for a in period)
        if not period:
            raise SemanticError("period must be nonempty")
        for a in pre + period:
            if a < 2:
                raise SemanticError(f"sequence entry < 2: {a}")
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "period", period)

    def term(self, k: int) -> int:
        if k < len(self.pre):
            return self.pre[k]
        return self.period[(k - len(self.pre)) % len(self.period)]

    def __str__(self):
        pre = ",".join(map(str, self.pre))
        per = ",".join(map(str, self.period))
        return f"aseq(pre=[{pre}], period=[{per}])"


@dataclass(frozen=True)
class CanonicalASeq:
    heights: HeightSequence

    def __post_init__(self):
        if _is_torus_kind(self.heights):
            raise SemanticError("heights describe a group isomorphic to Z; use TORUS")

    def term(self, k: int) -> int:
        return _canonical_term(self.heights, k)

    def __str__(self):
        return f"aseq(canonical {format_heights(self.heights)})"


ASequence = Union[ExplicitASeq, CanonicalASeq]


class _TorusMarker:
    """Returned by :func:`canonical_aseq` when the group is isomorphic to Z."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "TORUS"

    def __reduce__(self):
        return (_TorusMarker, ())


TORUS = _TorusMarker()


def _is_torus_kind(h: HeightSequence) -> bool:
    # P_inf empty and P_n finite: the group is <1/p^h_p> with finitely many
    # finite h_p, i.e. isomorphic to Z.
    return h.default == 0 and all(v is not INF for _, v in h.exceptions)


def _finite_positive(h: HeightSequence, k: int):
    """k-th prime (0-based, ascending) with 1 <= h_p < inf, or None."""
    if h.default == 0 or h.default is INF:
        ps = [p for p, v in h.exceptions if v is not INF and v >= 1]
        return ps[k] if k < len(ps) else None
    skip = {p for p, v in h.exceptions if v == 0 or v is INF}
    return _nth_outside(skip, k)


def _infinite(h: HeightSequence, k: int):
    """k-th prime (0-based, ascending) with h_p = inf, or None."""
    if h.default is INF:
        skip = {p for p, v in h.exceptions}
        return _nth_outside(frozenset(skip), k)
    ps = [p for p, v in h.exceptions if v is INF]
    return ps[k] if k < len(ps) else None


@lru_cache(maxsize=4096)
def _nth_outside_cached(skip: frozenset, k: int) -> int:
    if k == 0:
        p = 2
    else:
        p = next_prime(_nth_outside_cached(skip, k - 1))
    while p in skip:
        p = next_prime(p)
    return p


def _nth_outside(skip, k: int) -> int:
    return _nth_outside_cached(frozenset(skip), k)


def _canonical_term(h: HeightSequence, k: int) -> int:
    a = 1
    p = _finite_positive(h, k)
    if p is not None:
        a *= p ** h[p]
    for j in range(k + 1):
        q = _infinite(h, j)
        if q is None:
            break
        a *= q
    return a


def a_term(a: ASequence, k: int) -> int:
    if k < 0:
        raise ValueError("index must be >= 0")
    return a.term(k)


def terms(a: ASequence, n: int) -> list[int]:
    return [a.term(k) for k in range(n)]


def canonical_aseq(h: HeightSequence):
    """The canonical sequence with A_a = <1/p^h_p>, or TORUS when that group is Z."""
    if _is_torus_kind(h):
        return TORUS
    return CanonicalASeq(h)


def _explicit_heights(a: ExplicitASeq) -> HeightSequence:
    pre = math.prod(a.pre)
    per = math.prod(a.period)
    out = {}
    for p, e in factor(pre).items():
        out[p] = e
    for p in factor(per):
        out[p] = INF
    return HeightSequence(0, out)


def _canonical_heights_from_terms(a: CanonicalASeq) -> HeightSequence:
    """Recover heights by factoring terms of the canonical sequence.

    The infinite-height primes accumulate (q_j divides every a_k with
    k >= j - 1) while a finite-height prime divides exactly one term, so a
    prime seen in two terms has height inf and a prime seen once has height
    v_p(a_k).  Terms are observed until every prime up to ``probe`` (the
    first prime past all exception keys) has had its chance to appear
    before the last observed term; ``probe`` then exhibits the default.
    """
    h = a.heights
    probe = next_prime(max(h.keys, default=2))
    finite_n, finite_inf = _finite_sets(h)
    if finite_n is not None and finite_inf is not None:
        last = max(len(finite_n), len(finite_inf)) + 1
    else:
        last = 0
        while not (_beyond(_finite_positive(h, last), probe) and _beyond(_infinite(h, last), probe)):
            last += 1
    seen: dict[int, list] = {}
    for k in range(last + 1):
        rest = a.term(k)
        for p in _candidate_primes(h, k):
            if rest % p == 0:
                e = vp_int(rest, p)
                rest //= p**e
                seen.setdefault(p, []).append(e)
        if rest != 1:
            raise ArithmeticError(f"unexpected prime factor in term {k}: {rest}")
    heights = {p: (INF if len(occ) > 1 else occ[0]) for p, occ in seen.items()}
    if finite_n is not None and finite_inf is not None:
        return HeightSequence(0, heights)
    window = list(_primes_upto(probe))
    return HeightSequence(heights.get(probe, 0), {p: heights.get(p, 0) for p in window})


def _beyond(p, bound) -> bool:
    return p is None or p > bound


def _finite_sets(h: HeightSequence):
    """(P_n, P_inf) as lists when both are finite, else the infinite one is None."""
    if h.default == 0:
        pn = [p for p, v in h.exceptions if v is not INF and v >= 1]
        pi = [p for p, v in h.exceptions if v is INF]
        return pn, pi
    if h.default is INF:
        return [p for p, v in h.exceptions if v >= 1], None
    return None, [p for p, v in h.exceptions if v is INF]


def _primes_upto(n: int):
    p = 2
    while p <= n:
        yield p
        p = next_prime(p)


def _candidate_primes(h: HeightSequence, k: int):
    """All primes that can divide the k-th canonical term."""
    out = set()
    p = _finite_positive(h, k)
    if p is not None:
        out.add(p)
    for j in range(k + 1):
        q = _infinite(h, j)
        if q is None:
            break
        out.add(q)
    return sorted(out)


def heights_of_aseq(a: ASequence) -> HeightSequence:
    """Heights of A_a: h_p = sum over k of v_p(a_k), in N u {inf}."""
    if isinstance(a, ExplicitASeq):
        return _explicit_heights(a)
    return _canonical_heights_from_terms(a)


def aseq_contains(a: ASequence, q) -> bool:
    return rg_contains(heights_of_aseq(a), Fraction(q))


def aseq_contains_by_prefix(a: ASequence, q, n_terms: int) -> bool:
    """Does the denominator of q divide a_0 * ... * a_k for some k < n_terms?"""
    q = Fraction(q)
    prod = 1
    for k in range(n_terms):
        prod *= a.term(k)
        if prod % q.denominator == 0:
            return True
    return False


@dataclass(frozen=True)
class SolenoidDesc:
    type: TypeClass
    torus: bool

    def __post_init__(self):
        if self.torus != (self.type == TP_Z):
            raise ValueError("torus flag must match type tp(Z)")


def solenoid_of(a) -> SolenoidDesc:
    if a is TORUS:
        return SolenoidDesc(TP_Z, True)
    t = canonical_type(heights_of_aseq(a))
    return SolenoidDesc(t, t == TP_Z)


def solenoid_iso(s1: SolenoidDesc, s2: SolenoidDesc) -> bool:
    return s1.type == s2.type


def solenoid_iso_by_homs(s1: SolenoidDesc, s2: SolenoidDesc) -> bool:
    """Isomorphism via nonzero homomorphisms in both directions."""
    return type_le(s1.type, s2.type) and type_le(s2.type, s1.type)


__all__ = [
    "ExplicitASeq",
    "CanonicalASeq",
    "ASequence",
    "TORUS",
    "a_term",
    "terms",
    "canonical_aseq",
    "heights_of_aseq",
    "aseq_contains",
    "aseq_contains_by_prefix",
    "SolenoidDesc",
    "solenoid_of",
    "solenoid_iso",
    "solenoid_iso_by_homs",
    "is_prime",
]
