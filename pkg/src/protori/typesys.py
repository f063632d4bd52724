"""Height sequences, types, and rational groups <1/p^h_p>.

A height sequence is stored as a default value plus finitely many
exceptions, so only "eventually constant" sequences are representable.
That family is closed under pointwise min/max, which is all the type
lattice needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .arith import INF, ExtNat, extnat_max, extnat_min, factor, format_extnat, is_prime, vp


def _check_extnat(h):
    if h is INF:
        return h
    if isinstance(h, bool) or not isinstance(h, int) or h < 0:
        raise ValueError(f"height must be a natural number or INF, got {h!r}")
    return h


@dataclass(frozen=True)
class HeightSequence:
    """Map prime -> N u {inf}: ``default`` everywhere except ``exceptions``.

    Exceptions equal to the default are dropped on construction so that
    equality is structural.
    """

    default: ExtNat = 0
    exceptions: tuple = ()

    def __init__(self, default: ExtNat = 0, exceptions: Mapping[int, ExtNat] | Iterable = ()):
        default = _check_extnat(default)
        items = dict(exceptions.items() if isinstance(exceptions, Mapping) else exceptions)
        clean = []
        for p, h in sorted(items.items()):
            if not is_prime(p):
                raise ValueError(f"height sequence key {p} is not prime")
            h = _check_extnat(h)
            if h != default:
                clean.append((p, h))
        object.__setattr__(self, "default", default)
        object.__setattr__(self, "exceptions", tuple(clean))

    def __getitem__(self, p: int) -> ExtNat:
        return self.as_dict().get(p, self.default)

    def as_dict(self) -> dict:
        return dict(self.exceptions)

    @property
    def keys(self) -> tuple:
        return tuple(p for p, _ in self.exceptions)

    def __str__(self):
        return format_heights(self)


ZERO_HEIGHTS = HeightSequence(0)
Q_HEIGHTS = HeightSequence(INF)


@dataclass(frozen=True)
class TypeClass:
    """Canonical representative of a type.

    With a finite default, ``flips`` are the primes of height inf; with an
    infinite default, ``flips`` are the primes of finite height.
    """

    default: ExtNat = 0
    flips: frozenset = field(default_factory=frozenset)

    def __init__(self, default: ExtNat = 0, flips: Iterable[int] = ()):
        object.__setattr__(self, "default", _check_extnat(default))
        object.__setattr__(self, "flips", frozenset(flips))

    def representative(self) -> HeightSequence:
        if self.default is INF:
            return HeightSequence(INF, {p: 0 for p in self.flips})
        return HeightSequence(self.default, {p: INF for p in self.flips})

    def sort_key(self):
        d = (1, 0) if self.default is INF else (0, self.default)
        return (d, tuple(sorted(self.flips)))

    def __str__(self):
        flips = ",".join(str(p) for p in sorted(self.flips))
        return f"tp({format_extnat(self.default)};{{{flips}}})"


TP_Z = TypeClass(0)
TP_Q = TypeClass(INF)


def canonical_type(h: HeightSequence) -> TypeClass:
    if h.default is INF:
        return TypeClass(INF, (p for p, v in h.exceptions if v is not INF))
    return TypeClass(h.default, (p for p, v in h.exceptions if v is INF))


def inf_primes(t: TypeClass):
    """(cofinite, primes): the set of INF positions of any representative.

    ``cofinite`` False means the set is exactly ``primes``; True means it is
    the complement of ``primes``.
    """
    if t.default is INF:
        return True, t.flips
    return False, t.flips


def type_le(s: TypeClass, t: TypeClass) -> bool:
    if s.default is INF:
        # s is infinite almost everywhere: t must be too, and every INF of s
        # must be INF in t (finitely many finite values of t allowed only
        # where s is finite).
        return t.default is INF and t.flips <= s.flips
    if t.default is INF:
        # t's finite positions must avoid s's INF positions.
        return not (s.flips & t.flips)
    return s.default <= t.default and s.flips <= t.flips


def _pointwise(a: HeightSequence, b: HeightSequence, op) -> HeightSequence:
    da, db = a.as_dict(), b.as_dict()
    keys = set(da) | set(db)
    return HeightSequence(
        op(a.default, b.default), {p: op(da.get(p, a.default), db.get(p, b.default)) for p in keys}
    )


def heights_max(a: HeightSequence, b: HeightSequence) -> HeightSequence:
    return _pointwise(a, b, extnat_max)


def heights_min(a: HeightSequence, b: HeightSequence) -> HeightSequence:
    return _pointwise(a, b, extnat_min)


def heights_le(a: HeightSequence, b: HeightSequence) -> bool:
    """Pointwise a(p) <= b(p) at every prime."""
    if not a.default <= b.default:
        return False
    return all(a[p] <= b[p] for p in set(a.keys) | set(b.keys))


def type_join(s: TypeClass, t: TypeClass) -> TypeClass:
    return canonical_type(heights_max(s.representative(), t.representative()))


def type_meet(s: TypeClass, t: TypeClass) -> TypeClass:
    return canonical_type(heights_min(s.representative(), t.representative()))


def rg_contains(h: HeightSequence, q) -> bool:
    """Is q in the rational group <1/p^h_p : p prime>?"""
    q = Fraction(q)
    if q == 0:
        return True
    for p in factor(q.denominator):
        hp = h[p]
        if hp is not INF and vp(q, p) < -hp:
            return False
    return True


def format_heights(h: HeightSequence) -> str:
    body = ", ".join(f"{p}:{format_extnat(v)}" for p, v in h.exceptions)
    if h.default != 0:
        tail = f"| default {format_extnat(h.default)}"
        return "{" + (body + " " if body else "") + tail + "}"
    return "{" + body + "}"


def format_type(t: TypeClass) -> str:
    return format_heights(t.representative())
