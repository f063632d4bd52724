"""Truncated a-adic integers, points of the solenoid, and the character pairing.

An :class:`AdicInt` keeps the first N mixed-radix digits of an element of
Delta_a.  Addition carries upward, so the first N digits of a sum depend only
on the first N digits of the summands.  A :class:`SolenoidPoint` is a pair
(x, r) with rational r in [0, 1), the canonical representative of its coset
modulo the subgroup generated by (1_a, 1).

The pairing of q = m / (a_0 ... a_k) in A_a with a point (x, r) is

    <q, (x, r)> = m * (x_(k) - r) / (a_0 ... a_k)   mod 1,

where x_(k) is the integer value of digits 0..k.  It does not depend on k,
is additive in both arguments, and kills (1_a, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import InsufficientPrecision, MixedRadixMismatch, NotInDual
from .solenoid import ASequence, aseq_contains


def radices(a: ASequence, n: int) -> tuple:
    return tuple(a.term(k) for k in range(n))


@dataclass(frozen=True)
class AngleQ:
    """A rational point of T = R/Z, always reduced into [0, 1)."""

    value: Fraction

    def __init__(self, value):
        value = Fraction(value)
        object.__setattr__(self, "value", value - math.floor(value))

    def __add__(self, other):
        other = other if isinstance(other, AngleQ) else AngleQ(other)
        return AngleQ(self.value + other.value)

    def __neg__(self):
        return AngleQ(-self.value)

    def __sub__(self, other):
        return self + (-other)


@dataclass(frozen=True)
class AdicInt:
    aseq: ASequence
    digits: tuple

    def __post_init__(self):
        digits = tuple(int(d) for d in self.digits)
        if not digits:
            raise InsufficientPrecision("precision must be >= 1")
        for k, d in enumerate(digits):
            if not 0 <= d < self.aseq.term(k):
                raise ValueError(f"digit {d} at position {k} outside [0, {self.aseq.term(k)})")
        object.__setattr__(self, "digits", digits)

    @property
    def precision(self) -> int:
        return len(self.digits)

    def __add__(self, other):
        return adic_add(self, other)

    def __neg__(self):
        return adic_neg(self)

    def __sub__(self, other):
        return adic_add(self, adic_neg(other))


def adic_zero(a: ASequence, n: int) -> AdicInt:
    return AdicInt(a, (0,) * n)


def adic_one(a: ASequence, n: int) -> AdicInt:
    """1_a = (1, 0, 0, ...)."""
    return AdicInt(a, (1,) + (0,) * (n - 1))


def adic_from_int(a: ASequence, z: int, n: int) -> AdicInt:
    if n < 1:
        raise InsufficientPrecision("precision must be >= 1")
    digits = []
    for r in radices(a, n):
        d = z % r
        digits.append(d)
        z = (z - d) // r
    return AdicInt(a, tuple(digits))


def _check_peer(x: AdicInt, y: AdicInt):
    if x.aseq != y.aseq or x.precision != y.precision:
        raise MixedRadixMismatch("operands differ in sequence or precision")


def adic_add(x: AdicInt, y: AdicInt) -> AdicInt:
    _check_peer(x, y)
    out = []
    carry = 0
    for k, (dx, dy) in enumerate(zip(x.digits, y.digits)):
        r = x.aseq.term(k)
        s = dx + dy + carry
        carry = 1 if s >= r else 0
        out.append(s - carry * r)
    return AdicInt(x.aseq, tuple(out))


def adic_neg(x: AdicInt) -> AdicInt:
    out = []
    borrow = 0
    for k, d in enumerate(x.digits):
        r = x.aseq.term(k)
        s = -d - borrow
        borrow = 1 if s < 0 else 0
        out.append(s + borrow * r)
    return AdicInt(x.aseq, tuple(out))


def adic_scale(x: AdicInt, n: int) -> AdicInt:
    """n * x for an integer n, by double-and-add."""
    acc = adic_zero(x.aseq, x.precision)
    base = x if n >= 0 else adic_neg(x)
    n = abs(n)
    while n:
        if n & 1:
            acc = adic_add(acc, base)
        base = adic_add(base, base)
        n >>= 1
    return acc


def window(x: AdicInt, k: int) -> int:
    """Integer value of digits 0..k, in [0, a_0 ... a_k)."""
    if not 0 <= k < x.precision:
        raise InsufficientPrecision(f"window {k} needs precision >= {k + 1}, have {x.precision}")
    acc = 0
    place = 1
    for j in range(k + 1):
        acc += x.digits[j] * place
        place *= x.aseq.term(j)
    return acc


@dataclass(frozen=True)
class SolenoidPoint:
    x: AdicInt
    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))

    @property
    def is_canonical(self) -> bool:
        return 0 <= self.r < 1

    def __add__(self, other):
        return point_add(self, other)


def point_canonicalize(x: AdicInt, r) -> SolenoidPoint:
    r = Fraction(r)
    n = math.floor(r)
    if n:
        # (x, r) ~ (x - n 1, r - n) modulo the diagonal generator (1, 1)
        x = adic_add(x, adic_scale(adic_one(x.aseq, x.precision), -n))
    return SolenoidPoint(x, r - n)


def point_add(p: SolenoidPoint, q: SolenoidPoint) -> SolenoidPoint:
    return point_canonicalize(adic_add(p.x, q.x), p.r + q.r)


def point_neg(p: SolenoidPoint) -> SolenoidPoint:
    return point_canonicalize(adic_neg(p.x), -p.r)


def dual_level(a: ASequence, q, n: int):
    """(m, k) with q = m / (a_0 ... a_k), k minimal and below the precision n."""
    q = Fraction(q)
    prod = 1
    for k in range(n):
        prod *= a.term(k)
        if prod % q.denominator == 0:
            return q.numerator * (prod // q.denominator), k
    if not aseq_contains(a, q):
        raise NotInDual(f"{q} is not in the rational group of the sequence")
    raise InsufficientPrecision(f"{q} needs more than {n} digits of precision")


def pair(q, p: SolenoidPoint, k: int | None = None) -> AngleQ:
    """Character value of q in A_a at the point p.

    ``k`` forces a particular (non-minimal) representation level; the
    result is the same for every admissible k.
    """
    a = p.x.aseq
    _, kmin = dual_level(a, q, p.x.precision)
    if k is None:
        k = kmin
    elif k < kmin:
        raise ValueError(f"level {k} is below the minimal level {kmin}")
    prod = math.prod(a.term(j) for j in range(k + 1))
    m = Fraction(q) * prod
    assert m.denominator == 1
    return AngleQ(m.numerator * (window(p.x, k) - p.r) / prod)


# --- batch paths through the compiled kernels ---------------------------------

_INT64_SAFE = 1 << 62


def _radix_array(a: ASequence, n: int) -> np.ndarray:
    rs = radices(a, n)
    if math.prod(rs) >= _INT64_SAFE:
        raise OverflowError("radix product exceeds the int64 batch range")
    return np.asarray(rs, dtype=np.int64)


def batch_from_ints(a: ASequence, zs, n: int) -> np.ndarray:
    return kernels.from_ints(np.asarray(zs, dtype=np.int64), _radix_array(a, n))


def batch_add(a: ASequence, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    return kernels.carry_add(xs, ys, _radix_array(a, xs.shape[1]))


def batch_neg(a: ASequence, xs: np.ndarray) -> np.ndarray:
    return kernels.negate(xs, _radix_array(a, xs.shape[1]))


def batch_window(a: ASequence, xs: np.ndarray, k: int) -> np.ndarray:
    return kernels.window(xs, _radix_array(a, xs.shape[1]), k)
