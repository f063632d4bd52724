"""Exact rationals, primes, p-adic valuations and extended naturals.

Rationals are :class:`fractions.Fraction`, which already keeps values in
lowest terms with a positive denominator.  ``Rat`` is exported as an alias
so the rest of the package can name the concept.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Union

from .errors import ZeroInput

Rat = Fraction


class _Infinity:
    """The symbol ``inf`` of N u {inf}; compares above every integer."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())

    def __hash__(self):
        return hash("protori.INF")

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ValueError("inf - inf is undefined")
        return self

    def __neg__(self):
        raise ValueError("-inf is not an extended natural")


INF = _Infinity()

ExtNat = Union[int, _Infinity]


def is_inf(h) -> bool:
    return h is INF


def extnat_add(a: ExtNat, b: ExtNat) -> ExtNat:
    if a is INF or b is INF:
        return INF
    return a + b


def extnat_min(a: ExtNat, b: ExtNat) -> ExtNat:
    if a is INF:
        return b
    if b is INF:
        return a
    return min(a, b)


def extnat_max(a: ExtNat, b: ExtNat) -> ExtNat:
    if a is INF or b is INF:
        return INF
    return max(a, b)


def format_extnat(h: ExtNat) -> str:
    return "inf" if h is INF else str(h)


def parse_extnat(text: str) -> ExtNat:
    text = text.strip()
    if text == "inf":
        return INF
    value = int(text)
    if value < 0:
        raise ValueError(f"extended natural must be >= 0, got {value}")
    return value


def format_rat(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rat(text: str) -> Fraction:
    return Fraction(text.strip())


# --- primes -----------------------------------------------------------------

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    c = max(n + 1, 2)
    while not is_prime(c):
        c += 1
    return c


def primes() -> Iterator[int]:
    p = 2
    while True:
        yield p
        p = next_prime(p)


@lru_cache(maxsize=None)
def nth_prime(k: int) -> int:
    """k-th prime, 0-based (nth_prime(0) == 2)."""
    if k == 0:
        return 2
    return next_prime(nth_prime(k - 1))


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
        c += 1


def factor(n: int) -> dict[int, int]:
    """Prime factorization ``{p: e}`` of a positive integer; ``factor(1) == {}``."""
    if n < 1:
        raise ValueError(f"factor expects a positive integer, got {n}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n and f < 1_000_000:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
        else:
            d = _pollard_rho(m)
            stack.extend((d, m // d))
    return dict(sorted(out.items()))


def vp(q, p: int) -> int:
    """Exponent of the prime p in the nonzero rational q."""
    q = Fraction(q)
    if q == 0:
        raise ZeroInput("valuation of 0 is undefined")
    return _vp_int(q.numerator, p) - _vp_int(q.denominator, p)


def _vp_int(n: int, p: int) -> int:
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def vp_int(n: int, p: int) -> int:
    """Valuation of a nonzero integer."""
    if n == 0:
        raise ZeroInput("valuation of 0 is undefined")
    return _vp_int(n, p)


def prime_support(q) -> set[int]:
    """Primes dividing the numerator or denominator of q (empty for 0 and +-1)."""
    q = Fraction(q)
    out = set()
    if q.numerator:
        out.update(factor(abs(q.numerator)))
    out.update(factor(q.denominator))
    return out
