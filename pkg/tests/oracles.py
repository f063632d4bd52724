"""Independent reference implementations used to cross-check the library.

None of these import the modules they check.  They are slow and only
valid on small inputs.
"""

from __future__ import annotations

import math
from fractions import Fraction

INF = float("inf")


# --- rational groups -----------------------------------------------------------


def trial_factor(n: int) -> dict:
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def valuation(q: Fraction, p: int) -> int:
    q = Fraction(q)
    v = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def truncated_denominator(height, primes, cap) -> int:
    """N with (1/N) Z = A(height) truncated to ``primes`` and exponent ``cap``.

    ``cap`` is one exponent for every prime or a dict prime -> exponent.
    """
    n = 1
    for p in primes:
        h = height(p)
        c = cap[p] if isinstance(cap, dict) else cap
        n *= p ** (c if h == INF else min(h, c))
    return n


# --- dense membership -----------------------------------------------------------


def _solve(cols, x):
    """Gaussian elimination over Q: (particular solution, kernel basis) or None."""
    m = len(cols)
    n = len(x)
    rows = [[Fraction(cols[j][i]) for j in range(m)] + [Fraction(x[i])] for i in range(n)]
    piv_cols = []
    r = 0
    for c in range(m):
        pr = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        lead = rows[r][c]
        rows[r] = [t / lead for t in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(rows[i][m] != 0 for i in range(r, n)):
        return None
    part = [Fraction(0)] * m
    for i, c in enumerate(piv_cols):
        part[c] = rows[i][m]
    kern = []
    for f in range(m):
        if f in piv_cols:
            continue
        k = [Fraction(0)] * m
        k[f] = Fraction(1)
        for i, c in enumerate(piv_cols):
            k[c] = -rows[i][f]
        kern.append(k)
    return part, kern


def lattice_member(gens, x) -> bool:
    """x in Z-span(gens) for at most one relation among the generators.

    Rational solutions of sum k_i g_i = x form k0 + s * kappa with kappa a
    primitive integer vector, so integrality leaves one class of s mod 1.
    """
    sol = _solve(gens, x)
    if sol is None:
        return False
    part, kern = sol
    if not kern:
        return all(t.denominator == 1 for t in part)
    if len(kern) > 1:
        raise ValueError("oracle supports at most one relation")
    (k,) = kern
    scale = math.lcm(*(t.denominator for t in k))
    k = [int(t * scale) for t in k]
    g = math.gcd(*k)
    k = [t // g for t in k]
    # part + s k is integral iff s k_j = -part_j mod 1 for all j; with
    # Bezout coefficients sum a_j k_j = 1 this pins s = -sum a_j part_j mod 1
    a = _bezout(k)
    s = -sum((aj * pj for aj, pj in zip(a, part)), Fraction(0))
    return all((pj + s * kj).denominator == 1 for pj, kj in zip(part, k))


def _bezout(k):
    """Integers a with sum a_j k_j = gcd(k) (= 1 for primitive k)."""
    a = [0] * len(k)
    g = 0
    for j, kj in enumerate(k):
        if kj == 0:
            continue
        if g == 0:
            g, a[j] = abs(kj), (1 if kj > 0 else -1)
            continue
        # extended Euclid on (g, kj)
        r0, r1, s0, s1, t0, t1 = g, kj, 1, 0, 0, 1
        while r1:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0 < 0:
            r0, s0, t0 = -r0, -s0, -t0
        a = [s0 * t for t in a]
        a[j] = t0
        g = r0
    return a


def brute_member(strands, x, primes, cap) -> bool:
    """x in sum_i A(h_i) w_i with each A(h_i) truncated to denominators over ``primes``.

    ``strands`` is a list of (height function p -> int or INF, vector).
    """
    gens = []
    for h, w in strands:
        n = truncated_denominator(h, primes, cap)
        gens.append([Fraction(t) / n for t in w])
    return lattice_member(gens, x)


def brute_height(strands, x, p, primes, cap, hmax: int):
    """Largest k <= hmax with x / p^k a member (hmax meaning 'at least hmax')."""
    k = 0
    while k < hmax and brute_member(strands, [Fraction(t) / p ** (k + 1) for t in x], primes, cap):
        k += 1
    return k


# --- integers modulo radix products -------------------------------------------------


def digits_of(z: int, radices) -> list:
    out = []
    for r in radices:
        out.append(z % r)
        z //= r
    return out


def value_of(digits, radices) -> int:
    v, place = 0, 1
    for d, r in zip(digits, radices):
        v += d * place
        place *= r
    return v


# --- types ------------------------------------------------------------------------


def heights_from_terms(terms_list):
    """p-heights of the rational group generated by 1/(a_0 ... a_k), from a long prefix."""
    acc = {}
    for a in terms_list:
        for p, e in trial_factor(a).items():
            acc[p] = acc.get(p, 0) + e
    return acc
