"""Catalog groups and random instance generators shared by the tests."""

from __future__ import annotations

import random
from fractions import Fraction as F

from hypothesis import strategies as st

from protori.arith import INF
from protori.decomp.strands import Strand, StrandGroup, direct_sum
from protori.solenoid import ExplicitASeq
from protori.typesys import HeightSequence as H
from protori.typesys import canonical_type

SMALL_PRIMES = [2, 3, 5, 7, 11, 13]
PRIMES_97 = [p for p in range(2, 98) if all(p % q for q in range(2, p))]

Z = H(0)
Q = H(INF)
Z2 = H(0, {2: INF})
Z3 = H(0, {3: INF})


def clipped_block(q: int = 5, second=(1, 1)) -> StrandGroup:
    """Z[1/2] e1 + Z[1/3] e2 + Z (a e1 + b e2) / q."""
    a, b = second
    return StrandGroup([(Z2, [1, 0]), (Z3, [0, 1]), (Z, [F(a, q), F(b, q)])])


CATALOG = {5: clipped_block(5), 7: clipped_block(7), 11: clipped_block(11)}


def cd_group(heights) -> StrandGroup:
    n = len(heights)
    return StrandGroup(
        [Strand(h, [int(i == j) for j in range(n)]) for i, h in enumerate(heights)], ambient=n
    )


def random_heights(rng: random.Random, max_exc: int = 3, primes=SMALL_PRIMES, hmax: int = 4) -> H:
    default = rng.choice([0, 0, 1, INF])
    exc = {}
    for p in rng.sample(primes, rng.randint(0, max_exc)):
        exc[p] = INF if rng.random() < 0.35 else rng.randint(0, hmax)
    return H(default, exc)


def planted_instance(rng: random.Random):
    """(group, planted type multiset, planted remainder rank)."""
    r = rng.randint(0, 3)
    hs = [random_heights(rng) for _ in range(r)]
    block = CATALOG[rng.choice([5, 7, 11])]
    if r == 0:
        return block, [], 2
    cd = cd_group(hs)
    g = direct_sum(cd, block) if rng.random() < 0.5 else direct_sum(block, cd)
    return g, sorted((canonical_type(h) for h in hs), key=lambda t: t.sort_key()), 2


def random_aseq(rng: random.Random, lo: int = 2, hi: int = 12) -> ExplicitASeq:
    pre = [rng.randint(lo, hi) for _ in range(rng.randint(0, 3))]
    period = [rng.randint(lo, hi) for _ in range(rng.randint(1, 3))]
    return ExplicitASeq(pre, period)


# --- hypothesis strategies --------------------------------------------------------

extnats = st.one_of(st.integers(0, 6), st.just(INF))


@st.composite
def heightseqs(draw, primes=tuple(SMALL_PRIMES), defaults=(0, 1, INF)):
    default = draw(st.sampled_from(defaults))
    keys = draw(st.lists(st.sampled_from(primes), max_size=4, unique=True))
    return H(default, {p: draw(extnats) for p in keys})


small_rats = st.builds(F, st.integers(-12, 12), st.integers(1, 12))


@st.composite
def explicit_aseqs(draw, lo=2, hi=12):
    pre = draw(st.lists(st.integers(lo, hi), max_size=3))
    period = draw(st.lists(st.integers(lo, hi), min_size=1, max_size=3))
    return ExplicitASeq(pre, period)


# --- membership instances for the dense oracle ----------------------------------

_W_DENS = [1, 1, 1, 2, 3, 4, 5, 6, 10, 12, 25, 50, 100]
_X_DENS = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 15, 25]


def _oracle_height(h: H):
    return lambda p: float("inf") if h[p] is INF else int(h[p])


def membership_instance(rng: random.Random):
    """A strand group of rank <= 2 with at most one relation, plus its oracle description.

    Heights are exceptional only at 2, 3, 5 and default to 0 or 1, so every
    prime the oracle must see is visible in the data.
    """
    from oracles import trial_factor

    n = 2
    r = rng.randint(1, 2)
    nstrands = rng.randint(r, r + 1)
    while True:
        ws = []
        for _ in range(nstrands):
            if r == 1:
                base = [1, rng.randint(-2, 2)]
                c = F(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice(_W_DENS))
                ws.append([c * t for t in base])
            else:
                ws.append([F(rng.randint(-6, 6), rng.choice(_W_DENS)) for _ in range(n)])
        if all(any(t for t in w) for w in ws):
            rank_ok = (r == 1) or any(
                ws[i][0] * ws[j][1] != ws[i][1] * ws[j][0]
                for i in range(len(ws)) for j in range(i + 1, len(ws))
            )
            if rank_ok:
                break
    hs = []
    for _ in ws:
        exc = {}
        for p in rng.sample([2, 3, 5], rng.randint(0, 2)):
            exc[p] = rng.choice([0, 1, 2, INF, INF])
        hs.append(H(rng.choice([0, 0, 1]), exc))
    group = StrandGroup(list(zip(hs, ws)), ambient=n)
    primes = {2, 3, 5}
    minors = [ws[i][0] * ws[j][1] - ws[i][1] * ws[j][0]
              for i in range(len(ws)) for j in range(i + 1, len(ws))]
    for t in [t for w in ws for t in w] + minors:
        if t:
            primes |= set(trial_factor(abs(t.numerator))) | set(trial_factor(t.denominator))
    strands = [(_oracle_height(h), w) for h, w in zip(hs, ws)]
    return group, strands, sorted(primes)


def sample_vectors(rng: random.Random, group: StrandGroup, count: int):
    """Mostly near-members: integer-ish strand combinations, perturbed half the time."""
    out = []
    for _ in range(count):
        x = [F(0)] * group.ambient
        for s in group.strands:
            p = rng.choice([2, 3, 5])
            k = rng.randint(0, 2)
            c = F(rng.randint(-4, 4), p**k)
            x = [a + c * b for a, b in zip(x, s.w)]
        if rng.random() < 0.5:
            j = rng.randrange(group.ambient)
            x[j] += F(rng.randint(-3, 3), rng.choice(_X_DENS))
        out.append(x)
    return out


def oracle_primes(primes, x) -> list:
    """The instance primes together with every prime of x's entries."""
    from oracles import trial_factor

    out = set(primes)
    for t in x:
        out |= set(trial_factor(abs(t.numerator))) | set(trial_factor(t.denominator))
    return sorted(out)


def oracle_caps(strands, primes, x, extra: int = 0) -> dict:
    """Per-prime truncation exponents large enough to decide x (and x / p^extra)."""
    from oracles import valuation

    caps = {}
    ws = [w for _, w in strands]
    minors = [ws[i][0] * ws[j][1] - ws[i][1] * ws[j][0]
              for i in range(len(ws)) for j in range(i + 1, len(ws))]
    for p in primes:
        ex = max([0] + [-valuation(t, p) for t in x if t])
        ew = max([0] + [abs(valuation(t, p)) for w in ws for t in w if t])
        em = max([0] + [abs(valuation(m, p)) for m in minors if m])
        caps[p] = ex + 2 * ew + em + extra + 1
    return caps
