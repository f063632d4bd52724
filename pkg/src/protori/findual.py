"""Pontryagin duality for finite abelian groups, executed by enumeration.

Groups are invariant-factor chains Z/d_1 + ... + Z/d_t with d_1 | d_2 | ...,
homomorphisms are integer matrices (target rows x source columns).  The
dual of Z/d is Z/d again via <x, chi> = x chi / d, so dual_group returns the
same chain and dual_hom is the transpose rescaled by d_i / e_j.

Exactness is decided by listing every element (orders up to 2^16), which
keeps this module a trustworthy oracle for the arrow-reversal checks.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _linalg as la
from . import kernels
from .adic import AngleQ
from .errors import CompositionMismatch, IllFormedHom, ParseError

MAX_ORDER = 1 << 16


@dataclass(frozen=True)
class FinAb:
    invariant_factors: tuple = ()

    def __post_init__(self):
        ds = tuple(int(d) for d in self.invariant_factors)
        for d in ds:
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
        for a, b in zip(ds, ds[1:]):
            if b % a:
                raise ValueError(f"invariant factors {ds} do not form a divisibility chain")
        object.__setattr__(self, "invariant_factors", ds)

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def ngens(self) -> int:
        return len(self.invariant_factors)

    def elements(self):
        """All elements as coordinate tuples, in mixed-radix index order."""
        ds = self.invariant_factors
        for i in range(self.order):
            out = []
            for d in ds:
                out.append(i % d)
                i //= d
            yield tuple(out)

    def index(self, x) -> int:
        i, place = 0, 1
        for c, d in zip(x, self.invariant_factors):
            i += (c % d) * place
            place *= d
        return i

    def __str__(self):
        if not self.invariant_factors:
            return "0"
        return " + ".join(f"Z/{d}" for d in self.invariant_factors)


TRIVIAL = FinAb(())


def cyclic(n: int) -> FinAb:
    return TRIVIAL if n == 1 else FinAb((n,))


def pairing(g: FinAb, x, chi) -> AngleQ:
    """Canonical pairing G x G^ -> T, <x, chi> = sum x_i chi_i / d_i."""
    return AngleQ(sum((Fraction(a * b, d) for a, b, d in zip(x, chi, g.invariant_factors)), Fraction(0)))


def dual_group(g: FinAb) -> FinAb:
    return FinAb(g.invariant_factors)


@dataclass(frozen=True)
class FinHom:
    source: FinAb
    target: FinAb
    matrix: tuple

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        if len(m) != self.target.ngens or any(len(row) != self.source.ngens for row in m):
            raise IllFormedHom(
                f"matrix shape does not match {self.target.ngens} x {self.source.ngens}"
            )
        for j, e in enumerate(self.target.invariant_factors):
            for i, d in enumerate(self.source.invariant_factors):
                if (m[j][i] * d) % e:
                    raise IllFormedHom(
                        f"entry {m[j][i]} sends a generator of order {d} to an element of Z/{e} "
                        f"whose order does not divide {d}"
                    )
        # normalize each row modulo its target order
        m = tuple(
            tuple(x % e for x in row) for row, e in zip(m, self.target.invariant_factors)
        )
        object.__setattr__(self, "matrix", m)

    def __call__(self, x):
        return tuple(
            sum(a * b for a, b in zip(row, x)) % e
            for row, e in zip(self.matrix, self.target.invariant_factors)
        )

    def __add__(self, other):
        if self.source != other.source or self.target != other.target:
            raise CompositionMismatch("sum of homs with different source or target")
        return FinHom(self.source, self.target, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.matrix, other.matrix)
        ))

    def images(self) -> np.ndarray:
        """Index of f(x) for every source element x (compiled kernel)."""
        _check_size(self.source)
        _check_size(self.target)
        m = np.asarray(self.matrix, dtype=np.int64).reshape(self.target.ngens, self.source.ngens)
        return kernels.hom_images(
            m,
            np.asarray(self.source.invariant_factors, dtype=np.int64),
            np.asarray(self.target.invariant_factors, dtype=np.int64),
        )


def _check_size(g: FinAb):
    if g.order > MAX_ORDER:
        raise ValueError(f"group of order {g.order} exceeds the enumeration cap {MAX_ORDER}")


def identity_hom(g: FinAb) -> FinHom:
    return FinHom(g, g, tuple(tuple(int(i == j) for j in range(g.ngens)) for i in range(g.ngens)))


def zero_hom(src: FinAb, tgt: FinAb) -> FinHom:
    return FinHom(src, tgt, tuple((0,) * src.ngens for _ in range(tgt.ngens)))


def dual_hom(f: FinHom) -> FinHom:
    """f^: T^ -> S^ with <f(x), chi> = <x, f^(chi)>."""
    ds = f.source.invariant_factors
    es = f.target.invariant_factors
    n = tuple(
        tuple((f.matrix[j][i] * d // e) % d for j, e in enumerate(es))
        for i, d in enumerate(ds)
    )
    return FinHom(dual_group(f.target), dual_group(f.source), n)


def compose(g: FinHom, f: FinHom) -> FinHom:
    """g o f."""
    if f.target != g.source:
        raise CompositionMismatch(f"cannot compose: {f.target} != {g.source}")
    m = [[sum(g.matrix[k][j] * f.matrix[j][i] for j in range(f.target.ngens))
          for i in range(f.source.ngens)] for k in range(g.target.ngens)]
    return FinHom(f.source, g.target, m)


def kernel_indices(f: FinHom) -> set:
    img = f.images()
    return set(np.nonzero(img == 0)[0].tolist())


def image_indices(f: FinHom) -> set:
    return set(np.unique(f.images()).tolist())


def is_injective(f: FinHom) -> bool:
    return len(image_indices(f)) == f.source.order


def is_surjective(f: FinHom) -> bool:
    return len(image_indices(f)) == f.target.order


def is_exact(f: FinHom, g: FinHom) -> bool:
    """Im(f) = Ker(g)."""
    if f.target != g.source:
        raise CompositionMismatch(f"f lands in {f.target} but g starts at {g.source}")
    return image_indices(f) == kernel_indices(g)


def is_short_exact(f: FinHom, g: FinHom) -> bool:
    return is_injective(f) and is_exact(f, g) and is_surjective(g)


def dual_sequence(f: FinHom, g: FinHom):
    """(g^, f^): the dual sequence C^ -> B^ -> A^."""
    return dual_hom(g), dual_hom(f)


# --- direct sums ------------------------------------------------------------


def _chain_of(orders):
    """SNF data turning Z/o_1 + ... + Z/o_n into an invariant-factor chain."""
    n = len(orders)
    s, u, _ = la.smith_normal_form([[orders[i] if i == j else 0 for j in range(n)] for i in range(n)])
    diag = [s[i][i] for i in range(n)]
    uinv = la.mat_inverse(u)
    uinv = [[int(x) for x in row] for row in uinv]
    keep = [k for k in range(n) if diag[k] > 1]
    return diag, u, uinv, keep


@dataclass(frozen=True)
class DirectSum:
    group: FinAb
    inclusions: tuple
    projections: tuple


def direct_sum(*groups: FinAb) -> DirectSum:
    """G_1 + ... + G_m as an invariant-factor chain, with inclusions and projections."""
    orders = [d for g in groups for d in g.invariant_factors]
    if not orders:
        s = TRIVIAL
        return DirectSum(s, tuple(zero_hom(g, s) for g in groups), tuple(zero_hom(s, g) for g in groups))
    diag, u, uinv, keep = _chain_of(orders)
    s = FinAb(tuple(diag[k] for k in keep))
    incs, projs = [], []
    off = 0
    for g in groups:
        cols = range(off, off + g.ngens)
        incs.append(FinHom(g, s, tuple(tuple(u[k][c] for c in cols) for k in keep)))
        projs.append(FinHom(s, g, tuple(tuple(uinv[c][k] for k in keep) for c in cols)))
        off += g.ngens
    return DirectSum(s, tuple(incs), tuple(projs))


def hom_sum(f: FinHom, h: FinHom):
    """f + h : S + H -> S' + H' on the chain forms of both sums."""
    src = direct_sum(f.source, h.source)
    tgt = direct_sum(f.target, h.target)
    a = compose(tgt.inclusions[0], compose(f, src.projections[0]))
    b = compose(tgt.inclusions[1], compose(h, src.projections[1]))
    return src, tgt, a + b


# --- generated short exact sequences -----------------------------------------


def random_chain(rng: random.Random, max_order: int = 256) -> FinAb:
    """A random invariant-factor chain of order at most max_order (possibly trivial)."""
    ds = []
    total = 1
    while rng.random() < 0.8:
        base = ds[-1] if ds else 2
        opts = [base * k for k in range(1, max_order // (total * base) + 1)]
        if not opts:
            break
        d = rng.choice(opts)
        ds.append(d)
        total *= d
    return FinAb(tuple(ds))


def ses_from_sublattice(b: FinAb, extra):
    """0 -> A -> B -> C -> 0 with A = L'/L_B and C = Z^t/L'.

    L_B = diag(d) Z^t and L' is spanned by L_B and the integer vectors
    ``extra``.
    """
    t = b.ngens
    ds = b.invariant_factors
    rows = [[ds[i] if i == j else 0 for j in range(t)] for i in range(t)]
    rows += [[int(x) for x in v] for v in extra]
    basis = la.integer_row_basis(rows)  # rows span L'
    lp = [[basis[k][i] for k in range(t)] for i in range(t)]  # columns are the basis
    # C = Z^t / L'
    s, u, _ = la.smith_normal_form(lp)
    keep_c = [k for k in range(t) if s[k][k] > 1]
    c = FinAb(tuple(s[k][k] for k in keep_c))
    g = FinHom(b, c, tuple(tuple(u[k][i] for i in range(t)) for k in keep_c))
    # A = L' / L_B, L_B = L' X
    lp_inv = la.mat_inverse(lp)
    x = la.mat_mul(lp_inv, [[Fraction(ds[i] if i == j else 0) for j in range(t)] for i in range(t)])
    x = [[int(v) for v in row] for row in x]
    s2, u2, _ = la.smith_normal_form(x)
    keep_a = [k for k in range(t) if s2[k][k] > 1]
    a = FinAb(tuple(s2[k][k] for k in keep_a))
    u2inv = [[int(v) for v in row] for row in la.mat_inverse(u2)]
    gens = []
    for k in keep_a:
        coords = [u2inv[i][k] for i in range(t)]
        gens.append([sum(lp[r][i] * coords[i] for i in range(t)) for r in range(t)])
    f = FinHom(a, b, tuple(tuple(gens[k][r] for k in range(len(keep_a))) for r in range(t)))
    return f, g


def random_ses(rng: random.Random, max_order: int = 256):
    b = random_chain(rng, max_order)
    t = b.ngens
    extra = [[rng.randrange(d) for d in b.invariant_factors] for _ in range(rng.randint(0, 2))]
    return ses_from_sublattice(b, extra) if t else (zero_hom(TRIVIAL, TRIVIAL), zero_hom(TRIVIAL, TRIVIAL))


# --- text format for sequence files --------------------------------------------


def parse_sequences(text: str):
    """Read ``seq <name>`` blocks of ``key: value`` lines.

    Keys ``A``, ``B``, ``C`` give invariant factors (space or comma
    separated, ``0`` for the trivial group); ``f`` and ``g`` give matrices
    as bracketed integer rows, e.g. ``[[2]]``.  ``#`` starts a comment.
    """
    import json

    blocks = []
    cur = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("seq"):
            name = line[3:].strip() or f"seq{len(blocks) + 1}"
            cur = {"name": name, "line": lineno}
            blocks.append(cur)
            continue
        if cur is None or ":" not in line:
            raise ParseError("expected 'seq <name>' or 'key: value'", lineno, 1)
        key, val = (s.strip() for s in line.split(":", 1))
        if key in ("A", "B", "C"):
            parts = [p for p in val.replace(",", " ").split() if p]
            try:
                ds = tuple(int(p) for p in parts if p != "0")
            except ValueError:
                raise ParseError(f"bad invariant factors {val!r}", lineno, raw.index(val) + 1)
            cur[key] = ds
        elif key in ("f", "g"):
            try:
                cur[key] = json.loads(val)
            except ValueError:
                raise ParseError(f"bad matrix {val!r}", lineno, raw.index(val) + 1)
        else:
            raise ParseError(f"unknown key {key!r}", lineno, 1)
    for b in blocks:
        missing = [k for k in "ABCfg" if k not in b]
        if missing:
            raise ParseError(f"sequence {b['name']} lacks {', '.join(missing)}", b["line"], 1)
    return blocks


def check_sequence(block) -> dict:
    """Exactness report for one parsed block, for the sequence and its dual."""
    a, b, c = (FinAb(block[k]) for k in "ABC")
    f = FinHom(a, b, block["f"])
    g = FinHom(b, c, block["g"])
    gd, fd = dual_sequence(f, g)
    report = {
        "name": block["name"],
        "f_injective": is_injective(f),
        "exact_at_B": is_exact(f, g),
        "g_surjective": is_surjective(g),
        "dual_injective": is_injective(gd),
        "dual_exact": is_exact(gd, fd),
        "dual_surjective": is_surjective(fd),
        "double_dual_recovers": dual_hom(fd) == f and dual_hom(gd) == g,
    }
    report["short_exact"] = report["f_injective"] and report["exact_at_B"] and report["g_surjective"]
    report["dual_short_exact"] = (
        report["dual_injective"] and report["dual_exact"] and report["dual_surjective"]
    )
    return report
