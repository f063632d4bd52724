import random
from collections import Counter
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from protori.arith import INF
from protori.decomp import (
    Idempotent,
    ProtorusDesc,
    StrandGroup,
    cd_iso,
    decompose_protorus,
    direct_sum,
    divisible_part,
    find_rank1_idempotent,
    has_Q_summand,
    hom_to_z_witness,
    is_torus_free,
    main_decompose,
    maps_into,
    near_iso,
    product,
    protorus_dim,
    split,
    uniqueness_check,
)
from protori.errors import DimensionMismatch, NotAMember, NotIdempotentOnA, ZeroVector
from protori.typesys import TP_Q, TP_Z, TypeClass, canonical_type

from helpers import (
    Q,
    Z,
    Z2,
    Z3,
    cd_group,
    clipped_block,
    heightseqs,
    membership_instance,
    oracle_caps,
    oracle_primes,
    planted_instance,
    sample_vectors,
)
from oracles import brute_height, brute_member

C = clipped_block(5)
E1, E2 = (1, 0), (0, 1)


def mat_vec(m, x):
    return [sum(F(a) * b for a, b in zip(row, x)) for row in m]


# --- membership and heights ----------------------------------------------------


def test_rank_examples():
    assert C.rank == 2
    assert StrandGroup([], ambient=3).rank == 0
    assert StrandGroup([(Q, [1])]).rank == 1


def test_member_examples():
    assert C.member([F(1, 5), F(1, 5)])
    assert not C.member([F(1, 10), F(1, 5)])
    assert C.member([F(1, 4), 0])
    assert not C.member([F(1, 5), 0])
    with pytest.raises(DimensionMismatch):
        C.member([1, 2, 3])


def test_member_matches_coset_oracle():
    # R = Z[1/2] e1 + Z[1/3] e2; x in C iff x - c (e1+e2)/5 in R for some c mod 5
    def coset(x):
        for c in range(5):
            y = [x[0] - F(c, 5), x[1] - F(c, 5)]
            if all(q.denominator in (1, 2, 4, 8, 16, 32) for q in y[:1]) and \
                    y[1].denominator in (1, 3, 9, 27, 81):
                return True
        return False

    rng = random.Random(2)
    for _ in range(300):
        x = [F(rng.randint(-20, 20), rng.choice([1, 2, 3, 4, 5, 10, 15, 9, 8, 20])) for _ in range(2)]
        assert C.member(x) == coset(x), x


def test_element_heights_examples():
    assert C.element_type([F(1, 5), F(1, 5)]) == TP_Z
    h = C.element_heights([F(1, 5), F(1, 5)])
    assert h[2] == 0 and h[5] == 0 and h[3] == 0
    assert StrandGroup([(Z2, [1])]).element_heights([1]) == Z2
    assert StrandGroup([(Q, [1])]).element_heights([1]).default is INF
    with pytest.raises(NotAMember):
        C.element_heights([F(1, 5), 0])
    with pytest.raises(ZeroVector):
        C.element_heights([0, 0])
    # the base strands stay divisible at their own prime
    assert C.element_heights([1, 0])[2] is INF and C.element_heights([0, 1])[3] is INF


def test_maps_into_examples():
    assert maps_into([[1, 0], [0, 1]], C, C)
    assert not maps_into([[1, 0], [0, 0]], C, C)
    c2 = clipped_block(5, (1, 2))
    assert maps_into([[F(1, 2), 0], [0, 1]], C, c2)
    assert maps_into([[2, 0], [0, 1]], c2, C)


def test_membership_is_a_subgroup():
    rng = random.Random(4)
    for _ in range(30):
        g, _, _ = membership_instance(rng)
        xs = [x for x in sample_vectors(rng, g, 12) if g.member(x)]
        for s in g.strands:
            assert g.member(s.w) and g.member([3 * t for t in s.w])
        for x in xs:
            for y in xs:
                assert g.member([a - b for a, b in zip(x, y)])


def test_member_and_heights_match_dense_oracle():
    rng = random.Random(8)
    checked = 0
    for _ in range(40):
        g, strands, primes = membership_instance(rng)
        for x in sample_vectors(rng, g, 8):
            pr = oracle_primes(primes, x)
            ok = g.member(x)
            assert ok == brute_member(strands, x, pr, oracle_caps(strands, pr, x)), (g, x)
            if ok and any(x):
                caps = oracle_caps(strands, pr, x, extra=3)
                h = g.element_heights(x)
                for p in (2, 3, 5):
                    want = brute_height(strands, x, p, pr, caps, 3)
                    got = 3 if h[p] is INF else min(h[p], 3)
                    assert got == want, (g, x, p)
            checked += 1
    assert checked == 320


# --- idempotents and splitting --------------------------------------------------


def test_find_idempotent_examples():
    cd = StrandGroup([(Z2, E1), (Z3, E2)])
    e = find_rank1_idempotent(cd, 4)
    assert e.v == (1, 0) and e.f == (1, 0)
    assert find_rank1_idempotent(C, 8) is None
    one = find_rank1_idempotent(StrandGroup([(Z, [1])]), 2)
    assert e is not None and one.matrix == ((1,),)


def test_split_examples():
    cd = StrandGroup([(Z2, E1), (Z3, E2)])
    t, comp = split(cd, Idempotent((1, 0), (1, 0)))
    assert t == TypeClass(0, [2])
    assert comp == StrandGroup([(Z3, E2)], ambient=2)
    red = StrandGroup([(Z, [1]), (Z, [1])])
    t, comp = split(red, Idempotent((1,), (1,)))
    assert t == TP_Z and comp.rank == 0 and not comp.strands
    mixed = StrandGroup([(Z2, E1), (Z, [1, 1])])
    t, comp = split(mixed, Idempotent((1, 1), (0, 1)))
    assert t == TP_Z and comp.rank == 1
    for x in ([1, 0], [F(1, 8), 0], [F(1, 2), 0]):
        assert comp.member(x)
    assert not comp.member([F(1, 3), 0])
    with pytest.raises(NotIdempotentOnA):
        split(C, Idempotent((1, 0), (1, 0)))


def _check_split(g, e):
    """member(A, x) <=> member(eA, ex) and member((1-e)A, (1-e)x)."""
    t, comp = split(g, e)
    image = g.image(e.matrix)
    assert image.rank == 1 and comp.rank == g.rank - 1
    # a summand's elements carry the same type in the summand and in A
    w = next(mat_vec(e.matrix, s.w) for s in g.strands if any(mat_vec(e.matrix, s.w)))
    assert image.element_type(w) == t and g.element_type(w) == t
    rng = random.Random(0)
    for _ in range(25):
        x = [F(rng.randint(-12, 12), rng.choice([1, 2, 3, 4, 5, 6, 9, 10])) for _ in range(g.ambient)]
        if not g.in_span(x):
            continue
        ex = mat_vec(e.matrix, x)
        cx = mat_vec(e.complement_matrix(), x)
        assert g.member(x) == (image.member(ex) and comp.member(cx))


def test_split_correctness_on_planted():
    rng = random.Random(5)
    for _ in range(8):
        g, types, _ = planted_instance(rng)
        e = find_rank1_idempotent(g, 6)
        if e is None:
            assert not types
            continue
        _check_split(g, e)


@given(heightseqs(), heightseqs())
@settings(max_examples=25)
def test_split_cd_types(h1, h2):
    g = cd_group([h1, h2])
    d = main_decompose(g, 4)
    assert d.certified
    assert Counter(d.torus_types) == Counter([canonical_type(h1), canonical_type(h2)])


# --- main decomposition -----------------------------------------------------------


def test_main_decompose_examples():
    d = main_decompose(StrandGroup([(Z, E1), (Q, E2)]), 4)
    assert d.type_multiset() == Counter([TP_Z, TP_Q]) and d.remainder.rank == 0 and d.complete
    d = main_decompose(C, 8)
    assert d.torus_types == [] and d.remainder == C and d.complete and d.bound_used == 8
    g = direct_sum(C, StrandGroup([(Z, [1])]))
    d = main_decompose(g, 6)
    assert d.torus_types == [TP_Z] and d.remainder.rank == 2
    assert near_iso(d.remainder.image(_drop_last(3)), C, 6).verdict == "yes"


def _drop_last(n):
    return [[int(i == j) for j in range(n)] for i in range(n - 1)]


def test_main_decompose_planted_and_idempotent():
    rng = random.Random(9)
    for _ in range(10):
        g, types, rem_rank = planted_instance(rng)
        d = main_decompose(g, 8)
        assert d.torus_types == types
        assert d.remainder.rank == rem_rank
        # clipped => no Q summand, and the remainder does not split further
        assert not has_Q_summand(d.remainder)
        assert main_decompose(d.remainder, 8).torus_types == []


# --- Hom(A, Z) and divisible part ----------------------------------------------


def test_torus_free_examples():
    assert not is_torus_free(StrandGroup([(Z, E1), (Z2, E2)]))
    assert is_torus_free(StrandGroup([(Q, [1])]))
    assert is_torus_free(C)
    f = hom_to_z_witness(StrandGroup([(Z, E1), (Z2, E2)]))
    assert f is not None and f[1] == 0 and f[0] != 0


def test_hom_to_z_witness_is_integral():
    rng = random.Random(12)
    for _ in range(30):
        g, _, _ = membership_instance(rng)
        f = hom_to_z_witness(g)
        if f is None:
            continue
        assert any(sum(a * b for a, b in zip(f, s.w)) for s in g.strands)
        for x in sample_vectors(rng, g, 10):
            if g.member(x):
                assert sum(F(a) * b for a, b in zip(f, x)).denominator == 1


def test_has_Q_summand_examples():
    assert has_Q_summand(StrandGroup([(Q, E1), (Z2, E2)]))
    assert not has_Q_summand(C)
    assert not has_Q_summand(StrandGroup([(Z, [1])]))
    basis, _ = divisible_part(StrandGroup([(Q, E1), (Z2, E2)]))
    assert basis == [(1, 0)]


def test_torus_free_iff_no_tp_z_summand():
    rng = random.Random(21)
    for _ in range(12):
        g, types, _ = planted_instance(rng)
        assert is_torus_free(g) == (TP_Z not in types)


# --- near-isomorphism and uniqueness ----------------------------------------------


def test_near_iso_examples():
    ni = near_iso(C, C, 4)
    assert ni.verdict == "yes" and 1 in ni.multipliers
    assert near_iso(StrandGroup([(Z, [1])]), StrandGroup([(Q, [1])]), 4).verdict == "no"
    c2 = clipped_block(5, (1, 2))
    ni = near_iso(C, c2, 6)
    assert ni.verdict == "yes" and 1 in ni.multipliers
    assert near_iso(C, StrandGroup([(Z, [1])]), 4).verdict == "no"


def test_near_iso_soundness():
    for a, b in [(C, clipped_block(5, (1, 2))), (C, C), (cd_group([Z, Z2]), cd_group([Z2, Z]))]:
        ni = near_iso(a, b, 6)
        if ni.verdict != "yes":
            continue
        for p in [q for q in range(2, 101) if all(q % r for r in range(2, q))]:
            assert any(n % p for n in ni.multipliers)
        for w in ni.witnesses:
            assert maps_into(w["phi"], a, b) and maps_into(w["psi"], b, a)


def test_cd_iso_examples():
    assert cd_iso([TP_Z, TP_Z], [TP_Z, TP_Z])
    assert cd_iso([TP_Z, TP_Q], [TP_Q, TP_Z])
    assert not cd_iso([TP_Z], [TP_Q])


def test_uniqueness_examples():
    rep = uniqueness_check(cd_group([Z, Z2, Q]), 3, 4)
    assert rep["ok"] and all(r["decomposition"].remainder.rank == 0 for r in rep["runs"])
    g = direct_sum(C, StrandGroup([(Z, [1])]))
    rep = uniqueness_check(g, 3, 6)
    assert rep["ok"] and rep["types_equal"]
    assert all(r["decomposition"].torus_types == [TP_Z] for r in rep["runs"])
    assert all(p["verdict"] == "yes" and 1 in p["multipliers"] for p in rep["pairs"])
    glued = StrandGroup([(Z, E1), (Z, E2), (Z, [1, 1])])
    rep = uniqueness_check(glued, 3, 4)
    assert all(r["decomposition"].torus_types == [TP_Z, TP_Z] for r in rep["runs"])
    with pytest.raises(ValueError):
        uniqueness_check(glued, 1, 4)


# --- protori -----------------------------------------------------------------------


def test_protorus_dim_examples():
    assert protorus_dim(ProtorusDesc(cd_group([Z, Z, Q]))) == 3
    assert protorus_dim(ProtorusDesc(StrandGroup([(Z2, [1])]))) == 1
    assert protorus_dim(ProtorusDesc(StrandGroup([], ambient=0))) == 0


@given(st.lists(heightseqs(), max_size=3), st.lists(heightseqs(), max_size=3))
@settings(max_examples=20)
def test_dimension_additivity(hs1, hs2):
    p, q = ProtorusDesc(cd_group(hs1)), ProtorusDesc(cd_group(hs2))
    assert protorus_dim(product(p, q)) == protorus_dim(p) + protorus_dim(q)
    pc = ProtorusDesc(C)
    assert protorus_dim(product(pc, p)) == 2 + len(hs1)


def test_decompose_protorus_examples():
    r = decompose_protorus(ProtorusDesc(cd_group([Z, Z])), 4)
    assert r.torus_part == [TP_Z, TP_Z] and protorus_dim(r.clipped_part) == 0
    assert r.report["factors"] == ["T", "T"] and r.report["max_torus_rank"] == 2
    r = decompose_protorus(ProtorusDesc(direct_sum(C, StrandGroup([(Z, [1])]))), 6)
    assert r.torus_part == [TP_Z] and protorus_dim(r.clipped_part) == 2
    assert r.report["clipped_torus_free"] and r.report["clipped_no_Q_quotient"]
    r = decompose_protorus(ProtorusDesc(cd_group([Z2, Z3])), 4)
    assert sorted(map(str, r.torus_part)) == sorted(map(str, [TypeClass(0, [2]), TypeClass(0, [3])]))
    assert protorus_dim(r.clipped_part) == 0 and r.report["max_torus_rank"] == 0
