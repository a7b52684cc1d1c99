from __future__ import annotations

import itertools

import pytest

from explorable.errors import InvalidParameter
from explorable.families import (
    Bounds,
    WitnessTable,
    Witness,
    c_bounds,
    c_family,
    check_counterexample,
    find_witness,
    find_witnesses,
    fstar_family,
    get_family,
    ring_family,
    tree_family,
    verify_witness_prefix,
)
from explorable.graph import build_c, build_clockwise_ring, build_d, canonical_code, port_isomorphic
from explorable.views import unfold_view
from oracles import brute_witness, perm_isomorphic


def test_c_family_members():
    f = c_family()
    assert port_isomorphic(f.member(1), build_c(3)) and f.member(1).n == 4
    assert port_isomorphic(f.member(3), build_c(5)) and f.size(3) == 6
    assert [f.size(i) for i in range(1, 10)] == list(range(4, 13))


def test_ring_family_members():
    f = ring_family()
    assert port_isomorphic(f.member(1), build_clockwise_ring(3))
    assert f.counterexample(1, 0, 4, 7) == (8, 0)
    assert check_counterexample(f, 1, 2, 4, 7)


def test_tree_family_first_member_is_k2():
    g = tree_family().member(1)
    assert g.n == 2 and g.is_tree


def test_fstar_members():
    f0 = fstar_family(0)
    assert port_isomorphic(f0.member(1), build_d(1)) and f0.member(1).n == 9
    f2 = fstar_family(2)
    assert port_isomorphic(f2.member(2), build_c(4))
    assert port_isomorphic(f2.member(3), build_d(3)) and f2.member(3).n == 25
    with pytest.raises(InvalidParameter):
        fstar_family(-1)


def test_member_index_checked():
    with pytest.raises(InvalidParameter):
        c_family().member(0)
    with pytest.raises(InvalidParameter):
        c_family().witness(1, 9)
    with pytest.raises(InvalidParameter):
        ring_family().witness(1, 0)
    with pytest.raises(InvalidParameter):
        c_family().counterexample(1, 0, 1, 1)


def test_registry():
    assert get_family("c") is get_family("c")
    assert get_family("fstar:r=3").size(3) == 6 and get_family("fstar:r=3").size(4) == 33
    assert get_family("rings").name == "rings"
    with pytest.raises(InvalidParameter):
        get_family("fstar:r=x")


@pytest.mark.parametrize(
    "fam", [c_family(), ring_family(), tree_family(), fstar_family(0), fstar_family(2), fstar_family(5)],
    ids=lambda f: f.name,
)
def test_canonical_order_audit(fam):
    limit = 12
    members = [fam.member(i) for i in range(1, limit + 1)]
    sizes = [g.n for g in members]
    assert sizes == sorted(sizes)
    assert sizes == [fam.size(i) for i in range(1, limit + 1)]
    for a, b in itertools.combinations(range(limit), 2):
        if sizes[a] == sizes[b]:
            assert canonical_code(members[a]) < canonical_code(members[b])
            if sizes[a] <= 6:
                assert not perm_isomorphic(members[a], members[b])
        else:
            assert not port_isomorphic(members[a], members[b])


@pytest.mark.parametrize("r", range(6))
def test_fstar_sizes_strictly_increase(r):
    f = fstar_family(r)
    sizes = [f.size(i) for i in range(1, 11)]
    assert all(a < b for a, b in zip(sizes, sizes[1:]))


def test_ring_counterexample_grid():
    f = ring_family()
    for i in (1, 2, 4):
        for v in range(f.member(i).n):
            for k in range(1, 7):
                for m in range(1, 7):
                    j, _ = f.counterexample(i, v, k, m)
                    assert j > m and check_counterexample(f, i, v, k, m)


def test_ring_has_no_witness():
    f = ring_family()
    for i in (1, 3):
        assert find_witness(f, i, 0, Bounds(6, 6, 12)) is None
        assert not verify_witness_prefix(f, i, 0, 5, 4, 5)


def test_c_witness_example():
    f = c_family()
    v = f.member(1).degrees.index(3)
    w20 = find_witness(f, 1, v, Bounds(7, 3, 20))
    w50 = find_witness(f, 1, v, Bounds(7, 3, 50))
    assert w20 == w50 and w20 is not None
    assert w20.k <= 7 and w20.m <= 3
    assert f.witness(1, v) == w20
    assert verify_witness_prefix(f, 1, v, w20.k, w20.m, 50)


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_c_witness_matches_brute_force(i):
    f = c_family()
    b = c_bounds(i)
    for v in range(f.member(i).n):
        assert tuple(find_witness(f, i, v, b)) == brute_witness(f, i, v, *b)


@pytest.mark.parametrize("i", range(1, 7))
def test_tree_witness_matches_brute_force(i):
    f = tree_family()
    # a prefix through all trees of size 6 holds a longer tree repeating any
    # shallow view of a tree of size <= 4, so the surrogate meets the exact value
    b = Bounds(6, 10, 66)
    assert f.size(66) == 6 and f.size(67) == 7
    for v in range(f.member(i).n):
        w = f.witness(i, v)
        assert brute_witness(f, i, v, *b) == tuple(w)
        assert tuple(find_witness(f, i, v, b)) == tuple(w)


def test_tree_short_prefix_surrogate_agrees_with_brute_force():
    f = tree_family()
    b = Bounds(6, 10, 20)
    for i in range(1, 7):
        for v in range(f.member(i).n):
            assert tuple(find_witness(f, i, v, b)) == brute_witness(f, i, v, *b)


def test_tree_k2_witness():
    f = tree_family()
    assert all(f.witness(1, v) <= Witness(2, 1) for v in range(2))
    assert all(verify_witness_prefix(f, 1, v, *f.witness(1, v), 50) for v in range(2))


def test_tree_too_shallow_witness_fails():
    f = tree_family()
    # root of degree 1 collides with leaves of any larger tree at depth 0 and 1
    i = 2  # P3
    leaf = f.member(i).degrees.index(1)
    with pytest.raises(InvalidParameter):
        verify_witness_prefix(f, i, leaf, 0, 1, 10)
    assert not verify_witness_prefix(f, i, leaf, 1, 1, 10)


def test_equal_size_trees_have_distinct_views():
    f = tree_family()
    i = 1
    by_size: dict = {}
    while f.size(i) <= 6:
        g = f.member(i)
        by_size.setdefault(g.n, []).append({unfold_view(g, v, g.n) for v in range(g.n)})
        i += 1
    for views in by_size.values():
        for a, b in itertools.combinations(views, 2):
            assert not (a & b)


def test_find_witnesses_and_table_roundtrip(tmp_path):
    f = c_family()
    ws = find_witnesses(f, 2, c_bounds(2))
    t = WitnessTable()
    t.put("c", 2, ws, c_bounds(2).j_max)
    path = tmp_path / "w.txt"
    t.save(path)
    back = WitnessTable.load(path)
    assert back.get("c", 2) == (ws, c_bounds(2).j_max)
    assert back.dump() == t.dump()


def test_index_of_and_contains():
    f = c_family()
    assert f.index_of(build_c(6)) == 4
    assert f.index_of(build_clockwise_ring(5)) is None
    assert fstar_family(1).contains(build_d(2)) and not fstar_family(2).contains(build_d(2))
