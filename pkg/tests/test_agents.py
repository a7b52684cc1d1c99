from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from explorable.agents import (
    GO_AROUND_BODY,
    a_f_agent,
    a_fstar_agent,
    basic_walk_tree_agent,
    check_procedure,
    explo_agent,
    find_success_agent,
    go_around_subroutine,
)
from explorable.enumeration import graphs_of_size
from explorable.errors import InvalidParameter
from explorable.families import c_family, fstar_family, ring_family, tree_family
from explorable.graph import PortGraph, antipode_of_degree4, build_c, build_clockwise_ring, build_d
from explorable.runtime import Status, is_full_exploration, run
from explorable.views import all_views, node_views_equal, unfold_view
from oracles import random_connected_graph

K2 = PortGraph(2, [[(1, 0)], [(0, 0)]])
P3 = PortGraph(3, [[(1, 0)], [(0, 0), (2, 0)], [(1, 1)]])


def run_check(target, h, w):
    agent = check_procedure(target)
    t = run(agent, h, w, 10**6)
    assert t.status is Status.STOPPED
    return agent.result, t


# ---------------------------------------------------------------- trees


def test_basic_walk_p3_and_k2():
    t = run(basic_walk_tree_agent(), P3, 0, 50)
    assert is_full_exploration(t, P3) and t.final_node == 0
    t = run(basic_walk_tree_agent(), K2, 1, 50)
    assert is_full_exploration(t, K2) and len(t) <= 2


@pytest.mark.parametrize("n", range(2, 7))
def test_basic_walk_all_trees_exact_tour(n):
    for g in graphs_of_size(n, True):
        for s in range(g.n):
            t = run(basic_walk_tree_agent(), g, s, 10 * n)
            assert is_full_exploration(t, g)
            assert len(t) == 2 * (n - 1) and t.final_node == s


# ---------------------------------------------------------------- Check


def test_check_examples():
    c3 = build_c(3)
    v3, v2 = c3.degrees.index(3), c3.degrees.index(2)
    ok, t = run_check(unfold_view(c3, v3, 5), c3, v3)
    assert ok and t.final_node == v3
    ok, t = run_check(unfold_view(c3, v3, 5), c3, v2)
    assert ok is False and len(t) == 0
    d2 = build_d(2)
    w = antipode_of_degree4(d2)
    ok, t = run_check(unfold_view(c3, v3, 5), d2, w)
    assert ok and t.final_node == w
    ok, t = run_check(unfold_view(c3, v3, 6), d2, w)
    assert ok is False and t.final_node == w


def _pair_pool():
    graphs = [g for n in range(2, 5) for g in graphs_of_size(n)]
    graphs += [build_c(3), build_c(4), build_clockwise_ring(5)]
    rng = random.Random(5)
    pool = []
    for k in range(0, 6):
        buckets: dict = {}
        for gi, g in enumerate(graphs):
            for v, view in enumerate(all_views(g, k)):
                buckets.setdefault(view, []).append((gi, v))
        for nodes in buckets.values():
            if len(nodes) > 1:
                a, b = rng.sample(nodes, 2)
                pool.append((graphs[a[0]], a[1], graphs[b[0]], b[1], k))
    return pool


POOL = _pair_pool()


@given(idx=st.integers(0, len(POOL) - 1))
def test_check_succeeds_on_equal_views(idx):
    g, v, h, w, k = POOL[idx]
    ok, t = run_check(unfold_view(g, v, k), h, w)
    assert ok and t.final_node == w


@given(
    n1=st.integers(2, 5), n2=st.integers(2, 5), s1=st.integers(0, 10**6), s2=st.integers(0, 10**6),
    k=st.integers(0, 5),
)
def test_check_matches_view_equality(n1, n2, s1, s2, k):
    rng = random.Random(s1)
    g = random_connected_graph(n1, rng)
    h = random_connected_graph(n2, random.Random(s2))
    v, w = rng.randrange(n1), rng.randrange(n2)
    ok, t = run_check(unfold_view(g, v, k), h, w)
    assert ok == node_views_equal(g, v, h, w, k)
    assert t.final_node == w


# ---------------------------------------------------------------- Find Success / Explo


def test_find_success_c3_pendant():
    fam = c_family()
    g1 = fam.member(1)
    c3 = build_c(3)
    agent = find_success_agent(fam)
    t = run(agent, c3, c3.degrees.index(1), 10**6)
    assert t.status is Status.STOPPED
    v, i = agent.result
    assert i == 1 and g1.degree(v) == 1


def test_find_success_c4_degree3():
    agent = find_success_agent(c_family())
    c4 = build_c(4)
    t = run(agent, c4, c4.degrees.index(3), 10**6)
    assert t.status is Status.STOPPED and agent.result[1] == 2
    # back at the start after every Check
    assert all(t.node_after(moves) == t.start for _, _, _, moves in agent.events)


def test_find_success_off_family_hits_limit():
    t = run(find_success_agent(c_family()), build_clockwise_ring(5), 0, 3000)
    assert t.status is Status.STEP_LIMIT


def test_find_success_needs_witnesses():
    with pytest.raises(InvalidParameter):
        find_success_agent(ring_family())
    with pytest.raises(InvalidParameter):
        explo_agent(fstar_family(1))


def test_explo_c5_every_start():
    g = build_c(5)
    for s in range(g.n):
        agent = explo_agent(c_family())
        t = run(agent, g, s, 10**6)
        assert is_full_exploration(t, g)
        assert all(t.node_after(moves) == s for _, _, _, moves in agent.events)


def test_explo_trees_up_to_size_5():
    fam = tree_family()
    for n in range(2, 6):
        for g in graphs_of_size(n, True):
            for s in range(g.n):
                assert is_full_exploration(run(explo_agent(fam), g, s, 10**6), g)


def test_explo_off_family_ring():
    t = run(explo_agent(c_family()), build_clockwise_ring(6), 0, 3000)
    assert t.status is Status.STEP_LIMIT


# ---------------------------------------------------------------- A(F), Go around, A(F*)


def test_a_f_c3_from_pendant():
    g = build_c(3)
    t = run(a_f_agent(), g, g.degrees.index(1), 100)
    assert is_full_exploration(t, g) and len(t) <= 8
    assert g.degree(t.final_node) == 3


def test_a_f_c8_degree2_starts_stop_at_pendant():
    g = build_c(8)
    for s in range(g.n):
        if g.degree(s) == 2:
            t = run(a_f_agent(), g, s, 100)
            assert is_full_exploration(t, g)
            assert t.steps[-1].exit_port == 2 and g.degree(t.final_node) == 1


def test_a_f_c4_degree3_first_moves():
    g = build_c(4)
    t = run(a_f_agent(), g, g.degrees.index(3), 100)
    assert [s.exit_port for s in t.steps[:2]] == [2, 0]


@pytest.mark.parametrize("k", range(3, 13))
def test_a_f_bound(k):
    g = build_c(k)
    for s in range(g.n):
        t = run(a_f_agent(), g, s, 1000)
        assert is_full_exploration(t, g) and len(t) <= 2 * k + 2


def test_a_f_faults_off_family():
    t = run(a_f_agent(), build_d(1), build_d(1).degrees.index(4), 100)
    assert t.status is Status.FAULTED


def test_go_around_d1():
    g = build_d(1)
    t = run(go_around_subroutine(), g, g.degrees.index(3), 1000)
    assert is_full_exploration(t, g)
    assert t.steps[-1].exit_port == 3 and g.degree(t.final_node) == 1


@pytest.mark.parametrize("j", [2, 3, 5])
def test_go_around_every_degree3_start(j):
    g = build_d(j)
    for s in range(g.n):
        if g.degree(s) == 3:
            t = run(go_around_subroutine(), g, s, 10000)
            assert is_full_exploration(t, g)
            assert t.steps[-1].exit_port == 3 and g.degree(t.final_node) == 1


def test_go_around_body_length():
    # three ring edges between consecutive pendant-carrying ring nodes
    assert GO_AROUND_BODY.count(1) == 3


def test_a_fstar_r0_d1_from_hub():
    g = build_d(1)
    t = run(a_fstar_agent(0), g, g.degrees.index(4), 10000)
    assert is_full_exploration(t, g)


@pytest.mark.parametrize("j", range(1, 7))
def test_a_fstar_r0_every_start(j):
    g = build_d(j)
    for s in range(g.n):
        assert is_full_exploration(run(a_fstar_agent(0), g, s, 10**5), g)


def test_a_fstar_r2_c3_every_start():
    g = build_c(3)
    for s in range(g.n):
        assert is_full_exploration(run(a_fstar_agent(2), g, s, 10**5), g)


def test_a_fstar_r2_d5_every_start():
    # Expected to fail: with C_3 in the family, D_5 starts whose short-range
    # view matches C_3 cannot be told apart within the probe.
    g = fstar_family(2).member(5)
    assert g.n == 41
    bad = [s for s in range(g.n) if not is_full_exploration(run(a_fstar_agent(2), g, s, 10**5), g)]
    assert bad == []


def test_a_fstar_rejects_negative_r():
    with pytest.raises(InvalidParameter):
        a_fstar_agent(-1)
