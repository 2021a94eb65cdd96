import random

import pytest
from hypothesis import given, settings, strategies as st

from cuttree.netcore import Network, NetworkError, capacity, is_tight
from cuttree.cutring import (
    CutFamily,
    OracleLimitError,
    count_min_cuts,
    crossing_count,
    enumerate_all_cuts,
    in_ring,
    is_thin,
    min_cut_value_oracle,
    oracle_dump,
    tight_cuts_through_edge,
    uncross,
)

from conftest import (
    brute_all_sides,
    brute_cut_capacity,
    brute_lambda,
    brute_min_cut_sides,
    cycle,
    random_connected_net,
)


def test_enumerate_counts(path3, k3, c4):
    assert len(enumerate_all_cuts(path3)) == 6
    k3_cuts = enumerate_all_cuts(k3)
    assert len(k3_cuts) == 6
    assert all(lvl == 2 for lvl in k3_cuts.levels.values())
    assert len(enumerate_all_cuts(c4)) == 14


def test_enumerate_levels_match_brute(k4_caps):
    fam = enumerate_all_cuts(k4_caps)
    for cut in fam:
        assert fam.levels[cut.side] == brute_cut_capacity(k4_caps, cut.side)


def test_oracle_limit(monkeypatch):
    big = Network([str(i) for i in range(17)], [(str(i), str(i + 1), 1) for i in range(16)])
    with pytest.raises(OracleLimitError, match="oracle limit exceeded"):
        enumerate_all_cuts(big)
    monkeypatch.setenv("CUTTREE_ORACLE_LIMIT", "18")
    assert len(enumerate_all_cuts(big)) == 2**17 - 2


def test_in_ring_examples(c4, k3):
    assert in_ring(c4, c4.cut({"1", "3"}), 2)
    assert not in_ring(k3, k3.cut({"u"}), 1)
    # m >= capacity(A) always suffices: A generates itself
    for side in brute_all_sides(c4):
        cut = c4.cut(side)
        assert in_ring(c4, cut, capacity(c4, cut))


def test_in_ring_monotone(k4_caps):
    for side in brute_all_sides(k4_caps):
        cut = k4_caps.cut(side)
        flags = [in_ring(k4_caps, cut, m) for m in range(1, 9)]
        assert flags == sorted(flags)  # False... then True...


def test_is_thin_examples(path3, k3, c4):
    assert is_thin(k3, k3.cut({"u"}))
    assert not is_thin(c4, c4.cut({"1", "3"}))
    assert is_thin(path3, path3.cut({"a"}))


def test_is_thin_matches_brute_definition(k4_caps):
    # thin <=> some pair across A has brute lambda equal to c(A)
    for side in brute_all_sides(k4_caps):
        cut = k4_caps.cut(side)
        cap = brute_cut_capacity(k4_caps, side)
        expect = any(
            brute_lambda(k4_caps, u, v) == cap
            for u in side
            for v in set(k4_caps.vertices) - side
        )
        assert is_thin(k4_caps, cut) == expect


def test_crossing_count(c4):
    A = c4.cut({"1", "2"})
    assert crossing_count(A, CutFamily(c4)) == 0
    singletons = CutFamily(c4, [c4.cut({v}) for v in c4.vertices])
    assert crossing_count(A, singletons) == 0
    # {3,4} is A's complement, hence nested with it; {2,3} and {1,4} cross A
    assert crossing_count(A, CutFamily(c4, [c4.cut({"2", "3"}), c4.cut({"3", "4"})])) == 1
    crossers = CutFamily(c4, [c4.cut({"2", "3"}), c4.cut({"1", "4"})])
    assert crossing_count(A, crossers) == 2


# -- tight cuts through an edge ------------------------------------------------


def test_tight_cuts_path(path3):
    fam = tight_cuts_through_edge(path3, ("a", "b"), 1)
    assert set(fam.sides()) == {frozenset({"a"}), frozenset({"b", "c"})}


def test_tight_cuts_c4(c4):
    fam = tight_cuts_through_edge(c4, ("1", "2"), 2)
    want = [{"1"}, {"2"}, {"1", "4"}, {"2", "3"}, {"1", "3", "4"}, {"2", "3", "4"}]
    assert set(fam.sides()) == {frozenset(s) for s in want}
    assert len(tight_cuts_through_edge(c4, ("1", "2"), 1)) == 0


def _brute_tight_through_edge(net, e, k):
    out = set()
    for side in brute_all_sides(net):
        if (e[0] in side) != (e[1] in side) and brute_cut_capacity(net, side) == k:
            if is_tight(net, net.cut(side)):
                out.add(side)
    return out


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**9))
def test_tight_cuts_match_brute(seed):
    rng = random.Random(seed)
    net = random_connected_net(rng, nmax=6, capmax=3)
    e = net.edges[rng.randrange(len(net.edges))]
    k = rng.randint(1, 7)
    got = set(tight_cuts_through_edge(net, e, k).sides())
    assert got == _brute_tight_through_edge(net, e, k)


# -- uncrossing -----------------------------------------------------------------


def test_uncross_c4(c4):
    A, B = c4.cut({"1", "2"}), c4.cut({"2", "3"})
    ka, kb = uncross(c4, A, B)
    assert (ka.side, kb.side) == (frozenset({"1"}), frozenset({"3"}))
    assert capacity(c4, ka) == capacity(c4, A) == 2
    assert capacity(c4, kb) == capacity(c4, B) == 2


def test_uncross_c6(c6):
    A, B = c6.cut({"1", "2", "3"}), c6.cut({"3", "4", "5"})
    ka, kb = uncross(c6, A, B)
    assert (ka.side, kb.side) == (frozenset({"1", "2"}), frozenset({"4", "5"}))


def test_uncross_nested_error(k3):
    with pytest.raises(NetworkError, match="already nested"):
        uncross(k3, k3.cut({"u"}), k3.cut({"v"}))


def test_uncross_requires_thin(c4):
    # {1,3} has capacity 4 but every pair is separated at 2: not thin
    five = cycle(5)
    A, B = five.cut({"1", "2", "4"}), five.cut({"2", "3", "4"})
    assert not is_thin(five, A)
    with pytest.raises(NetworkError, match="requires thin"):
        uncross(five, A, B)


def test_uncross_results_nested_with_inputs_gone(c4):
    from cuttree.netcore import is_nested

    ka, kb = uncross(c4, c4.cut({"1", "2"}), c4.cut({"2", "3"}))
    assert is_nested(ka, kb)


# -- oracle helpers -------------------------------------------------------------


def test_count_min_cuts_matches_brute(k4_caps):
    for s, t in (("a", "b"), ("a", "d"), ("c", "d")):
        val, cnt = count_min_cuts(k4_caps, s, t)
        assert val == brute_lambda(k4_caps, s, t)
        # brute side count double-counts nothing: each partition listed once
        assert cnt == len(brute_min_cut_sides(k4_caps, s, t))


def test_min_cut_value_oracle(path3):
    assert min_cut_value_oracle(path3, "a", "c") == 1


def test_oracle_dump_shape(k3):
    rows = oracle_dump(k3)
    assert len(rows) == 6
    assert all(set(r) == {"side", "capacity", "thin", "tight"} for r in rows)
    assert all(r["capacity"] == 2 and r["thin"] and r["tight"] for r in rows)
