import json

import pytest

from cuttree.netcore import NetworkError, side_capacity
from cuttree.flow import all_pairs_connectivity, verify_flow, flow_value_across_cut
from cuttree.cutring import is_thin
from cuttree.strips import (
    EndPoint,
    StripNetwork,
    end_flow_certificate,
    end_surrogate_nodes,
    load_strip_json,
    parse_strip_endpoint,
    separation_level,
    strip_to_json,
    truncate,
    windowed_tree,
)

# -- truncation -----------------------------------------------------------------


def test_truncate_ladder_w1(ladder):
    t = truncate(ladder, 1)
    assert len(t.network.vertices) == 8  # 6 strip vertices + 2 apexes
    assert t.vertex_id(0, "top") == "0/top"
    with pytest.raises(NetworkError):
        t.vertex_id(2, "top")


def test_truncate_fiveline_w0(fiveline):
    t = truncate(fiveline, 0)
    assert len(t.network.vertices) == 7  # 5 pattern vertices + 2 apexes


def test_truncate_ladder_apex_capacity(ladder):
    t = truncate(ladder, 2)
    for apex in (t.apex_left, t.apex_right):
        deg = sum(c for (u, v), c in t.network.cap.items() if apex in (u, v))
        assert deg == 2  # two rails cross each window boundary


def test_truncate_merges_parallel_apex_edges():
    # two forward edges land on the same next-column vertex: their capacities
    # sum into one apex edge
    S = StripNetwork(["x", "y"], [("x", "y", 1)], [("x", "x", 2), ("y", "x", 3)])
    t = truncate(S, 1)
    assert t.network.edge_capacity(t.apex_left, "-1/x") == 5


# -- separation levels -------------------------------------------------------------


def test_ladder_separation_levels(ladder):
    assert separation_level(ladder, EndPoint.LEFT, EndPoint.RIGHT) == 2
    assert separation_level(ladder, (0, "bottom"), (0, "top")) == 3
    assert separation_level(ladder, (0, "bottom"), (2, "top")) == 2
    assert separation_level(ladder, (0, "top"), EndPoint.RIGHT) == 2


def test_fiveline_separation_levels(fiveline):
    assert separation_level(fiveline, EndPoint.LEFT, EndPoint.RIGHT) == 5
    assert separation_level(fiveline, (0, "r2"), (0, "r3")) == 4
    assert separation_level(fiveline, (0, "r0"), (1, "r0")) == 3


def test_separation_level_identical_endpoints(ladder):
    with pytest.raises(NetworkError, match="identical"):
        separation_level(ladder, EndPoint.LEFT, EndPoint.LEFT)


def test_separation_level_shift_invariant(ladder):
    # periodicity: shifting both endpoints by one column changes nothing
    assert separation_level(ladder, (0, "bottom"), (0, "top")) == separation_level(
        ladder, (1, "bottom"), (1, "top")
    )
    assert separation_level(ladder, (0, "bottom"), (2, "bottom")) == separation_level(
        ladder, (-1, "bottom"), (1, "bottom")
    )


def test_truncation_cut_shift_periodicity(ladder):
    # shifting a window-interior cut by one period preserves capacity and
    # thinness status
    t = truncate(ladder, 4)
    net = t.network
    lam = all_pairs_connectivity(net)
    for k in (-2, -1, 0, 1):
        side = frozenset([t.apex_left]) | {
            t.vertex_id(i, p) for i in range(-4, k + 1) for p in ladder.pattern
        }
        shifted = frozenset([t.apex_left]) | {
            t.vertex_id(i, p) for i in range(-4, k + 2) for p in ladder.pattern
        }
        assert side_capacity(net, side) == side_capacity(net, shifted) == 2
        assert is_thin(net, net.cut(side), lam) == is_thin(net, net.cut(shifted), lam)


# -- flow certificates ---------------------------------------------------------------


def test_ladder_end_certificate(ladder):
    f = end_flow_certificate(ladder, EndPoint.LEFT, EndPoint.RIGHT, 4)
    net = truncate(ladder, 4).network
    assert verify_flow(net, f)
    assert f.value == 2


def test_ladder_vertex_certificate(ladder):
    f = end_flow_certificate(ladder, (0, "bottom"), (0, "top"), 3)
    net = truncate(ladder, 3).network
    assert verify_flow(net, f)
    assert f.value == 3


def test_fiveline_end_certificate(fiveline):
    f = end_flow_certificate(fiveline, EndPoint.LEFT, EndPoint.RIGHT, 3)
    net = truncate(fiveline, 3).network
    assert verify_flow(net, f)
    assert f.value == 5


def test_certificates_agree_across_windows(ladder):
    # the piecing condition: consecutive windows carry the same totals across
    # every shared column boundary
    for w in (3, 4):
        f = end_flow_certificate(ladder, EndPoint.LEFT, EndPoint.RIGHT, w)
        t = truncate(ladder, w)
        for k in (-2, -1, 0, 1):
            side = {t.apex_left} | {
                t.vertex_id(i, p) for i in range(-w, k + 1) for p in ladder.pattern
            }
            assert flow_value_across_cut(f, t.network.cut(side)) == 2


# -- windowed trees ---------------------------------------------------------------------


def test_ladder_t2_is_path(ladder):
    T = windowed_tree(ladder, 2, 4)
    degrees = sorted(T.degree(n) for n in T.nodes)
    assert degrees[-1] == 2 and degrees.count(1) == 2  # a path
    assert len(end_surrogate_nodes(T)) == 2
    # both ends map to the extreme path nodes
    surr = end_surrogate_nodes(T)
    assert all(T.degree(n) == 1 for n in surr)


def test_ladder_t3_columns_carry_two_leaves(ladder):
    T = windowed_tree(ladder, 3, 4)
    # central chain nodes carry the two per-column vertex leaves
    leaf_parents = {}
    for a, b, side, cap in T.edges:
        if cap == 3 and len(side) == 1:
            leaf_parents.setdefault(b, 0)
            leaf_parents[b] += 1
    assert leaf_parents and all(cnt == 2 for cnt in leaf_parents.values())


def test_fiveline_t3_degree_grows_with_window(fiveline):
    degs = []
    for w in (3, 4, 5):
        T = windowed_tree(fiveline, 3, w)
        degs.append(max(T.degree(n) for n in T.nodes))
    assert degs[0] < degs[1] < degs[2]


def test_windowed_tree_validation(ladder):
    with pytest.raises(NetworkError):
        windowed_tree(ladder, 0, 3)
    with pytest.raises(NetworkError):
        windowed_tree(ladder, 3, 2)


def test_window_stability_of_interior_cut_family(ladder):
    # cuts of the windowed system whose coboundary sits inside a fixed
    # central region are the same family at widths w and w+1
    def interior_signature(S, n, w, region_cols):
        T = windowed_tree(S, n, w)
        t = truncate(S, w)
        inner = {f"{i}/{p}" for i in region_cols for p in S.pattern}
        left_col = {f"{min(region_cols) - 1}/{p}" for p in S.pattern}
        sigs = set()
        for _a, _b, side, cap in T.edges:
            crossing_inside = all(
                x in inner and y in inner
                for (x, y) in t.network.cap
                if (x in side) != (y in side)
            )
            if crossing_inside:
                sigs.add((frozenset(side & inner), bool(left_col <= side), cap))
        return sigs

    for n, w in ((2, 6), (3, 9)):
        region = range(-(w - n), (w - n) + 1)
        assert interior_signature(ladder, n, w, region) == interior_signature(
            ladder, n, w + 1, region
        )


# -- construction & serialization ----------------------------------------------------------


def test_strip_json_roundtrip(ladder):
    again = load_strip_json(json.dumps(strip_to_json(ladder)))
    assert again.pattern == ladder.pattern
    assert again.internal == ladder.internal
    assert again.forward == ladder.forward


def test_strip_rejects_two_rails_without_rungs():
    with pytest.raises(NetworkError, match="disconnected"):
        StripNetwork(["a", "b"], [], [("a", "a", 1), ("b", "b", 1)])


def test_strip_rejects_domino_matching():
    # forward (a,b) only: the strip decomposes into disjoint dominoes
    with pytest.raises(NetworkError, match="disconnected"):
        StripNetwork(["a", "b"], [], [("a", "b", 1)])


def test_strip_rejects_no_forward():
    with pytest.raises(NetworkError, match="forward"):
        StripNetwork(["a", "b"], [("a", "b", 1)], [])


def test_strip_validation_errors():
    with pytest.raises(NetworkError, match="duplicate"):
        StripNetwork(["a", "a"], [], [("a", "a", 1)])
    with pytest.raises(NetworkError, match="unknown"):
        StripNetwork(["a"], [], [("a", "b", 1)])
    with pytest.raises(NetworkError, match="positive integer"):
        StripNetwork(["a"], [], [("a", "a", 0)])


def test_parse_strip_endpoint():
    assert parse_strip_endpoint("end:left") is EndPoint.LEFT
    assert parse_strip_endpoint("end:right") is EndPoint.RIGHT
    assert parse_strip_endpoint("col:-2/top") == (-2, "top")
    with pytest.raises(NetworkError, match="bad endpoint"):
        parse_strip_endpoint("somewhere")
    with pytest.raises(NetworkError, match="bad endpoint"):
        parse_strip_endpoint("col:x/top")
