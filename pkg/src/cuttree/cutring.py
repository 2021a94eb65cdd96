"""The Boolean-ring layer: exhaustive cut oracle, ring membership, thinness,
crossing counts, tight-cut enumeration and uncrossing.

Ring membership is decided by the pairwise criterion: a cut A lies in the
ring generated by the cuts of capacity <= m iff every pair (u, v) with
u in A, v in A* admits a separating cut of capacity <= m, i.e.
lambda(u, v) <= m.  That makes membership a polynomial test instead of a
symbolic ring computation, and it makes thinness concrete: A is thin iff
some pair across it has lambda(u, v) = c(A).
"""

from __future__ import annotations

import os
import weakref
from collections import deque
from typing import Iterable, Iterator

import numpy as np

from .netcore import (
    Cut,
    Edge,
    Network,
    NetworkError,
    Vertex,
    canonical_edge,
    capacity,
    corners,
    is_nested,
    is_tight,
    side_capacity,
    sides_nested,
)
from .flow import ConnectivityTable, all_pairs_connectivity

DEFAULT_ORACLE_LIMIT = 16
ORACLE_LIMIT_ENV = "CUTTREE_ORACLE_LIMIT"


class OracleLimitError(NetworkError):
    """The exhaustive oracle was asked for more vertices than its cap."""


def oracle_limit() -> int:
    raw = os.environ.get(ORACLE_LIMIT_ENV)
    if raw is None:
        return DEFAULT_ORACLE_LIMIT
    try:
        return int(raw)
    except ValueError as exc:
        raise NetworkError(f"{ORACLE_LIMIT_ENV} must be an integer, got {raw!r}") from exc


class CutFamily:
    """An ordered, duplicate-free collection of cuts with optional level tags.

    Iteration order is the canonical sort of the cut sides, so any two runs
    produce identical families.
    """

    def __init__(self, net: Network, members: Iterable[Cut] = (), levels: dict | None = None):
        self.network = net
        seen: dict[frozenset, Cut] = {}
        for m in members:
            if m.network is not net:
                raise NetworkError("cut from a different network")
            seen.setdefault(m.side, m)
        self._members = tuple(seen[s] for s in sorted(seen, key=lambda s: tuple(sorted(s))))
        self.levels = dict(levels) if levels else {}

    @property
    def members(self) -> tuple[Cut, ...]:
        return self._members

    def sides(self) -> tuple[frozenset, ...]:
        return tuple(m.side for m in self._members)

    def __len__(self) -> int:
        return len(self._members)

    def __iter__(self) -> Iterator[Cut]:
        return iter(self._members)

    def __contains__(self, cut: Cut) -> bool:
        return any(cut.side == m.side for m in self._members)


def _mask_capacities(net: Network) -> np.ndarray:
    """capacity of every vertex-subset bitmask, indexed by mask (numpy)."""
    n = len(net.vertices)
    masks = np.arange(1 << n, dtype=np.int64)
    caps = np.zeros(1 << n, dtype=np.int64)
    for (u, v), c in sorted(net.cap.items()):
        iu, iv = net.index(u), net.index(v)
        caps += c * (((masks >> iu) ^ (masks >> iv)) & 1)
    return caps


def _mask_to_side(net: Network, mask: int) -> frozenset:
    return frozenset(v for i, v in enumerate(net.vertices) if (mask >> i) & 1)


def enumerate_all_cuts(net: Network, max_vertices: int | None = None) -> CutFamily:
    """Every one of the 2^|V| - 2 cuts, with its capacity as level tag.

    Refuses networks larger than the oracle cap (default 16 vertices,
    overridable via the CUTTREE_ORACLE_LIMIT environment variable or the
    ``max_vertices`` argument).
    """
    cap = oracle_limit() if max_vertices is None else max_vertices
    n = len(net.vertices)
    if n > cap:
        raise OracleLimitError(f"oracle limit exceeded: {n} vertices > cap {cap}")
    caps = _mask_capacities(net)
    cuts = []
    levels = {}
    for mask in range(1, (1 << n) - 1):
        c = Cut(net, _mask_to_side(net, mask))
        cuts.append(c)
        levels[c.side] = int(caps[mask])
    return CutFamily(net, cuts, levels)


def in_ring(net: Network, A: Cut, m: int, lam: ConnectivityTable | None = None) -> bool:
    """Whether A lies in the ring generated by the cuts of capacity <= m."""
    lam = lam or all_pairs_connectivity(net)
    other = set(net.vertices) - A.side
    return all(lam.value(u, v) <= m for u in A.side for v in other)


def is_thin(net: Network, A: Cut, lam: ConnectivityTable | None = None) -> bool:
    """Whether some pair across A has lambda equal to c(A).

    Equivalently: c(A) = n and A is outside the ring generated below n.
    """
    lam = lam or all_pairs_connectivity(net)
    cap = capacity(net, A)
    other = set(net.vertices) - A.side
    return any(lam.value(u, v) == cap for u in A.side for v in other)


def crossing_count(A: Cut, family: CutFamily) -> int:
    """Number of family members not nested with A (the paper's mu)."""
    universe = frozenset(A.network.vertices)
    return sum(1 for m in family if not sides_nested(A.side, m.side, universe))


def count_min_cuts(net: Network, s: Vertex, t: Vertex, max_vertices: int | None = None) -> tuple[int, int]:
    """Exhaustively count minimum (s, t)-cuts.

    Returns (min capacity, number of minimum separating partitions); each
    partition {A, A*} is counted once.  Subject to the oracle vertex cap.
    """
    cap = oracle_limit() if max_vertices is None else max_vertices
    n = len(net.vertices)
    if n > cap:
        raise OracleLimitError(f"oracle limit exceeded: {n} vertices > cap {cap}")
    if s == t or s not in net or t not in net:
        raise NetworkError("bad endpoints")
    caps = _mask_capacities(net)
    masks = np.arange(1 << n, dtype=np.int64)
    keep = (((masks >> net.index(s)) & 1) == 1) & (((masks >> net.index(t)) & 1) == 0)
    vals = caps[keep]
    best = int(vals.min())
    return best, int((vals == best).sum())


def min_cut_value_oracle(net: Network, s: Vertex, t: Vertex, max_vertices: int | None = None) -> int:
    """Exhaustive minimum over all separating cuts (the MFMC ground truth)."""
    return count_min_cuts(net, s, t, max_vertices)[0]


# ---------------------------------------------------------------------------
# tight-cut enumeration through a fixed edge

_TIGHT_MEMO: "weakref.WeakKeyDictionary[Network, dict]" = weakref.WeakKeyDictionary()


def _components(adj: dict, verts: set) -> list[set]:
    out = []
    left = set(verts)
    while left:
        start = left.pop()
        comp = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj.get(x, ()):
                if y in left:
                    left.discard(y)
                    comp.add(y)
                    stack.append(y)
        out.append(comp)
    return out


def _find_path(adj: dict, x: Vertex, y: Vertex) -> list[Edge] | None:
    parent = {x: None}
    q = deque([x])
    while q:
        a = q.popleft()
        if a == y:
            break
        for b in sorted(adj.get(a, ())):
            if b not in parent:
                parent[b] = a
                q.append(b)
    if y not in parent:
        return None
    path = []
    b = y
    while parent[b] is not None:
        path.append(canonical_edge(parent[b], b))
        b = parent[b]
    path.reverse()
    return path


def _tight_recurse(net: Network, removed: frozenset, e: Edge, k: int, memo: dict) -> frozenset:
    """Candidate x-sides for cuts through ``e`` of capacity k in net minus
    ``removed``, following the path-branching recursion.  Overgenerates; the
    caller filters against the original network."""
    key = (removed, e, k)
    if key in memo:
        return memo[key]
    ce = net.cap[e]
    if ce > k:
        memo[key] = frozenset()
        return frozenset()
    live = [ed for ed in net.edges if ed not in removed and ed != e]
    adj: dict[Vertex, set] = {}
    for u, v in live:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    x, y = e
    path = _find_path(adj, x, y)
    if path is None:
        # e is a bridge of the current subgraph: the only cut through it with
        # coboundary {e} is the component of x, at capacity c(e).
        side = next(c for c in _components(adj, set(net.vertices)) if x in c)
        result = frozenset([frozenset(side)]) if ce == k else frozenset()
        memo[key] = result
        return result
    if ce == k:
        memo[key] = frozenset()
        return frozenset()
    out = set()
    sub_removed = removed | {e}
    for e2 in path:
        for side in _tight_recurse(net, sub_removed, e2, k - ce, memo):
            if (x in side) != (y in side):
                out.add(side if x in side else frozenset(net.vertices) - side)
    result = frozenset(out)
    memo[key] = result
    return result


def tight_cuts_through_edge(net: Network, e: tuple[Vertex, Vertex], k: int) -> CutFamily:
    """All tight cuts of capacity exactly k whose coboundary contains ``e``.

    Finite by the path-branching argument; both sides of each partition are
    returned.  Memoized per network.
    """
    e = canonical_edge(*e)
    if e not in net.cap:
        raise NetworkError(f"unknown edge {e}")
    if k < 1:
        raise NetworkError("k must be >= 1")
    memo = _TIGHT_MEMO.setdefault(net, {})
    candidates = _tight_recurse(net, frozenset(), e, k, memo)
    results = []
    for side in candidates:
        if not side or len(side) == len(net.vertices):
            continue
        cut = Cut(net, side)
        if side_capacity(net, side) == k and is_tight(net, cut) and (e[0] in side) != (e[1] in side):
            results.append(cut)
            results.append(cut.complement())
    return CutFamily(net, results)


# ---------------------------------------------------------------------------
# uncrossing

def uncross(net: Network, A: Cut, B: Cut) -> tuple[Cut, Cut]:
    """Resolve two crossing thin cuts into the nested pair of opposite
    corners guaranteed thin, with capacities (c(A), c(B)).

    The relabeling (A <-> A*, B <-> B*) follows a fixed case order -- first
    force a <= b and c <= d, then the a < b, e != 0, f != 0 and e = f = 0
    branches -- so the output is canonical.
    """
    if is_nested(A, B):
        raise NetworkError("already nested")
    lam = all_pairs_connectivity(net)
    if not is_thin(net, A, lam) or not is_thin(net, B, lam):
        raise NetworkError("requires thin cuts")
    swapped = capacity(net, A) > capacity(net, B)
    P, Q = (B, A) if swapped else (A, B)
    m, n = capacity(net, P), capacity(net, Q)

    cd = corners(net, P, Q)
    if cd.a > cd.b:
        Q = Q.complement()
        cd = corners(net, P, Q)
    if cd.c > cd.d:
        P = P.complement()
        cd = corners(net, P, Q)
    if cd.a != cd.c:
        raise NetworkError("corner counts contradict thinness of the inputs")

    sp, sq = P.side, Q.side
    vall = frozenset(net.vertices)

    def cut_of(side: frozenset) -> Cut:
        return Cut(net, side)

    pq = sp & sq
    pq_, p_q = sp - sq, sq - sp
    p_q_ = vall - (sp | sq)
    if cd.a < cd.b or (cd.a == cd.b and cd.e != 0):
        pair = (cut_of(pq_), cut_of(p_q))  # (P&Q*, P*&Q), caps (m, n)
    elif cd.f != 0:
        pair = (cut_of(pq), cut_of(p_q_))  # (P&Q, P*&Q*), caps (m, n)
    else:
        cand = (cut_of(pq_), cut_of(p_q))
        if is_thin(net, cand[0], lam) and is_thin(net, cand[1], lam):
            pair = cand
        else:
            pair = (cut_of(pq), cut_of(p_q_))

    if capacity(net, pair[0]) != m or capacity(net, pair[1]) != n:
        raise NetworkError("uncross produced corners with unexpected capacities")
    if not (is_thin(net, pair[0], lam) and is_thin(net, pair[1], lam)):
        raise NetworkError("uncross produced a non-thin corner")
    return (pair[1], pair[0]) if swapped else pair


def oracle_dump(net: Network, max_vertices: int | None = None) -> list[dict]:
    """Test-fixture dump: every cut with capacity, thinness and tightness."""
    lam = all_pairs_connectivity(net)
    fam = enumerate_all_cuts(net, max_vertices)
    out = []
    for cut in fam:
        out.append(
            {
                "side": list(cut.sorted_side()),
                "capacity": fam.levels[cut.side],
                "thin": is_thin(net, cut, lam),
                "tight": is_tight(net, cut),
            }
        )
    return out
