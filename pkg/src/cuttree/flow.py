"""Max-flow by augmenting paths, canonical extremal min-cuts, verification.

The search is breadth-first (shortest augmenting path) with saturating
augmentation; the final value is the min-cut capacity either way, and the
extremal cuts recovered from the residual graph are flow-independent:

* ``min_cut_smallest(s, t)``: vertices residual-reachable from ``s`` -- the
  unique inclusion-smallest minimum cut containing ``s``;
* ``min_cut_largest(s, t)``: complement of the set that residual-reaches
  ``t`` -- the unique inclusion-largest minimum cut containing ``s``.

Distinct calls on a shared immutable network may run concurrently; nothing
here mutates the network.
"""

from __future__ import annotations

import weakref
from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .netcore import Cut, Edge, Network, NetworkError, Vertex, canonical_edge, iter_pairs


@dataclass(frozen=True)
class FlowAssignment:
    """An (s, t)-flow: per-edge magnitudes plus orientations where nonzero.

    ``flow`` maps canonical edges to nonnegative magnitudes; ``orient`` maps
    edges with nonzero flow to their (tail, head) direction.  Zero-flow edges
    carry no orientation and are never serialized.
    """

    source: Vertex
    sink: Vertex
    flow: Mapping[Edge, int]
    orient: Mapping[Edge, tuple[Vertex, Vertex]]

    @property
    def value(self) -> int:
        out_s = sum(f for e, f in self.flow.items() if f and self.orient[e][0] == self.source)
        in_s = sum(f for e, f in self.flow.items() if f and self.orient[e][1] == self.source)
        return abs(out_s - in_s)


class ConnectivityTable:
    """lambda(u, v): the minimum capacity of a cut separating each pair."""

    def __init__(self, table: Mapping[tuple[Vertex, Vertex], int]):
        self._table = {canonical_edge(u, v): int(x) for (u, v), x in table.items()}

    def value(self, u: Vertex, v: Vertex) -> int:
        if u == v:
            raise NetworkError("identical endpoints")
        return self._table[canonical_edge(u, v)]

    def items(self):
        return sorted(self._table.items())

    def max_value(self) -> int:
        return max(self._table.values())

    def __len__(self) -> int:
        return len(self._table)


def _residual_network(net: Network) -> tuple[dict, dict]:
    res = {}
    for (u, v), c in net.cap.items():
        res[(u, v)] = c
        res[(v, u)] = c
    return res, {v: net.neighbors(v) for v in net.vertices}


def _bfs_augment(res: dict, adj: dict, s: Vertex, t: Vertex) -> list[tuple[Vertex, Vertex]] | None:
    parent: dict[Vertex, Vertex | None] = {s: None}
    q = deque([s])
    while q:
        x = q.popleft()
        if x == t:
            break
        for y in adj[x]:
            if y not in parent and res[(x, y)] > 0:
                parent[y] = x
                q.append(y)
    if t not in parent:
        return None
    path = []
    y = t
    while parent[y] is not None:
        path.append((parent[y], y))
        y = parent[y]
    path.reverse()
    return path


def _run_max_flow(net: Network, s: Vertex, t: Vertex) -> tuple[dict, dict, int]:
    """Returns (residual, adjacency, value) after termination."""
    if s == t:
        raise NetworkError("identical endpoints")
    if s not in net or t not in net:
        missing = s if s not in net else t
        raise NetworkError(f"unknown vertex {missing!r}")
    res, adj = _residual_network(net)
    value = 0
    while True:
        path = _bfs_augment(res, adj, s, t)
        if path is None:
            return res, adj, value
        bottleneck = min(res[arc] for arc in path)
        for u, v in path:
            res[(u, v)] -= bottleneck
            res[(v, u)] += bottleneck
        value += bottleneck


def _assignment_from_residual(net: Network, res: dict, s: Vertex, t: Vertex) -> FlowAssignment:
    flow: dict[Edge, int] = {}
    orient: dict[Edge, tuple[Vertex, Vertex]] = {}
    for (u, v), c in net.cap.items():
        net_uv = c - res[(u, v)]  # positive means flow u -> v
        if net_uv > 0:
            flow[(u, v)] = net_uv
            orient[(u, v)] = (u, v)
        elif net_uv < 0:
            flow[(u, v)] = -net_uv
            orient[(u, v)] = (v, u)
        else:
            flow[(u, v)] = 0
    return FlowAssignment(source=s, sink=t, flow=flow, orient=orient)


def max_flow(net: Network, s: Vertex, t: Vertex) -> tuple[FlowAssignment, int]:
    """A maximum (s, t)-flow and its value."""
    res, _, value = _run_max_flow(net, s, t)
    return _assignment_from_residual(net, res, s, t), value


def _reach_forward(res: dict, adj: dict, s: Vertex) -> set[Vertex]:
    seen = {s}
    q = deque([s])
    while q:
        x = q.popleft()
        for y in adj[x]:
            if y not in seen and res[(x, y)] > 0:
                seen.add(y)
                q.append(y)
    return seen


def min_cut_smallest(net: Network, s: Vertex, t: Vertex) -> Cut:
    """The inclusion-smallest minimum (s, t)-cut, as the side containing s.

    Independent of which maximum flow the search found.
    """
    res, adj, _ = _run_max_flow(net, s, t)
    return Cut(net, _reach_forward(res, adj, s))


def min_cut_largest(net: Network, s: Vertex, t: Vertex) -> Cut:
    """The inclusion-largest minimum (s, t)-cut containing s.

    Complement of the residual reverse-reachability region of ``t``.
    """
    res, adj, _ = _run_max_flow(net, s, t)
    reach_t = {t}
    q = deque([t])
    while q:
        y = q.popleft()
        for x in adj[y]:
            if x not in reach_t and res[(x, y)] > 0:
                reach_t.add(x)
                q.append(x)
    return Cut(net, set(net.vertices) - reach_t)


def flow_violations(net: Network, f: FlowAssignment) -> list[str]:
    """Human-readable list of capacity/conservation violations (empty if valid)."""
    problems = []
    excess: dict[Vertex, int] = {v: 0 for v in net.vertices}
    for e, mag in f.flow.items():
        if e not in net.cap:
            problems.append(f"flow on unknown edge {e}")
            continue
        if mag < 0:
            problems.append(f"negative flow on {e}")
        if mag > net.cap[e]:
            problems.append(f"flow {mag} exceeds capacity {net.cap[e]} on {e}")
        if mag:
            tail, head = f.orient[e]
            if canonical_edge(tail, head) != e:
                problems.append(f"orientation {f.orient[e]} does not match edge {e}")
                continue
            excess[tail] -= mag
            excess[head] += mag
    for v in net.vertices:
        if v in (f.source, f.sink):
            continue
        if excess[v] != 0:
            problems.append(f"conservation fails at {v!r} (net inflow {excess[v]})")
    return problems


def verify_flow(net: Network, f: FlowAssignment) -> bool:
    """True iff the capacity and conservation constraints hold."""
    return not flow_violations(net, f)


def flow_value_across_cut(f: FlowAssignment, A: Cut) -> int:
    """f+(A) - f-(A) for a cut separating source and sink with the source inside.

    Equal for every such cut (it is the flow value).
    """
    side = A.side
    if f.source not in side or f.sink in side:
        raise NetworkError("non-separating cut")
    total = 0
    for e, mag in f.flow.items():
        if not mag:
            continue
        tail, head = f.orient[e]
        if (tail in side) != (head in side):
            total += mag if tail in side else -mag
    return total


_LAMBDA_CACHE: "weakref.WeakKeyDictionary[Network, ConnectivityTable]" = weakref.WeakKeyDictionary()


def all_pairs_connectivity(net: Network, use_cache: bool = True) -> ConnectivityTable:
    """lambda(u, v) for every vertex pair, by one max-flow per pair.

    Results are cached per network; pass ``use_cache=False`` to force
    recomputation.  Per-pair computations are independent and are merged in
    canonical vertex order.
    """
    if use_cache and net in _LAMBDA_CACHE:
        return _LAMBDA_CACHE[net]
    table = {}
    for u, v in iter_pairs(net):
        table[(u, v)] = _run_max_flow(net, u, v)[2]
    out = ConnectivityTable(table)
    if use_cache:
        _LAMBDA_CACHE[net] = out
    return out


def flow_to_json(f: FlowAssignment) -> dict:
    """Flow emission format: direction u -> v, nonzero edges only."""
    edges = []
    for e in sorted(f.flow):
        if f.flow[e]:
            tail, head = f.orient[e]
            edges.append({"u": tail, "v": head, "flow": f.flow[e]})
    return {"value": f.value, "edges": edges}


def min_cut_family(net: Network, s: Vertex, t: Vertex, limit: int = 50000) -> list[frozenset]:
    """All s-sides of minimum (s, t)-cuts.

    Minimum cuts are exactly the residual-closed vertex sets containing s and
    avoiding t, i.e. unions of strongly connected components of the residual
    graph that are closed under residual reachability.  The family is
    enumerated from the condensation DAG; ``limit`` bounds its size (it can
    be exponential on adversarial inputs) and overflowing it raises.
    """
    res, adj, _ = _run_max_flow(net, s, t)
    verts = list(net.vertices)
    arcs = {x: [y for y in adj[x] if res[(x, y)] > 0] for x in verts}

    # Kosaraju: finishing order on the residual digraph, then reverse sweep
    visited: set[Vertex] = set()
    order: list[Vertex] = []
    for x0 in verts:
        if x0 in visited:
            continue
        visited.add(x0)
        stack: list[tuple[Vertex, int]] = [(x0, 0)]
        while stack:
            node, i = stack.pop()
            if i < len(arcs[node]):
                stack.append((node, i + 1))
                y = arcs[node][i]
                if y not in visited:
                    visited.add(y)
                    stack.append((y, 0))
            else:
                order.append(node)
    rarcs: dict[Vertex, list[Vertex]] = {x: [] for x in verts}
    for x, ys in arcs.items():
        for y in ys:
            rarcs[y].append(x)
    comp: dict[Vertex, int] = {}
    ncomp = 0
    for x in reversed(order):
        if x in comp:
            continue
        comp[x] = ncomp
        stack2 = [x]
        while stack2:
            a = stack2.pop()
            for b in rarcs[a]:
                if b not in comp:
                    comp[b] = ncomp
                    stack2.append(b)
        ncomp += 1
    members: dict[int, list[Vertex]] = {c: [] for c in range(ncomp)}
    for x in verts:
        members[comp[x]].append(x)
    succ: dict[int, set[int]] = {c: set() for c in range(ncomp)}
    for x in verts:
        for y in arcs[x]:
            if comp[x] != comp[y]:
                succ[comp[x]].add(comp[y])

    desc: dict[int, set[int]] = {}
    for c in range(ncomp):
        seen = {c}
        stack3 = [c]
        while stack3:
            a = stack3.pop()
            for b in succ[a]:
                if b not in seen:
                    seen.add(b)
                    stack3.append(b)
        desc[c] = seen

    cs, ct = comp[s], comp[t]
    must = desc[cs]
    if ct in must:
        raise NetworkError("internal error: sink residual-reachable after max flow")
    free = [c for c in range(ncomp) if c not in must and ct not in desc[c]]

    # topological order of the condensation restricted to free comps
    indeg = {c: 0 for c in free}
    fset = set(free)
    for c in free:
        for d in succ[c]:
            if d in fset:
                indeg[d] += 1
    topo: list[int] = []
    ready = sorted(c for c in free if indeg[c] == 0)
    while ready:
        c = ready.pop(0)
        topo.append(c)
        added = []
        for d in succ[c]:
            if d in fset:
                indeg[d] -= 1
                if indeg[d] == 0:
                    added.append(d)
        ready = sorted(ready + added)
    sinks_first = list(reversed(topo))

    sides: list[frozenset] = []
    chosen: set[int] = set()

    def emit():
        group = must | chosen
        sides.append(frozenset(x for c in group for x in members[c]))
        if len(sides) > limit:
            raise NetworkError(
                f"minimum-cut family of ({s},{t}) exceeds the enumeration limit {limit}"
            )

    def rec(i: int):
        if i == len(sinks_first):
            emit()
            return
        c = sinks_first[i]
        rec(i + 1)  # c stays out
        if all(d in chosen or d in must for d in succ[c]):
            chosen.add(c)
            rec(i + 1)
            chosen.remove(c)

    rec(0)
    return sorted(sides, key=lambda sd: (len(sd), tuple(sorted(sd))))


# -- low-level residual max-flow on an arbitrary capacity dict --------------
#
# Used by the structure layer to answer constrained (contracted) min-cut
# queries without materializing a Network (contraction may create parallel
# edges, which we fold by summation here).

def max_flow_capdict(cap: Mapping[tuple, int], s, t) -> tuple[int, set]:
    """Max-flow value and the residual-reachable source set on a symmetric
    capacity dict (keys are ordered pairs, both directions present)."""
    res = dict(cap)
    adj: dict = {}
    for (u, v) in cap:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    adj = {x: tuple(sorted(ys)) for x, ys in adj.items()}
    if s not in adj or t not in adj:
        raise NetworkError("endpoint missing from contracted graph")
    value = 0
    while True:
        path = _bfs_augment(res, adj, s, t)
        if path is None:
            break
        b = min(res[arc] for arc in path)
        for u, v in path:
            res[(u, v)] -= b
            res[(v, u)] += b
        value += b
    return value, _reach_forward(res, adj, s)
