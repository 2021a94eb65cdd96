"""Structure trees from nested cut systems.

``tree_from_nested`` realizes a complement-closed nested family of cuts as
the directed edge set of a tree whose vertices are orientation maps, together
with the map ``nu`` taking each network vertex to the tree node its cut
memberships select.

``level_up`` performs one step of the canonical induction: among the
capacity-n thin cuts nested with the previous system, every vertex pair
first separated at capacity n keeps its *optimally nested* separators --
those whose crossing count against the whole admissible family is minimal.
The union of these over all pending pairs is nested (this is the
crossing-count argument the uniqueness of the tree rests on), it generates
everything of capacity <= n, and it involves no choices, so the resulting
tree is invariant under network automorphisms.  ``build_canonical_tree``
iterates the levels and checks the flow-equality contract (tree geodesic
bottleneck == pairwise min-cut value) before returning.

A per-pair inclusion-smallest separator family is NOT nested in general
(a four-vertex counterexample lives in the test suite), which is why the
crossing-count minimization is load-bearing and not an optimization.

The fast path avoids enumerating the admissible family: for each pending
pair it computes the two flow-extremal separators (residual-smallest from
each endpoint, with crossings against previous members repaired by
swallowing the far side under a contracted min-cut) and minimizes the
crossing count within that candidate family.  The oracle mode minimizes
over the fully enumerated family; the verification suite holds the two
modes equal on every instance it can enumerate.
"""

from __future__ import annotations

import json
from collections import deque
from typing import Iterable, Mapping

from .netcore import (
    Cut,
    Network,
    NetworkError,
    Vertex,
    canonical_edge,
    is_tight,
    iter_pairs,
    side_capacity,
    sides_nested,
)
from .flow import (
    ConnectivityTable,
    all_pairs_connectivity,
    min_cut_family,
)
from . import cutring


class StructureError(NetworkError):
    """The canonical construction violated one of its proof obligations."""


def _side_key(side: frozenset) -> tuple:
    return (len(side), tuple(sorted(side)))


class NestedSystem:
    """A complement-closed, pairwise nested family of cuts with level tags."""

    def __init__(self, net: Network, sides: Iterable[frozenset], levels: Mapping[frozenset, int]):
        self.network = net
        universe = frozenset(net.vertices)
        family = {frozenset(s) for s in sides}
        for s in family:
            if not s or s == universe:
                raise NetworkError("nested system contains an improper side")
            if universe - s not in family:
                raise NetworkError(f"nested system not complement-closed at {sorted(s)}")
        ordered = sorted(family, key=_side_key)
        for i, s in enumerate(ordered):
            for t in ordered[i + 1 :]:
                if not sides_nested(s, t, universe):
                    raise StructureError(f"system is not nested: {sorted(s)} crosses {sorted(t)}")
        self.sides: tuple[frozenset, ...] = tuple(ordered)
        self._side_set = family
        self.level: dict[frozenset, int] = {}
        for s in family:
            if s not in levels:
                raise NetworkError(f"missing level tag for {sorted(s)}")
            self.level[s] = int(levels[s])
        self._check_finite_intervals()

    @classmethod
    def empty(cls, net: Network) -> "NestedSystem":
        return cls(net, (), {})

    def _check_finite_intervals(self) -> None:
        # Automatic for finite families; asserted for parity with the
        # infinite-graph contract.
        for s in self.sides:
            between = sum(1 for t in self.sides if s < t)
            if between >= len(self.sides) + 1:  # pragma: no cover - unreachable
                raise StructureError("finite interval condition violated")

    def separates(self, u: Vertex, v: Vertex) -> bool:
        return any((u in s) != (v in s) for s in self.sides)

    def partition_reps(self) -> tuple[frozenset, ...]:
        """One canonical side per complement pair, in deterministic order."""
        universe = frozenset(self.network.vertices)
        reps = {min(s, universe - s, key=_side_key) for s in self.sides}
        return tuple(sorted(reps, key=_side_key))

    def contains_side(self, side: frozenset) -> bool:
        return side in self._side_set

    def cuts(self) -> tuple[Cut, ...]:
        return tuple(Cut(self.network, s) for s in self.sides)

    def __len__(self) -> int:
        return len(self.sides)

    def extended(self, new_sides: Mapping[frozenset, int]) -> "NestedSystem":
        levels = dict(self.level)
        levels.update(new_sides)
        return NestedSystem(self.network, set(self.sides) | set(new_sides), levels)


class StructureTree:
    """Tree whose directed edges are the cuts of a nested system.

    ``edges`` are records (a, b, side, capacity): network vertices in
    ``side`` map into the component of node ``a`` when the edge is removed.
    Node ids are dense integers assigned by canonical traversal from the
    node containing the smallest vertex id, so equal systems yield
    byte-identical serializations.
    """

    def __init__(self, network, nodes, edges, nu, image_of):
        self.network = network
        self.nodes: tuple[int, ...] = tuple(nodes)
        self.edges: tuple[tuple[int, int, frozenset, int], ...] = tuple(edges)
        self.nu: dict[Vertex, int] = dict(nu)
        self.image_of: dict[int, tuple[Vertex, ...]] = {n: tuple(image_of.get(n, ())) for n in self.nodes}
        self._adj: dict[int, list[tuple[int, int]]] = {n: [] for n in self.nodes}
        for idx, (a, b, _side, _cap) in enumerate(self.edges):
            self._adj[a].append((idx, b))
            self._adj[b].append((idx, a))
        if len(self.edges) != max(len(self.nodes) - 1, 0):
            raise StructureError("edge count does not match a tree")

    def orientation(self, node: int) -> dict[frozenset, bool]:
        """The orientation map the node stands for: each cut of the system
        (given by both sides) mapped to whether the node lies on that side.

        Satisfies the defining conditions: a side and its complement never
        both hold, and a held side propagates to every superset side.
        """
        universe = (
            frozenset(self.network.vertices)
            if self.network is not None
            else frozenset(v for imgs in self.image_of.values() for v in imgs)
        )
        out: dict[frozenset, bool] = {}
        for idx, (_a, _b, side, _cap) in enumerate(self.edges):
            held = self._node_on_side(node, idx)
            out[side] = held
            out[universe - side] = not held
        return out

    def _node_on_side(self, node: int, edge_idx: int) -> bool:
        a = self.edges[edge_idx][0]
        seen = {a}
        stack = [a]
        while stack:
            x = stack.pop()
            for idx, y in self._adj[x]:
                if idx == edge_idx or y in seen:
                    continue
                seen.add(y)
                stack.append(y)
        return node in seen

    # -- queries ------------------------------------------------------------

    def degree(self, node: int) -> int:
        return len(self._adj[node])

    def non_image_nodes(self) -> tuple[int, ...]:
        return tuple(n for n in self.nodes if not self.image_of[n])

    def incident_capacities(self, node: int) -> tuple[int, ...]:
        return tuple(sorted(self.edges[i][3] for i, _ in self._adj[node]))

    def geodesic(self, a: int, b: int) -> list[int]:
        """Edge indices on the unique a-b path."""
        parent: dict[int, tuple[int, int] | None] = {a: None}
        q = deque([a])
        while q:
            x = q.popleft()
            if x == b:
                break
            for idx, y in self._adj[x]:
                if y not in parent:
                    parent[y] = (x, idx)
                    q.append(y)
        if b not in parent:
            raise StructureError("nodes not connected")
        path = []
        y = b
        while parent[y] is not None:
            x, idx = parent[y]
            path.append(idx)
            y = x
        path.reverse()
        return path

    def geodesic_min_capacity(self, a: int, b: int) -> int:
        path = self.geodesic(a, b)
        if not path:
            raise StructureError("empty geodesic")
        return min(self.edges[i][3] for i in path)

    def edge_partitions(self) -> set[frozenset]:
        """The canonical side of every tree edge (for set comparisons)."""
        return {e[2] for e in self.edges}

    # -- serialization -------------------------------------------------------

    def to_json_obj(self, end_surrogates: Iterable[int] = ()) -> dict:
        obj = {
            "nodes": [{"id": n, "image_of": list(self.image_of[n])} for n in self.nodes],
            "edges": [
                {"a": a, "b": b, "capacity": cap, "cut_side": sorted(side)}
                for a, b, side, cap in self.edges
            ],
        }
        surr = sorted(set(end_surrogates))
        if surr:
            obj["end_surrogates"] = surr
        return obj

    def to_json(self, **kw) -> str:
        return canonical_json(self.to_json_obj(**kw))

    def to_dot(self) -> str:
        lines = ["graph structure_tree {"]
        for n in self.nodes:
            imgs = self.image_of[n]
            if imgs:
                lines.append(f'  n{n} [label="{",".join(imgs)}"];')
            else:
                lines.append(f'  n{n} [label="", shape=point, width=0.15];')
        for a, b, _side, cap in self.edges:
            lines.append(f'  n{a} -- n{b} [label="{cap}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def canonical_json(obj) -> str:
    """Byte-stable canonical JSON used for all emitted artifacts."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def tree_from_json(data) -> StructureTree:
    """Rebuild a (network-less) StructureTree from its JSON emission."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    nodes = [n["id"] for n in data["nodes"]]
    image_of = {n["id"]: tuple(n["image_of"]) for n in data["nodes"]}
    nu = {v: n for n, imgs in image_of.items() for v in imgs}
    edges = [(e["a"], e["b"], frozenset(e["cut_side"]), e["capacity"]) for e in data["edges"]]
    return StructureTree(None, nodes, edges, nu, image_of)


# ---------------------------------------------------------------------------
# tree construction from a nested system


def tree_from_nested(net: Network, system: NestedSystem) -> StructureTree:
    """Realize a nested system as a tree with the orientation-map vertices.

    The node set is { iota(A) : A in system } deduplicated by assignment
    equality, where iota(A) assigns 1 to B iff A <= B or A* < B; each
    complement pair contributes one undirected edge.  ``nu`` sends a vertex
    to the orientation given by its memberships; it need not be injective
    (vertices unseparated by the system share a node) nor surjective.
    """
    universe = frozenset(net.vertices)
    sides = system.sides
    if not sides:
        nu = {v: 0 for v in net.vertices}
        return StructureTree(net, [0], [], nu, {0: tuple(net.vertices)})

    def iota(a: frozenset) -> frozenset:
        comp = universe - a
        return frozenset(b for b in sides if a <= b or comp < b)

    node_key: dict[frozenset, frozenset] = {}  # side -> its iota key
    for s in sides:
        node_key[s] = iota(s)

    # adjacency on orientation keys, one edge per complement pair
    reps = system.partition_reps()
    adj: dict[frozenset, dict] = {}
    for rep in reps:
        ka, kb = node_key[rep], node_key[universe - rep]
        adj.setdefault(ka, {})[rep] = kb
        adj.setdefault(kb, {})[rep] = ka

    def nu_key(v: Vertex) -> frozenset:
        return frozenset(b for b in sides if v in b)

    vertex_keys = {v: nu_key(v) for v in net.vertices}
    for v, k in vertex_keys.items():
        if k not in adj:
            raise StructureError(f"orientation of vertex {v!r} is not a tree node")

    # canonical ids: BFS from the node of the smallest vertex, neighbors in
    # canonical edge order
    root = vertex_keys[net.vertices[0]]
    order: dict[frozenset, int] = {root: 0}
    queue = [root]
    while queue:
        k = queue.pop(0)
        for rep in sorted(adj[k], key=_side_key):
            other = adj[k][rep]
            if other not in order:
                order[other] = len(order)
                queue.append(other)
    if len(order) != len(adj):
        raise StructureError("nested system did not produce a connected tree")

    edges = []
    for rep in reps:
        ka, kb = node_key[rep], node_key[universe - rep]
        # iota(rep) lies on the rep side of the edge
        edges.append((order[ka], order[kb], rep, system.level[rep]))
    edges.sort(key=lambda e: _side_key(e[2]))

    nu = {v: order[k] for v, k in vertex_keys.items()}
    image_of: dict[int, list] = {}
    for v in net.vertices:
        image_of.setdefault(nu[v], []).append(v)
    nodes = list(range(len(order)))
    return StructureTree(net, nodes, edges, nu, {n: tuple(sorted(vs)) for n, vs in image_of.items()})


def nu_map(net: Network, T: StructureTree) -> dict[Vertex, int]:
    """The vertex-to-node map of a built tree."""
    return dict(T.nu)


# ---------------------------------------------------------------------------
# the canonical level induction


class _OracleContext:
    """Exhaustive thin-cut enumeration shared across levels of one network."""

    def __init__(self, net: Network, lam: ConnectivityTable):
        fam = cutring.enumerate_all_cuts(net)
        self.net = net
        self.sides_by_cap: dict[int, list[frozenset]] = {}
        vs = net.vertices
        for cut in fam:
            cap = fam.levels[cut.side]
            side = cut.side
            other = [x for x in vs if x not in side]
            thin = any(lam.value(a, b) == cap for a in side for b in other)
            if thin:
                self.sides_by_cap.setdefault(cap, []).append(side)

    def candidates(self, n: int, prev: NestedSystem) -> list[frozenset]:
        universe = frozenset(self.net.vertices)
        reps = prev.partition_reps()
        return [
            s
            for s in self.sides_by_cap.get(n, [])
            if all(sides_nested(s, r, universe) for r in reps)
        ]


def _mu_table(sides: list[frozenset], universe: frozenset) -> dict[frozenset, int]:
    """Crossing count of each side against the whole collection."""
    mu = {}
    for s in sides:
        mu[s] = sum(1 for t in sides if not sides_nested(s, t, universe))
    return mu


def level_up(
    net: Network,
    prev: NestedSystem,
    n: int,
    lam: ConnectivityTable | None = None,
    mode: str = "fast",
    _oracle_ctx: _OracleContext | None = None,
) -> NestedSystem:
    """One induction level: extend ``prev`` so the result generates the ring
    of cuts of capacity <= n.

    Every pair with lambda(u, v) = n (exactly the pairs separated by a
    capacity-n thin cut but by nothing in ``prev``) contributes its optimally
    nested separators: among the admissible capacity-n thin cuts separating
    the pair, those of minimal crossing count, together with complements.
    The output is validated: complement-closed, nested, every new member
    thin and tight, and every pair with lambda <= n separated by some member.
    """
    if n < 1:
        raise NetworkError("level must be >= 1")
    if mode not in ("fast", "oracle"):
        raise NetworkError(f"unknown mode {mode!r}")
    lam = lam or all_pairs_connectivity(net)

    pending = [
        (u, v)
        for u, v in iter_pairs(net)
        if lam.value(u, v) == n and not prev.separates(u, v)
    ]

    ctx = _oracle_ctx
    if mode == "oracle" and ctx is None:
        ctx = _OracleContext(net, lam)

    universe = frozenset(net.vertices)
    new: dict[frozenset, int] = {}
    if mode == "oracle":
        family = ctx.candidates(n, prev)
        pair_seps = {
            (u, v): [s for s in family if (u in s) != (v in s)] for u, v in pending
        }
    else:
        # Every admissible capacity-n thin cut is a minimum cut of some
        # pending pair, so the union of the pairs' admissible minimum-cut
        # families is the whole family -- no exhaustive enumeration needed.
        reps = prev.partition_reps()
        family_set: set[frozenset] = set()
        pair_seps = {}
        for u, v in pending:
            sides = min_cut_family(net, u, v)
            admissible = [
                s for s in sides if all(sides_nested(s, r, universe) for r in reps)
            ]
            pair_seps[(u, v)] = admissible
            for s in admissible:
                family_set.add(s)
                family_set.add(universe - s)
        family = sorted(family_set, key=_side_key)

    mu = _mu_table(family, universe)
    for u, v in pending:
        seps = pair_seps[(u, v)]
        if not seps:
            raise StructureError(f"no admissible separator for ({u},{v}) at level {n}")
        best = min(mu[s] for s in seps)
        for s in seps:
            if mu[s] == best:
                if side_capacity(net, s) != n:
                    raise StructureError("separator capacity drifted from its level")
                new[s] = n
                new[universe - s] = n

    out = prev.extended(new)

    lam_pairs = [(u, v) for u, v in iter_pairs(net) if lam.value(u, v) <= n]
    for u, v in lam_pairs:
        if not out.separates(u, v):
            raise StructureError(f"level {n} system fails to separate ({u},{v})")
    for side in new:
        cut = Cut(net, side)
        if not cutring.is_thin(net, cut, lam):
            raise StructureError(f"added a non-thin member {sorted(side)}")
        if not is_tight(net, cut):
            raise StructureError(f"added a non-tight member {sorted(side)}")
    return out


def canonical_system(net: Network, lam: ConnectivityTable | None = None, mode: str = "fast") -> NestedSystem:
    """Run the induction through every level up to the largest lambda."""
    lam = lam or all_pairs_connectivity(net)
    system = NestedSystem.empty(net)
    ctx = _OracleContext(net, lam) if mode == "oracle" else None
    if len(net) < 2:
        return system
    for n in range(1, lam.max_value() + 1):
        if any(lam.value(u, v) == n for u, v in iter_pairs(net)):
            system = level_up(net, system, n, lam, mode=mode, _oracle_ctx=ctx)
    return system


def build_canonical_tree(net: Network, mode: str = "fast") -> StructureTree:
    """The uniquely determined structure tree of a network.

    Every tree edge carries the capacity of its cut; ``nu`` is injective; and
    for every vertex pair the minimum edge capacity on the nu-geodesic equals
    the pairwise min-cut value (checked before returning).
    """
    lam = all_pairs_connectivity(net)
    system = canonical_system(net, lam, mode=mode)
    T = tree_from_nested(net, system)
    seen = set()
    for v in net.vertices:
        if T.nu[v] in seen:
            raise StructureError("nu is not injective")
        seen.add(T.nu[v])
    verify_tree_flow_equality(net, T, lam)
    return T


def verify_tree_flow_equality(net: Network, T: StructureTree, lam: ConnectivityTable | None = None) -> None:
    """Check the flow-equality contract; raise StructureError on any pair."""
    lam = lam or all_pairs_connectivity(net)
    for u, v in iter_pairs(net):
        got = T.geodesic_min_capacity(T.nu[u], T.nu[v])
        want = lam.value(u, v)
        if got != want:
            raise StructureError(f"tree bottleneck for ({u},{v}) is {got}, expected {want}")


# ---------------------------------------------------------------------------
# Gomory-Hu extraction


def gomory_hu_extract(T: StructureTree) -> StructureTree:
    """Contract one edge at every non-image node until nu is bijective.

    At each non-image node the contracted edge is an incident edge of
    maximum capacity (so geodesic bottlenecks are preserved: any path through
    the node keeps its other incident edge, of no larger capacity); ties go
    to the edge whose far subtree contains the lexicographically smallest
    vertex.  The result is a Gomory-Hu tree; unlike the structure tree it
    depends on this (documented) choice and is not automorphism-canonical.
    """
    # mutable adjacency on current node ids
    adj: dict[int, dict[int, tuple[frozenset, int]]] = {n: {} for n in T.nodes}
    for a, b, side, cap in T.edges:
        adj[a][b] = (side, cap)
        adj[b][a] = (side, cap)
    image_of = {n: list(T.image_of[n]) for n in T.nodes}

    def far_component_min_vertex(start: int, banned: int) -> str:
        best = None
        stack = [start]
        seen = {banned, start}
        while stack:
            x = stack.pop()
            for v in image_of[x]:
                if best is None or v < best:
                    best = v
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if best is None:
            raise StructureError("subtree without image vertices")
        return best

    while True:
        hollow = sorted(n for n in adj if not image_of[n])
        if not hollow:
            break
        x = hollow[0]
        best_cap = max(cap for (_s, cap) in adj[x].values())
        ties = sorted(y for y, (_s, cap) in adj[x].items() if cap == best_cap)
        y = min(ties, key=lambda t: far_component_min_vertex(t, x))
        # merge x into y
        for z, rec in list(adj[x].items()):
            if z == y:
                continue
            if z in adj[y]:
                raise StructureError("contraction produced a multi-edge")
            adj[y][z] = rec
            adj[z][y] = rec
            del adj[z][x]
        del adj[y][x]
        del adj[x]
        image_of[y] = sorted(image_of[y] + image_of[x])
        del image_of[x]

    # renumber canonically: BFS from the node holding the smallest vertex
    nu = {v: n for n, vs in image_of.items() for v in vs}
    smallest = min(nu)
    order = {nu[smallest]: 0}
    queue = [nu[smallest]]
    while queue:
        k = queue.pop(0)
        for rep_key, ynode in sorted(
            ((_side_key(adj[k][y][0]), y) for y in adj[k]), key=lambda t: t[0]
        ):
            if ynode not in order:
                order[ynode] = len(order)
                queue.append(ynode)
    new_nu = {v: order[n] for v, n in nu.items()}

    def component_of(start: int, banned_edge: tuple[int, int]) -> set[int]:
        bp, bq = banned_edge
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if (x, y) in ((bp, bq), (bq, bp)):
                    continue
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    edges = []
    done = set()
    for p in adj:
        for q, (side, cap) in adj[p].items():
            if (q, p) in done or (p, q) in done:
                continue
            done.add((p, q))
            sample = min(side)
            side_node = next(n for n, vs in image_of.items() if sample in vs)
            p_comp = component_of(p, (p, q))
            a, b = (p, q) if side_node in p_comp else (q, p)
            edges.append((order[a], order[b], side, cap))
    edges.sort(key=lambda e: _side_key(e[2]))
    new_images = {order[n]: tuple(sorted(vs)) for n, vs in image_of.items()}
    return StructureTree(T.network, sorted(order.values()), edges, new_nu, new_images)


# ---------------------------------------------------------------------------
# automorphism invariance


def check_automorphism_invariance(net: Network, perm: Mapping[Vertex, Vertex], E: NestedSystem) -> bool:
    """Whether the system is setwise invariant under a network automorphism.

    ``perm`` must be a capacity-preserving graph automorphism; anything else
    raises with "not an automorphism".
    """
    if set(perm) != set(net.vertices) or set(perm.values()) != set(net.vertices):
        raise NetworkError("not an automorphism")
    for (u, v), c in net.cap.items():
        img = canonical_edge(perm[u], perm[v])
        if img not in net.cap or net.cap[img] != c:
            raise NetworkError("not an automorphism")
    mapped = {frozenset(perm[x] for x in side) for side in E.sides}
    return mapped == set(E.sides)
