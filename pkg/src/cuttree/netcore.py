"""Network and cut primitives.

A network is a finite simple connected graph with positive integer edge
capacities.  A cut is a nonempty proper vertex subset ``A``; its coboundary
is the set of edges with exactly one endpoint in ``A``, and its capacity is
the capacity sum over the coboundary.  Everything downstream (flows, the
Boolean-ring layer, structure trees) is built on these two notions.

All values are immutable after construction and every operation here is a
pure function, so they are safe to evaluate concurrently over a shared
network.  Iteration order over vertices, edges and cut encodings is always
the sorted canonical order, which is what makes the structure-tree output
deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

Vertex = str
Edge = tuple[Vertex, Vertex]


class NetworkError(ValueError):
    """Input data violates a network invariant (loops, disconnection, ...)."""


def canonical_edge(u: Vertex, v: Vertex) -> Edge:
    """The unordered edge {u, v} in its canonical (sorted) encoding."""
    return (u, v) if u <= v else (v, u)


class Network:
    """Finite simple connected graph with integer capacities >= 1.

    Vertices are strings; edges are stored as sorted pairs.  The constructor
    rejects loops, parallel edges, non-positive or non-integer capacities and
    disconnected graphs with a diagnostic.
    """

    __slots__ = ("vertices", "edges", "cap", "_adj", "_vindex", "__weakref__")

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[tuple[Vertex, Vertex, int]]):
        vseq = [str(v) for v in vertices]
        if len(set(vseq)) != len(vseq):
            raise NetworkError("duplicate vertex ids")
        self.vertices: tuple[Vertex, ...] = tuple(sorted(vseq))
        vset = set(self.vertices)
        cap: dict[Edge, int] = {}
        for u, v, c in edges:
            u, v = str(u), str(v)
            if u == v:
                raise NetworkError(f"loop at vertex {u!r}")
            if u not in vset or v not in vset:
                raise NetworkError(f"edge ({u!r}, {v!r}) uses unknown vertex")
            if not isinstance(c, int) or isinstance(c, bool) or c < 1:
                raise NetworkError(f"capacity of edge ({u!r}, {v!r}) must be a positive integer, got {c!r}")
            e = canonical_edge(u, v)
            if e in cap:
                raise NetworkError(f"parallel edge ({u!r}, {v!r})")
            cap[e] = c
        self.edges: tuple[Edge, ...] = tuple(sorted(cap))
        self.cap: Mapping[Edge, int] = dict(cap)
        adj: dict[Vertex, list[Vertex]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self._adj = {v: tuple(sorted(ns)) for v, ns in adj.items()}
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        if not self.vertices:
            raise NetworkError("empty vertex set")
        if not self._connected(set(self.vertices)):
            raise NetworkError("graph is not connected")

    def _connected(self, sub: set[Vertex]) -> bool:
        """Whether the subgraph induced on ``sub`` is connected (sub nonempty)."""
        start = next(iter(sub))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in self._adj[x]:
                if y in sub and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(sub)

    def neighbors(self, v: Vertex) -> tuple[Vertex, ...]:
        return self._adj[v]

    def edge_capacity(self, u: Vertex, v: Vertex) -> int:
        return self.cap[canonical_edge(u, v)]

    def index(self, v: Vertex) -> int:
        """Position of ``v`` in the canonical vertex order."""
        return self._vindex[v]

    def cut(self, side: Iterable[Vertex]) -> "Cut":
        return Cut(self, side)

    def __contains__(self, v: Vertex) -> bool:
        return v in self._vindex

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return f"Network({len(self.vertices)} vertices, {len(self.edges)} edges)"


class Cut:
    """A nonempty proper vertex subset of a network.

    A cut and its complement are distinct values (the structure tree needs
    directed edges); use :meth:`same_partition` for partition-level equality.
    """

    __slots__ = ("network", "side")

    def __init__(self, network: Network, side: Iterable[Vertex]):
        s = frozenset(str(v) for v in side)
        if not s:
            raise NetworkError("cut side is empty")
        if not s <= set(network.vertices):
            raise NetworkError(f"cut side contains unknown vertices: {sorted(s - set(network.vertices))}")
        if len(s) == len(network.vertices):
            raise NetworkError("cut side is the whole vertex set")
        self.network = network
        self.side = s

    def complement(self) -> "Cut":
        return Cut(self.network, set(self.network.vertices) - self.side)

    def same_partition(self, other: "Cut") -> bool:
        return self.network is other.network and (
            self.side == other.side or self.side == frozenset(other.network.vertices) - other.side
        )

    def sorted_side(self) -> tuple[Vertex, ...]:
        return tuple(sorted(self.side))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Cut) and self.network is other.network and self.side == other.side

    def __hash__(self) -> int:
        return hash((id(self.network), self.side))

    def __repr__(self) -> str:
        return f"Cut({{{', '.join(self.sorted_side())}}})"


@dataclass(frozen=True)
class CornerData:
    """The four corners of two cuts plus the six boundary-edge counts.

    ``corners`` holds the vertex sets (A&B, A&B*, A*&B, A*&B*) in that order;
    empty corners are kept as empty frozensets and flagged in ``is_cut``.
    The counts are capacity sums over the six blocks that partition
    coboundary(A) | coboundary(B):

        a: A&B -- A*&B      b: A&B* -- A*&B*     c: A&B -- A&B*
        d: A*&B -- A*&B*    e: A&B* -- A*&B      f: A&B -- A*&B*

    so that c(A) = a+b+e+f, c(B) = c+d+e+f and c(A&B) = a+c+f.
    """

    corners: tuple[frozenset, frozenset, frozenset, frozenset]
    is_cut: tuple[bool, bool, bool, bool]
    a: int
    b: int
    c: int
    d: int
    e: int
    f: int


def coboundary(net: Network, cut: Cut) -> frozenset[Edge]:
    """Edges with exactly one endpoint in the cut side."""
    side = cut.side
    return frozenset(e for e in net.edges if (e[0] in side) != (e[1] in side))


def capacity(net: Network, cut: Cut) -> int:
    """Capacity sum over the coboundary; equal for a cut and its complement."""
    side = cut.side
    return sum(c for (u, v), c in net.cap.items() if (u in side) != (v in side))


def side_capacity(net: Network, side: frozenset) -> int:
    """Capacity of a cut given directly as a vertex set (internal fast path)."""
    return sum(c for (u, v), c in net.cap.items() if (u in side) != (v in side))


def corners(net: Network, A: Cut, B: Cut) -> CornerData:
    """Classify the corners of A, B and the six boundary-edge capacity counts."""
    if A.network is not B.network:
        raise NetworkError("cuts belong to different networks")
    sa, sb = A.side, B.side
    vall = frozenset(net.vertices)
    quads = (sa & sb, sa - sb, sb - sa, vall - (sa | sb))
    counts = {"a": 0, "b": 0, "c": 0, "d": 0, "e": 0, "f": 0}
    kind = {(True, True): 0, (True, False): 1, (False, True): 2, (False, False): 3}
    # block pair -> count name, with corners ordered (A&B, A&B*, A*&B, A*&B*)
    names = {
        frozenset({0, 2}): "a",
        frozenset({1, 3}): "b",
        frozenset({0, 1}): "c",
        frozenset({2, 3}): "d",
        frozenset({1, 2}): "e",
        frozenset({0, 3}): "f",
    }
    for (u, v), c in net.cap.items():
        ku, kv = kind[(u in sa, u in sb)], kind[(v in sa, v in sb)]
        if ku != kv:
            counts[names[frozenset({ku, kv})]] += c
    ordered = (quads[0], quads[1], quads[2], quads[3])
    return CornerData(
        corners=ordered,
        is_cut=tuple(bool(q) and len(q) < len(vall) for q in ordered),
        **counts,
    )


def is_nested(A: Cut, B: Cut) -> bool:
    """True iff at least one corner of A, B is empty."""
    if A.network is not B.network:
        raise NetworkError("cuts belong to different networks")
    return sides_nested(A.side, B.side, frozenset(A.network.vertices))


def sides_nested(sa: frozenset, sb: frozenset, universe: frozenset) -> bool:
    """Nestedness test on raw vertex sets (internal fast path)."""
    if not sa & sb:
        return True
    if sa <= sb or sb <= sa:
        return True
    return sa | sb == universe


def is_tight(net: Network, A: Cut) -> bool:
    """True iff both sides of A induce connected subgraphs."""
    side = set(A.side)
    other = set(net.vertices) - side
    return net._connected(side) and net._connected(other)


# ---------------------------------------------------------------------------
# serialization

def load_network_json(data) -> Network:
    """Build a Network from the JSON object format.

    ``{"vertices": [...], "edges": [{"u":, "v":, "c":, ("note": ...)}...]}``
    Edge ``note`` fields are provenance comments and are ignored.
    """
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    try:
        vertices = data["vertices"]
        edges = [(e["u"], e["v"], e["c"]) for e in data["edges"]]
    except (KeyError, TypeError) as exc:
        raise NetworkError(f"malformed network JSON: {exc}") from exc
    return Network(vertices, edges)


def load_network_dimacs(text: str) -> Network:
    """Parse the DIMACS max-flow format ("p max n m" header, "a u v cap" arcs).

    Arc lines give undirected capacities here; opposite arcs of the same pair
    must agree.  Capacities must be integral.
    """
    n = None
    arcs: dict[Edge, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1].lower() != "max":
                raise NetworkError(f"line {lineno}: bad problem line {line!r}")
            n = int(parts[2])
        elif parts[0] == "n":
            continue  # source/sink designators are CLI arguments here
        elif parts[0] == "a":
            if n is None:
                raise NetworkError(f"line {lineno}: arc before problem line")
            if len(parts) != 4:
                raise NetworkError(f"line {lineno}: bad arc line {line!r}")
            u, v = parts[1], parts[2]
            cap_str = parts[3]
            try:
                c = int(cap_str)
            except ValueError as exc:
                raise NetworkError(f"line {lineno}: capacity must be integral, got {cap_str!r}") from exc
            if u == v:
                raise NetworkError(f"line {lineno}: loop arc")
            e = canonical_edge(u, v)
            if e in arcs and arcs[e] != c:
                raise NetworkError(f"line {lineno}: conflicting capacities for edge {e}")
            arcs[e] = c
        else:
            raise NetworkError(f"line {lineno}: unknown line type {parts[0]!r}")
    if n is None:
        raise NetworkError("missing problem line")
    vertices = {str(i) for i in range(1, n + 1)} | {u for e in arcs for u in e}
    return Network(vertices, [(u, v, c) for (u, v), c in arcs.items()])


def load_network(text: str) -> Network:
    """Load a network from JSON or DIMACS text, sniffing the format."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return load_network_json(text)
    return load_network_dimacs(text)


def network_to_json(net: Network) -> dict:
    return {
        "vertices": list(net.vertices),
        "edges": [{"u": u, "v": v, "c": net.cap[(u, v)]} for u, v in net.edges],
    }


def iter_pairs(net: Network) -> Iterator[tuple[Vertex, Vertex]]:
    """All unordered vertex pairs in canonical order."""
    vs = net.vertices
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            yield vs[i], vs[j]
