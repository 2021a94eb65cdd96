"""Periodic two-ended strips: Z x pattern graphs, truncation to finite
networks, separation levels, windowed structure trees, flow certificates.

A strip is given by a finite column pattern, edges within a column, and
edges from each column to the next.  The infinite graph has exactly two
ends; every query about it is answered through finite truncations in which
an apex vertex absorbs everything beyond the window on each side.

Separation levels use a stability rule: a truncation value is accepted once
two consecutive window widths agree and some witnessing minimum cut has its
coboundary strictly inside the window (checked by contracting each apex with
its outermost column and confirming the value is unchanged).  Such a witness
lifts to the infinite strip at equal capacity, and truncation values are
nonincreasing in the width, so the accepted value is exact.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterable, Union

from .netcore import Network, NetworkError, iter_pairs
from .flow import FlowAssignment, all_pairs_connectivity, max_flow, max_flow_capdict
from .structure import NestedSystem, StructureTree, level_up, tree_from_nested

APEX_LEFT = "end:left"
APEX_RIGHT = "end:right"

_MAX_STABLE_WIDTH = 64


class EndPoint(enum.Enum):
    """One of the two ends of a strip."""

    LEFT = "left"
    RIGHT = "right"

    @property
    def apex(self) -> str:
        return APEX_LEFT if self is EndPoint.LEFT else APEX_RIGHT


StripVertex = tuple[int, str]  # (column, pattern id)
Endpointish = Union[EndPoint, StripVertex]


class StripNetwork:
    """A two-ended periodic strip Z x pattern.

    ``internal`` edges live inside one column; ``forward`` edges run from
    column i to column i+1 (u in column i, v in column i+1; u == v gives a
    rail).  Strips that fail the window connectivity test -- which would
    have more than two ends -- are rejected at load time.
    """

    def __init__(
        self,
        pattern: Iterable[str],
        internal: Iterable[tuple[str, str, int]],
        forward: Iterable[tuple[str, str, int]],
    ):
        pat = [str(p) for p in pattern]
        if len(set(pat)) != len(pat):
            raise NetworkError("duplicate pattern ids")
        if not pat:
            raise NetworkError("empty pattern")
        self.pattern = tuple(sorted(pat))
        pset = set(self.pattern)
        seen_internal = set()
        internal_norm = []
        for u, v, c in internal:
            u, v = str(u), str(v)
            if u == v:
                raise NetworkError("internal loop edge")
            if u not in pset or v not in pset:
                raise NetworkError(f"internal edge ({u},{v}) uses unknown pattern id")
            key = frozenset((u, v))
            if key in seen_internal:
                raise NetworkError(f"parallel internal edge ({u},{v})")
            seen_internal.add(key)
            self._check_cap(u, v, c)
            internal_norm.append((min(u, v), max(u, v), c))
        seen_forward = set()
        forward_norm = []
        for u, v, c in forward:
            u, v = str(u), str(v)
            if u not in pset or v not in pset:
                raise NetworkError(f"forward edge ({u},{v}) uses unknown pattern id")
            if (u, v) in seen_forward:
                raise NetworkError(f"parallel forward edge ({u},{v})")
            seen_forward.add((u, v))
            self._check_cap(u, v, c)
            forward_norm.append((u, v, c))
        if not forward_norm:
            raise NetworkError("strip has no forward edges (disconnected, not two-ended)")
        self.internal = tuple(sorted(internal_norm))
        self.forward = tuple(sorted(forward_norm))
        self._check_window_connectivity()

    @staticmethod
    def _check_cap(u, v, c):
        if not isinstance(c, int) or isinstance(c, bool) or c < 1:
            raise NetworkError(f"capacity of ({u},{v}) must be a positive integer")

    def _check_window_connectivity(self) -> None:
        # A connected window of >= 2|pattern|+4 columns proves the infinite
        # strip is connected with exactly two ends (windows chain through
        # their overlaps); strips failing it are rejected as not two-ended.
        k = 2 * len(self.pattern) + 4
        adj: dict[StripVertex, set] = {(i, p): set() for i in range(k) for p in self.pattern}
        for i in range(k):
            for u, v, _ in self.internal:
                adj[(i, u)].add((i, v))
                adj[(i, v)].add((i, u))
        for i in range(k - 1):
            for u, v, _ in self.forward:
                adj[(i, u)].add((i + 1, v))
                adj[(i + 1, v)].add((i, u))
        start = next(iter(adj))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(adj):
            raise NetworkError("strip window is disconnected: not a two-ended periodic strip")

    def degree_bound(self) -> int:
        return max(
            sum(c for u, v, c in self.internal if p in (u, v))
            + sum(c for u, _v, c in self.forward if u == p)
            + sum(c for _u, v, c in self.forward if v == p)
            for p in self.pattern
        )


@dataclass(frozen=True)
class Truncation:
    """Finite surrogate: columns -w..w plus two absorbing apex vertices.

    Parallel apex edges are merged by capacity summation; this is the only
    departure from simplicity and it is confined to the apexes.
    """

    strip: StripNetwork
    width: int
    network: Network

    @property
    def apex_left(self) -> str:
        return APEX_LEFT

    @property
    def apex_right(self) -> str:
        return APEX_RIGHT

    def vertex_id(self, col: int, pid: str) -> str:
        if abs(col) > self.width:
            raise NetworkError(f"column {col} outside truncation width {self.width}")
        if pid not in self.strip.pattern:
            raise NetworkError(f"unknown pattern id {pid!r}")
        return f"{col}/{pid}"

    def endpoint_id(self, x: Endpointish) -> str:
        if isinstance(x, EndPoint):
            return x.apex
        col, pid = x
        return self.vertex_id(col, pid)

    def column_vertices(self, col: int) -> tuple[str, ...]:
        return tuple(self.vertex_id(col, p) for p in self.strip.pattern)


def truncate(S: StripNetwork, w: int) -> Truncation:
    """Truncate the strip to columns -w..w plus apexes.

    ``w`` may be 0 (a single column between the apexes).
    """
    if w < 0:
        raise NetworkError("width must be >= 0")
    vertices = [f"{i}/{p}" for i in range(-w, w + 1) for p in S.pattern]
    vertices += [APEX_LEFT, APEX_RIGHT]
    edges: list[tuple[str, str, int]] = []
    for i in range(-w, w + 1):
        for u, v, c in S.internal:
            edges.append((f"{i}/{u}", f"{i}/{v}", c))
    for i in range(-w, w):
        for u, v, c in S.forward:
            edges.append((f"{i}/{u}", f"{i + 1}/{v}", c))
    apex_left: dict[str, int] = {}
    apex_right: dict[str, int] = {}
    for u, v, c in S.forward:
        apex_left[v] = apex_left.get(v, 0) + c  # from column -w-1 into -w
        apex_right[u] = apex_right.get(u, 0) + c  # from column w into w+1
    for v, c in sorted(apex_left.items()):
        edges.append((APEX_LEFT, f"{-w}/{v}", c))
    for u, c in sorted(apex_right.items()):
        edges.append((f"{w}/{u}", APEX_RIGHT, c))
    return Truncation(strip=S, width=w, network=Network(vertices, edges))


def _required_width(x: Endpointish, y: Endpointish) -> int:
    cols = [abs(z[0]) for z in (x, y) if not isinstance(z, EndPoint)]
    return max(cols + [0]) + 2


def _truncation_value(S: StripNetwork, w: int, x: Endpointish, y: Endpointish) -> int:
    t = truncate(S, w)
    _, value = max_flow(t.network, t.endpoint_id(x), t.endpoint_id(y))
    return value


def _internal_witness(S: StripNetwork, w: int, x: Endpointish, y: Endpointish, value: int) -> bool:
    """Whether some minimum cut avoids the apexes and the outermost columns.

    Contract each apex with its outermost column; if the min-cut value is
    unchanged, a witness with coboundary on real strip edges strictly inside
    the window exists, and it lifts to the infinite strip at equal capacity.
    """
    t = truncate(S, w)
    left_group = {APEX_LEFT} | set(t.column_vertices(-w))
    right_group = {APEX_RIGHT} | set(t.column_vertices(w))
    sx, sy = t.endpoint_id(x), t.endpoint_id(y)

    def group(v: str) -> str:
        if v in left_group:
            return "L*"
        if v in right_group:
            return "R*"
        return v

    gx, gy = group(sx), group(sy)
    if gx == gy:
        raise NetworkError("endpoints too close to the window boundary")
    cap: dict[tuple, int] = {}
    for (u, v), c in t.network.cap.items():
        gu, gv = group(u), group(v)
        if gu == gv:
            continue
        cap[(gu, gv)] = cap.get((gu, gv), 0) + c
        cap[(gv, gu)] = cap.get((gv, gu), 0) + c
    contracted_value, _ = max_flow_capdict(cap, gx, gy)
    return contracted_value == value


def separation_level(S: StripNetwork, x: Endpointish, y: Endpointish) -> int:
    """Minimum capacity of a strip cut separating x and y.

    Computed on truncations of increasing width until two consecutive values
    agree and an interior witness cut exists (the stability rule).
    """
    if x == y:
        raise NetworkError("identical endpoints")
    w = _required_width(x, y)
    value = _truncation_value(S, w, x, y)
    while w < _MAX_STABLE_WIDTH:
        nxt = _truncation_value(S, w + 1, x, y)
        if nxt == value and _internal_witness(S, w + 1, x, y, nxt):
            return nxt
        value = nxt
        w += 1
    raise NetworkError("separation level did not stabilize within the width budget")


def end_flow_certificate(S: StripNetwork, x: Endpointish, y: Endpointish, w: int) -> FlowAssignment:
    """A verified flow on truncate(S, w) whose value is separation_level(x, y).

    Raises if the window is too narrow for the truncation optimum to have
    come down to the strip optimum yet.
    """
    target = separation_level(S, x, y)
    t = truncate(S, w)
    f, value = max_flow(t.network, t.endpoint_id(x), t.endpoint_id(y))
    if value != target:
        raise NetworkError(
            f"window too narrow: truncation value {value} exceeds separation level {target}"
        )
    return f


def windowed_tree(S: StripNetwork, n: int, w: int) -> StructureTree:
    """The level-n structure tree of the width-w truncation.

    Apex images act as end surrogates; whether a surrogate corresponds to a
    tree vertex or a tree end of the infinite object is not decidable from
    the window alone, so surrogate nodes are flagged in the serialization
    rather than resolved.
    """
    if n < 1:
        raise NetworkError("level must be >= 1")
    if w < n:
        raise NetworkError("window width must be at least the level")
    t = truncate(S, w)
    net = t.network
    lam = all_pairs_connectivity(net)
    system = NestedSystem.empty(net)
    for level in range(1, n + 1):
        if any(lam.value(a, b) == level for a, b in iter_pairs(net)):
            system = level_up(net, system, level, lam)
    return tree_from_nested(net, system)


def end_surrogate_nodes(T: StructureTree) -> tuple[int, ...]:
    """Nodes of a windowed tree that carry an apex image."""
    out = []
    for node, imgs in T.image_of.items():
        if any(v in (APEX_LEFT, APEX_RIGHT) for v in imgs):
            out.append(node)
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# serialization / CLI endpoint syntax


def load_strip_json(data) -> StripNetwork:
    """{"pattern": [...], "internal": [{"u","v","c"}...], "forward": [...]}"""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    try:
        pattern = data["pattern"]
        internal = [(e["u"], e["v"], e["c"]) for e in data.get("internal", [])]
        forward = [(e["u"], e["v"], e["c"]) for e in data["forward"]]
    except (KeyError, TypeError) as exc:
        raise NetworkError(f"malformed strip JSON: {exc}") from exc
    return StripNetwork(pattern, internal, forward)


def strip_to_json(S: StripNetwork) -> dict:
    return {
        "pattern": list(S.pattern),
        "internal": [{"u": u, "v": v, "c": c} for u, v, c in S.internal],
        "forward": [{"u": u, "v": v, "c": c} for u, v, c in S.forward],
    }


def parse_strip_endpoint(text: str) -> Endpointish:
    """CLI endpoint syntax: "end:left", "end:right", or "col:0/railname"."""
    if text == APEX_LEFT:
        return EndPoint.LEFT
    if text == APEX_RIGHT:
        return EndPoint.RIGHT
    if text.startswith("col:"):
        body = text[len("col:"):]
        col_str, sep, pid = body.partition("/")
        if not sep:
            raise NetworkError(f"bad endpoint {text!r}: expected col:INDEX/PATTERNID")
        try:
            col = int(col_str)
        except ValueError as exc:
            raise NetworkError(f"bad endpoint {text!r}: column must be an integer") from exc
        return (col, pid)
    raise NetworkError(f"bad endpoint {text!r}: use end:left, end:right or col:INDEX/PATTERNID")
