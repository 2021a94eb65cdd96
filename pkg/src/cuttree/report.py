"""Report rendering: matplotlib figures plus delimited summaries.

The report path writes, for a network, a connectivity table and the
canonical tree's edge list as CSV, alongside PNG renderings of the network
(optionally with a highlighted min-cut) and of the structure tree.  Layouts
are deterministic: vertices on a circle in canonical order, tree nodes in
tidy depth layers under the canonical root.
"""

from __future__ import annotations

import csv
import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .netcore import Cut, Network, coboundary
from .flow import all_pairs_connectivity, min_cut_smallest
from .structure import StructureTree, build_canonical_tree


def _circle_positions(net: Network) -> dict:
    n = len(net.vertices)
    return {
        v: (math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n))
        for i, v in enumerate(net.vertices)
    }


def render_network(net: Network, path: str, cut: Cut | None = None) -> None:
    """Draw the network; a cut, if given, is shown by filled side vertices
    and dashed coboundary edges."""
    pos = _circle_positions(net)
    cut_edges = coboundary(net, cut) if cut is not None else frozenset()
    fig, ax = plt.subplots(figsize=(7, 7))
    for (u, v) in net.edges:
        x0, y0 = pos[u]
        x1, y1 = pos[v]
        crossing = (u, v) in cut_edges
        ax.plot(
            [x0, x1],
            [y0, y1],
            linestyle="--" if crossing else "-",
            color="crimson" if crossing else "0.55",
            linewidth=1.6 if crossing else 1.0,
            zorder=1,
        )
        ax.annotate(
            str(net.cap[(u, v)]),
            ((x0 + x1) / 2, (y0 + y1) / 2),
            fontsize=7,
            color="0.3",
            ha="center",
        )
    for v, (x, y) in pos.items():
        inside = cut is not None and v in cut.side
        ax.scatter(
            [x], [y], s=240,
            c="crimson" if inside else "white",
            edgecolors="black", zorder=2,
        )
        ax.annotate(v, (x, y), ha="center", va="center", fontsize=8,
                    color="white" if inside else "black", zorder=3)
    ax.set_axis_off()
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _tree_layout(T: StructureTree) -> dict:
    """Tidy layered layout: leaves get consecutive x slots in DFS order,
    inner nodes sit over the mean of their children."""
    root = 0 if T.nodes else None
    children: dict[int, list[int]] = {n: [] for n in T.nodes}
    depth = {root: 0}
    order = [root]
    seen = {root}
    i = 0
    while i < len(order):
        n = order[i]
        i += 1
        for idx, other in sorted(T._adj[n], key=lambda t: t[0]):
            if other not in seen:
                seen.add(other)
                depth[other] = depth[n] + 1
                children[n].append(other)
                order.append(other)
    xs: dict[int, float] = {}
    counter = [0.0]

    def place(n: int) -> float:
        if not children[n]:
            xs[n] = counter[0]
            counter[0] += 1.0
            return xs[n]
        vals = [place(c) for c in children[n]]
        xs[n] = sum(vals) / len(vals)
        return xs[n]

    place(root)
    return {n: (xs[n], -float(depth[n])) for n in T.nodes}


def render_tree(T: StructureTree, path: str) -> None:
    """Draw a structure tree; non-image nodes are small filled points."""
    pos = _tree_layout(T)
    fig, ax = plt.subplots(figsize=(max(6, len(T.nodes) * 0.45), 6))
    for a, b, _side, cap in T.edges:
        x0, y0 = pos[a]
        x1, y1 = pos[b]
        ax.plot([x0, x1], [y0, y1], color="0.5", linewidth=1.0, zorder=1)
        ax.annotate(str(cap), ((x0 + x1) / 2, (y0 + y1) / 2), fontsize=7, color="0.25", ha="center")
    for n in T.nodes:
        x, y = pos[n]
        label = ",".join(T.image_of[n])
        if label:
            ax.scatter([x], [y], s=260, c="white", edgecolors="black", zorder=2)
            ax.annotate(label, (x, y), ha="center", va="center", fontsize=7, zorder=3)
        else:
            ax.scatter([x], [y], s=60, c="black", zorder=2)
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_connectivity_csv(net: Network, path: str) -> None:
    lam = all_pairs_connectivity(net)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["u", "v", "lambda"])
        for (u, v), val in lam.items():
            w.writerow([u, v, val])


def write_tree_csv(T: StructureTree, path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["a", "b", "capacity", "cut_side"])
        for a, b, side, cap in T.edges:
            w.writerow([a, b, cap, "|".join(sorted(side))])


def write_report(net: Network, outdir: str, s: str | None = None, t: str | None = None) -> list[str]:
    """Write the full report; returns the artifact paths."""
    os.makedirs(outdir, exist_ok=True)
    cut = min_cut_smallest(net, s, t) if s is not None and t is not None else None
    T = build_canonical_tree(net)
    artifacts = []
    p = os.path.join(outdir, "network.png")
    render_network(net, p, cut)
    artifacts.append(p)
    p = os.path.join(outdir, "tree.png")
    render_tree(T, p)
    artifacts.append(p)
    p = os.path.join(outdir, "connectivity.csv")
    write_connectivity_csv(net, p)
    artifacts.append(p)
    p = os.path.join(outdir, "tree_edges.csv")
    write_tree_csv(T, p)
    artifacts.append(p)
    return artifacts
