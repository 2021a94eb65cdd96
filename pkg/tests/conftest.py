"""Shared fixtures and independent brute-force oracles.

The oracles here enumerate vertex subsets with itertools and never touch the
library's flow or numpy paths, so the values they produce are independent of
the code they check.
"""

import itertools
import json
import os
import random

import pytest

from cuttree.netcore import Network

FIXDIR = os.path.join(os.path.dirname(__file__), "..", "src", "cuttree", "fixtures")


def load_fixture_text(name: str) -> str:
    with open(os.path.join(FIXDIR, name)) as fh:
        return fh.read()


def load_fixture_json(name: str):
    return json.loads(load_fixture_text(name))


# -- independent oracles ------------------------------------------------------


def brute_cut_capacity(net: Network, side) -> int:
    side = set(side)
    return sum(c for (u, v), c in net.cap.items() if (u in side) != (v in side))


def brute_all_sides(net: Network):
    vs = list(net.vertices)
    for r in range(1, len(vs)):
        for combo in itertools.combinations(vs, r):
            yield frozenset(combo)


def brute_lambda(net: Network, s, t) -> int:
    best = None
    for side in brute_all_sides(net):
        if s in side and t not in side:
            c = brute_cut_capacity(net, side)
            if best is None or c < best:
                best = c
    return best


def brute_min_cut_sides(net: Network, s, t):
    lam = brute_lambda(net, s, t)
    return [
        side
        for side in brute_all_sides(net)
        if s in side and t not in side and brute_cut_capacity(net, side) == lam
    ]


def random_connected_net(rng: random.Random, nmax=9, nmin=3, capmax=4) -> Network:
    n = rng.randint(nmin, nmax)
    vs = [chr(ord("a") + i) for i in range(n)]
    edges = {}
    order = vs[:]
    rng.shuffle(order)
    for i in range(1, n):
        u, v = order[i], order[rng.randrange(i)]
        edges[tuple(sorted((u, v)))] = rng.randint(1, capmax)
    extra = rng.randint(0, n * (n - 1) // 2 - (n - 1))
    pool = [tuple(sorted(p)) for p in itertools.combinations(vs, 2)]
    rng.shuffle(pool)
    for p in pool:
        if extra <= 0:
            break
        if p not in edges:
            edges[p] = rng.randint(1, capmax)
            extra -= 1
    return Network(vs, [(u, v, c) for (u, v), c in edges.items()])


# -- small standard networks --------------------------------------------------


def cycle(n: int, cap: int = 1) -> Network:
    vs = [str(i) for i in range(1, n + 1)]
    return Network(vs, [(vs[i], vs[(i + 1) % n], cap) for i in range(n)])


@pytest.fixture
def path3():
    return Network("abc", [("a", "b", 1), ("b", "c", 1)])


@pytest.fixture
def k3():
    return Network("uvw", [("u", "v", 1), ("v", "w", 1), ("u", "w", 1)])


@pytest.fixture
def c4():
    return cycle(4)


@pytest.fixture
def c6():
    return cycle(6)


@pytest.fixture
def k4_caps():
    return Network(
        "abcd",
        [("a", "b", 2), ("a", "c", 1), ("a", "d", 3), ("b", "c", 2), ("b", "d", 1), ("c", "d", 2)],
    )


@pytest.fixture
def fig1():
    from cuttree.netcore import load_network_json

    return load_network_json(load_fixture_text("fig1.json"))


@pytest.fixture
def fig2():
    from cuttree.netcore import load_network_json

    return load_network_json(load_fixture_text("fig2.json"))


@pytest.fixture
def ladder():
    from cuttree.strips import load_strip_json

    return load_strip_json(load_fixture_text("ladder.json"))


@pytest.fixture
def fiveline():
    from cuttree.strips import load_strip_json

    return load_strip_json(load_fixture_text("fiveline.json"))
