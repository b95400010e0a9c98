"""Shared fixtures and independent brute-force oracles.

The oracles here deliberately avoid the library's own algorithms: spans by
exhaustive decomposition enumeration, isomorphism by raw permutation search,
Eulerian-subgraph counts by direct subset enumeration.
"""

import random
from itertools import combinations, permutations

import pytest

from gamegraphs.core import (
    Digraph,
    EdgeSet,
    Game,
    circulant,
    from_rows,
    make_digraph,
)


@pytest.fixture(scope="session")
def c3() -> Game:
    return circulant(3, (1,))


@pytest.fixture(scope="session")
def g5() -> Game:
    return circulant(5, (1, 2))


@pytest.fixture(scope="session")
def g7i() -> Game:
    return circulant(7, (1, 2, 3))


@pytest.fixture(scope="session")
def g7ii() -> Game:
    return circulant(7, (1, 2, 4))


@pytest.fixture(scope="session")
def g7iii(g7ii) -> Game:
    # the type II circulant with its 3-cycle 3 -> 5 -> 6 -> 3 reversed
    rows = list(g7ii.rows)
    for (u, v) in ((3, 5), (5, 6), (6, 3)):
        rows[u] &= ~(1 << v)
        rows[v] |= 1 << u
    return Game(7, rows)


@pytest.fixture(scope="session")
def straddle() -> Digraph:
    return make_digraph(3, [(0, 1), (0, 2), (1, 2)])


@pytest.fixture(scope="session")
def order4() -> Digraph:
    return standard_order(4)


@pytest.fixture(scope="session")
def chorded_nine_ring() -> EdgeSet:
    cyc9 = [(i, (i + 1) % 9) for i in range(9)]
    return EdgeSet(9, cyc9 + [(6, 3), (3, 0), (0, 6)])


def standard_order(p: int) -> Digraph:
    rows = [0] * p
    for i in range(p):
        for j in range(i + 1, p):
            rows[i] |= 1 << j
    return from_rows(p, rows)


def random_tournament(p: int, rng: random.Random) -> Digraph:
    rows = [0] * p
    for i in range(p):
        for j in range(i + 1, p):
            if rng.random() < 0.5:
                rows[i] |= 1 << j
            else:
                rows[j] |= 1 << i
    return from_rows(p, rows)


def random_eulerian_edgeset(p: int, rng: random.Random, tries: int = 30) -> EdgeSet:
    """Union of random vertex-disjoint-edge cycles; always Eulerian."""
    edges: set = set()
    for _ in range(tries):
        k = rng.randint(3, p)
        verts = rng.sample(range(p), k)
        cyc = [(verts[t], verts[(t + 1) % k]) for t in range(k)]
        if any((v, u) in edges or (u, v) in edges for (u, v) in cyc):
            continue
        edges.update(cyc)
    return EdgeSet(p, edges)


# -- oracles ---------------------------------------------------------------------


def oracle_iso(a: Digraph, b: Digraph):
    """Raw permutation search for an isomorphism witness."""
    if a.p != b.p:
        return None
    for img in permutations(range(a.p)):
        ok = True
        for i in range(a.p):
            for j in range(a.p):
                if i != j and a.has_edge(i, j) != b.has_edge(img[i], img[j]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return img
    return None


def oracle_span(d: EdgeSet) -> int:
    """Exhaustive maximum over all decompositions; viable up to ~14 edges."""
    edges = sorted(d.edges)

    def all_cycles_through(first, remaining):
        (u, v) = first
        out = []

        def dfs(x, seen, path):
            if x == u:
                out.append(list(path))
                return
            for (a, b) in remaining:
                if a == x and (b == u or b not in seen):
                    dfs(b, seen | {b}, path + [(a, b)])

        dfs(v, {v}, [first])
        return out

    def best(remaining: frozenset) -> int:
        if not remaining:
            return 0
        first = min(remaining)
        top = 0
        for cyc in all_cycles_through(first, remaining):
            top = max(top, 1 + best(remaining - frozenset(cyc)))
        return top

    return best(frozenset(edges))


def oracle_eulerian_count(g: Digraph) -> int:
    """Direct enumeration of balanced edge subsets; viable up to ~16 edges."""
    edges = sorted(g.edges())
    count = 0
    for mask in range(1 << len(edges)):
        bal = [0] * g.p
        for k, (i, j) in enumerate(edges):
            if (mask >> k) & 1:
                bal[i] += 1
                bal[j] -= 1
        if all(b == 0 for b in bal):
            count += 1
    return count


def all_labeled_tournaments(p: int):
    """Every labeled tournament on p vertices (2^(p choose 2) of them)."""
    pairs = list(combinations(range(p), 2))
    for mask in range(1 << len(pairs)):
        rows = [0] * p
        for k, (i, j) in enumerate(pairs):
            if (mask >> k) & 1:
                rows[i] |= 1 << j
            else:
                rows[j] |= 1 << i
        yield from_rows(p, rows)
