"""Exhaustive atlas of labeled games and interchange-graph analytics.

The interchange graph has the labeled games of one size as nodes, adjacent
when a single 3-cycle reversal apart.  BFS distance there must agree with
the balance invariant of the difference graph, which is checked against the
span solver in the acceptance suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb, factorial
from typing import Iterator, Optional, Sequence

from .core import Game
from .errors import BudgetExceeded, SizeMismatch
from .eulerian import count_eulerian_subgraphs
from .morph import automorphisms, canonical_form


def _game_rows(p: int, fixed_row0: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    """Backtracking over out-neighbor masks, ascending, so the stream is
    lexicographic in the row-mask tuple."""
    n = (p - 1) // 2
    rows = [0] * p
    wins = [0] * p

    def candidates(i: int) -> list[int]:
        later = list(range(i + 1, p))
        need = n - wins[i]
        if need < 0 or need > len(later):
            return []
        masks = []
        for comb_ in combinations(later, need):
            lose = [j for j in later if j not in set(comb_)]
            if all(wins[j] + 1 <= n for j in lose):
                masks.append((sum(1 << j for j in comb_), comb_, lose))
        masks.sort(key=lambda t: t[0])
        return masks

    def rec(i: int) -> Iterator[tuple[int, ...]]:
        if i == p:
            yield tuple(rows)
            return
        if i == 0 and fixed_row0 is not None:
            opts = []
            later = list(range(1, p))
            comb_ = tuple(j for j in later if (fixed_row0 >> j) & 1)
            if len(comb_) == n:
                lose = [j for j in later if not (fixed_row0 >> j) & 1]
                opts = [(fixed_row0, comb_, lose)]
        else:
            opts = candidates(i)
        for mask, comb_, lose in opts:
            rows[i] |= mask
            wins[i] += len(comb_)
            for j in lose:
                rows[j] |= 1 << i
                wins[j] += 1
            yield from rec(i + 1)
            wins[i] -= len(comb_)
            rows[i] &= ~mask
            for j in lose:
                rows[j] &= ~(1 << i)
                wins[j] -= 1

    yield from rec(0)


def enumerate_games(p: int, allow_large: bool = False) -> Iterator[Game]:
    """All labeled games of size p, lexicographic by row masks, no duplicates."""
    if p % 2 == 0:
        raise SizeMismatch("games have odd size")
    if p > 9 and not allow_large:
        raise BudgetExceeded("enumeration beyond size 9 needs allow_large=True")
    for rows in _game_rows(p):
        yield Game(p, rows)


def count_pointed_games(p: int) -> int:
    """|Games(I+, I-)|: labeled games whose base vertex 0 beats exactly 1..n."""
    n = (p - 1) // 2
    fixed = sum(1 << j for j in range(1, n + 1))
    return sum(1 for _ in _game_rows(p, fixed_row0=fixed))


@dataclass(frozen=True)
class ClassInfo:
    canon_hex: str
    aut_order: int
    labeled_count: int
    representative: Game


@dataclass(frozen=True)
class Atlas:
    p: int
    labeled_total: int
    classes: tuple[ClassInfo, ...]


def census(p: int) -> Atlas:
    """Isomorphism census: per class the canonical form, |Aut|, and labeled
    count, which must equal p!/|Aut|; the labeled total must match the
    Eulerian-subgraph count of any one game (both are verified here)."""
    groups: dict[int, list[Game]] = {}
    total = 0
    for g in enumerate_games(p):
        total += 1
        groups.setdefault(canonical_form(g).bits, []).append(g)
    classes = []
    for bits in sorted(groups):
        members = groups[bits]
        rep = members[0]
        aut = automorphisms(rep).order
        assert len(members) * aut == factorial(p), "orbit-stabilizer mismatch"
        cf = canonical_form(rep)
        classes.append(ClassInfo(cf.hex, aut, len(members), rep))
    assert sum(c.labeled_count for c in classes) == total
    if total:
        assert count_eulerian_subgraphs(classes[0].representative) == total
    return Atlas(p, total, tuple(classes))


# -- interchange graph ----------------------------------------------------------


def _flip3(rows: tuple[int, ...], tri: tuple[int, int, int]) -> tuple[int, ...]:
    a, b, c = tri
    out = list(rows)
    out[a] = (out[a] & ~(1 << b)) | (1 << c)
    out[b] = (out[b] & ~(1 << c)) | (1 << a)
    out[c] = (out[c] & ~(1 << a)) | (1 << b)
    return tuple(out)


def _tris(rows: tuple[int, ...], p: int) -> list[tuple[int, int, int]]:
    cols = [0] * p
    for i in range(p):
        m = rows[i]
        while m:
            b = m & -m
            cols[b.bit_length() - 1] |= 1 << i
            m ^= b
    out = []
    for a in range(p):
        m = rows[a]
        while m:
            bb = m & -m
            b = bb.bit_length() - 1
            m ^= bb
            if b < a:
                continue
            mm = rows[b] & cols[a]
            while mm:
                cc = mm & -mm
                c = cc.bit_length() - 1
                mm ^= cc
                if c > a:
                    out.append((a, b, c))
    return out


class InterchangeGraph:
    """Implicit graph on the labeled games of one size; neighbors on demand."""

    def __init__(self, p: int):
        self.p = p

    def neighbors(self, g: Game) -> list[Game]:
        return [Game(self.p, _flip3(g.rows, t)) for t in _tris(g.rows, self.p)]

    def degree(self, g: Game) -> int:
        return len(_tris(g.rows, self.p))

    def nodes(self) -> Iterator[Game]:
        return enumerate_games(self.p)


class FullInterchange:
    """Materialized interchange graph for one size: index maps and adjacency."""

    def __init__(self, p: int):
        self.p = p
        self.nodes = [g.rows for g in enumerate_games(p)]
        self.index = {rows: k for k, rows in enumerate(self.nodes)}
        self.adj: list[list[int]] = []
        for rows in self.nodes:
            self.adj.append([self.index[_flip3(rows, t)] for t in _tris(rows, p)])

    def bfs(self, src: int) -> list[int]:
        dist = [-1] * len(self.nodes)
        dist[src] = 0
        frontier = [src]
        while frontier:
            nxt = []
            for v in frontier:
                dv = dist[v]
                for w in self.adj[v]:
                    if dist[w] < 0:
                        dist[w] = dv + 1
                        nxt.append(w)
            frontier = nxt
        return dist


def _bfs(p: int, src: tuple[int, ...], dst: Optional[tuple[int, ...]] = None) -> dict[tuple[int, ...], int]:
    dist = {src: 0}
    frontier = [src]
    while frontier:
        nxt = []
        for rows in frontier:
            d = dist[rows]
            for tri in _tris(rows, p):
                r2 = _flip3(rows, tri)
                if r2 not in dist:
                    dist[r2] = d + 1
                    if dst is not None and r2 == dst:
                        return dist
                    nxt.append(r2)
        frontier = nxt
    return dist


def interchange_distance(a: Game, b: Game) -> int:
    """BFS distance in the interchange graph; equals beta(Delta(a, b))."""
    if a.p != b.p:
        raise SizeMismatch("games on different vertex counts")
    if a == b:
        return 0
    return _bfs(a.p, a.rows, b.rows)[b.rows]


def geodesic_count(a: Game, b: Game) -> tuple[int, int]:
    """(distance, number of geodesics); the count is at least distance!."""
    if a.p != b.p:
        raise SizeMismatch("games on different vertex counts")
    if a == b:
        return 0, 1
    dist = {a.rows: 0}
    count = {a.rows: 1}
    frontier = [a.rows]
    level = 0
    while frontier:
        if b.rows in dist:
            # finish counting into the target level, then stop
            if level >= dist[b.rows]:
                break
        nxt = []
        for rows in frontier:
            for tri in _tris(rows, a.p):
                r2 = _flip3(rows, tri)
                if r2 not in dist:
                    dist[r2] = level + 1
                    count[r2] = count[rows]
                    nxt.append(r2)
                elif dist[r2] == level + 1:
                    count[r2] += count[rows]
        frontier = nxt
        level += 1
    return dist[b.rows], count[b.rows]


@dataclass(frozen=True)
class DiameterReport:
    p: int
    value: int
    conjectured: int  # n^2, reported but never asserted
    witness: tuple[Game, Game]


def diameter(p: int, allow_large: bool = False) -> DiameterReport:
    """Exact diameter via one full BFS per isomorphism class representative
    (distance spectra are relabeling-invariant, so class reps see every
    eccentricity)."""
    if p > 7 and not allow_large:
        raise BudgetExceeded("diameter beyond size 7 needs allow_large=True")
    atl = census(p)
    n = (p - 1) // 2
    best = -1
    wit = None
    for cls in atl.classes:
        dist = _bfs(p, cls.representative.rows)
        far_rows, far_d = max(dist.items(), key=lambda kv: (kv[1], kv[0]))
        if far_d > best:
            best = far_d
            wit = (cls.representative, Game(p, far_rows))
    assert wit is not None
    return DiameterReport(p, best, n * n, wit)


def parity_bipartition(p: int) -> tuple[list[Game], list[Game]]:
    """Games split by parity of |Delta(., base)| with the lexicographically
    least game as base; every interchange edge crosses the split."""
    games = list(enumerate_games(p))
    base = games[0]
    even, odd = [], []
    for g in games:
        diff = sum(
            1 for (i, j) in g.edges() if base.has_edge(j, i)
        )
        (even if diff % 2 == 0 else odd).append(g)
    return even, odd


def convexity_check(pi: Game, Q: Sequence[int]) -> bool:
    """Whether the games agreeing with pi on every edge at Q form a convex set
    (no geodesic between members leaves the set)."""
    p = pi.p
    if p > 7:
        raise BudgetExceeded("convexity check is exhaustive; size 7 is the budget")
    qset = set(Q)
    fixed = [
        (i, j)
        for (i, j) in pi.edges()
        if i in qset or j in qset
    ]

    def inside(rows: tuple[int, ...]) -> bool:
        return all((rows[i] >> j) & 1 for (i, j) in fixed)

    import numpy as np

    graph = FullInterchange(p)
    member_idx = [k for k, rows in enumerate(graph.nodes) if inside(rows)]
    mask_out = np.ones(len(graph.nodes), dtype=bool)
    mask_out[member_idx] = False
    D = np.empty((len(member_idx), len(graph.nodes)), dtype=np.int32)
    for r, k in enumerate(member_idx):
        D[r] = graph.bfs(k)
    midx = np.array(member_idx)
    outside = D[:, mask_out]
    for i in range(len(member_idx)):
        # a node v off the set with d(a,v) + d(v,b) = d(a,b) breaks convexity
        through = outside[i][None, :] + outside[i + 1:]
        direct = D[i + 1:, midx[i]]
        if through.size and (through.min(axis=1) <= direct).any():
            return False
    return True


# -- counting report -------------------------------------------------------------


@dataclass(frozen=True)
class CountReport:
    n: int
    p: int
    binom: int
    exact_total: int
    exact_pointed: int
    formula_pointed_lower: int
    formula_total_lower: int
    is_lower_bound_num: int
    is_lower_bound_den: int
    literature_pointed: Optional[int]
    literature_total: Optional[int]

    @property
    def literature_agrees(self) -> Optional[bool]:
        if self.literature_total is None:
            return None
        return self.literature_total == self.exact_total and self.literature_pointed == self.exact_pointed


def count_report(n: int) -> CountReport:
    """Exact labeled and pointed counts against the formula lower bounds.

    The exact total comes from the Eulerian-subgraph oracle, the pointed
    count from constrained enumeration, and the product law
    total = C(2n, n) * pointed is verified.  Literature values for n = 3
    are carried along purely for comparison.
    """
    from .core import circulant

    p = 2 * n + 1
    base = circulant(p, range(1, n + 1))
    assert isinstance(base, Game)
    exact_total = count_eulerian_subgraphs(base)
    exact_pointed = count_pointed_games(p)
    bi = comb(2 * n, n)
    assert exact_total == bi * exact_pointed
    literature_pointed, literature_total = (84, 1680) if n == 3 else (None, None)
    return CountReport(
        n=n,
        p=p,
        binom=bi,
        exact_total=exact_total,
        exact_pointed=exact_pointed,
        formula_pointed_lower=2 ** (n * (n - 1)),
        formula_total_lower=bi * 2 ** (n * (n - 1)),
        is_lower_bound_num=2 ** (n * (n - 1)),
        is_lower_bound_den=(2 * n + 1) * factorial(n) ** 2,
        literature_pointed=literature_pointed,
        literature_total=literature_total,
    )
