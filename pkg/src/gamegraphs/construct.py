"""Game-building operators: doubles, lexicographic products, extensions,
reductions, pointed realization, Eulerian completion, and saturation.

Doubles use the fixed numbering base = 0, j- = 1+j, j+ = 1+n+j, which makes
the double of the standard order on n points literally equal (not just
isomorphic) to the circulant game on differences 1..n.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .core import (
    Digraph,
    EdgeSet,
    Game,
    Permutation,
    Tournament,
    _bits,
    from_rows,
    relabel,
    restrict,
)
from .errors import (
    BadK,
    EvenSize,
    FiberCountMismatch,
    NotEulerian,
    NotReducible,
    NotSteiner,
    SepExhausted,
    SizeMismatch,
    TooLarge,
    TooSmall,
)
from .eulerian import steiner_decomposition
from .reversal import reverse_subgraph


# -- doubles --------------------------------------------------------------------


@dataclass(frozen=True)
class DoubleLayout:
    """Vertex chart of a double: base 0, lower copy j- = 1+j, upper copy j+ = 1+n+j."""

    source: Tournament

    @property
    def n(self) -> int:
        return self.source.p

    @property
    def base(self) -> int:
        return 0

    def minus(self, j: int) -> int:
        return 1 + j

    def plus(self, j: int) -> int:
        return 1 + self.source.p + j


def double(t: Tournament) -> tuple[Game, DoubleLayout]:
    """The double 2t: a game on 2n+1 vertices, reducible via every pair (j-, j+)."""
    n = t.p
    p = 2 * n + 1
    lay = DoubleLayout(t)
    rows = [0] * p
    for j in range(n):
        rows[0] |= 1 << lay.minus(j)
        rows[lay.plus(j)] |= 1
        rows[lay.minus(j)] |= 1 << lay.plus(j)
    for i in range(n):
        for j in _bits(t.rows[i]):
            rows[lay.minus(i)] |= 1 << lay.minus(j)
            rows[lay.plus(i)] |= 1 << lay.plus(j)
            rows[lay.plus(j)] |= 1 << lay.minus(i)
            rows[lay.minus(j)] |= 1 << lay.plus(i)
    g = from_rows(p, rows)
    assert isinstance(g, Game)
    return g, lay


def double_cross_edges(lay: DoubleLayout) -> EdgeSet:
    """X(2t): the bipartite edges between the two copies."""
    n = lay.n
    es = []
    for i in range(n):
        for j in _bits(lay.source.rows[i]):
            es.append((lay.plus(j), lay.minus(i)))
            es.append((lay.minus(j), lay.plus(i)))
    return EdgeSet(2 * n + 1, es)


def double_layer_edges(lay: DoubleLayout, sign: int) -> EdgeSet:
    """The copy of the source inside the minus (sign=-1) or plus (sign=+1) layer."""
    n = lay.n
    off = lay.minus if sign < 0 else lay.plus
    es = []
    for i in range(n):
        for j in _bits(lay.source.rows[i]):
            es.append((off(i), off(j)))
    return EdgeSet(2 * n + 1, es)


# -- lexicographic products -------------------------------------------------------


def lex_product(gamma: Digraph, pi: Digraph) -> Digraph:
    """Gamma lex pi on pairs (i, j) -> index i*|pi| + j: first coordinate
    dominates, ties broken by the second."""
    q = pi.p
    p = gamma.p * q
    rows = [0] * p
    for i1 in range(gamma.p):
        for j1 in range(q):
            a = i1 * q + j1
            for i2 in _bits(gamma.rows[i1]):
                for j2 in range(q):
                    rows[a] |= 1 << (i2 * q + j2)
            for j2 in _bits(pi.rows[j1]):
                rows[a] |= 1 << (i1 * q + j2)
    return from_rows(p, rows)


def generalized_lex(gamma: Digraph, fibers: Sequence[Digraph]) -> tuple[Digraph, list[int]]:
    """One fiber digraph per base vertex; returns the product and the
    vertex -> base projection (a surjective morphism)."""
    if len(fibers) != gamma.p:
        raise FiberCountMismatch(f"need {gamma.p} fibers, got {len(fibers)}")
    offs = [0]
    for f in fibers:
        offs.append(offs[-1] + f.p)
    p = offs[-1]
    rows = [0] * p
    proj = [0] * p
    for i in range(gamma.p):
        for x in range(fibers[i].p):
            proj[offs[i] + x] = i
    for i1 in range(gamma.p):
        for x1 in range(fibers[i1].p):
            a = offs[i1] + x1
            for i2 in _bits(gamma.rows[i1]):
                for x2 in range(fibers[i2].p):
                    rows[a] |= 1 << (offs[i2] + x2)
            for x2 in _bits(fibers[i1].rows[x1]):
                rows[a] |= 1 << (offs[i1] + x2)
    return from_rows(p, rows), proj


# -- extension and reduction -------------------------------------------------------


def extend(pi: Game, K: Iterable[int]) -> tuple[Game, int, int]:
    """Extension via u -> v and K: new vertices u = p, v = p+1; K beats u,
    v beats K, u beats the rest, the rest beats v.  Returns (game, u, v)."""
    p = pi.p
    n = (p + 1) // 2
    ks = sorted(set(K))
    if len(ks) != n or any(not 0 <= k < p for k in ks):
        raise BadK(f"K must be {n} existing vertices")
    u, v = p, p + 1
    rows = [r for r in pi.rows] + [0, 0]
    kmask = sum(1 << k for k in ks)
    rest = ((1 << p) - 1) & ~kmask
    rows[u] |= (1 << v) | rest
    rows[v] |= kmask
    for k in ks:
        rows[k] |= 1 << u
    for j in _bits(rest):
        rows[j] |= 1 << v
    g = from_rows(p + 2, rows)
    assert isinstance(g, Game)
    return g, u, v


def is_reducible_via(g: Game, u: int, v: int) -> bool:
    """Reducibility via the pair {u, v}: their out-sets are disjoint."""
    if u == v:
        return False
    return g.rows[u] & g.rows[v] & ~(1 << u) & ~(1 << v) == 0


def reduce_via(g: Game, u: int, v: int) -> tuple[Game, dict[int, int]]:
    """Drop a reducible pair; the restriction is a game on p-2 vertices."""
    if not is_reducible_via(g, u, v):
        raise NotReducible(f"{{{u},{v}}} is not a reducible pair")
    sub, index = restrict(g, [w for w in range(g.p) if w not in (u, v)])
    assert isinstance(sub, Game)
    return sub, index


@dataclass(frozen=True)
class ReducibilityReport:
    """rPi plus its shape: per vertex at most one in- and one out-edge, so it
    is empty, a disjoint union of separated simple paths, or one Hamiltonian
    cycle (exactly when the game is the circulant on differences 1..n)."""

    edges: EdgeSet
    kind: str  # "empty" | "paths" | "hamiltonian_cycle"
    components: tuple[tuple[int, ...], ...]


def reducibility_graph(g: Game) -> ReducibilityReport:
    es = [
        (i, j)
        for i in range(g.p)
        for j in _bits(g.rows[i])
        if is_reducible_via(g, i, j)
    ]
    edges = EdgeSet(g.p, es)
    if not es:
        return ReducibilityReport(edges, "empty", ())
    nxt = {i: j for (i, j) in es}
    prv = {j: i for (i, j) in es}
    assert len(nxt) == len(es) and len(prv) == len(es)
    if len(es) == g.p:
        start = min(nxt)
        cyc = [start]
        while nxt[cyc[-1]] != start:
            cyc.append(nxt[cyc[-1]])
        return ReducibilityReport(edges, "hamiltonian_cycle", (tuple(cyc),))
    comps = []
    heads = sorted(i for i in nxt if i not in prv)
    for h in heads:
        path = [h]
        while path[-1] in nxt:
            path.append(nxt[path[-1]])
        comps.append(tuple(path))
    assert sum(len(c) - 1 for c in comps) == len(es)
    return ReducibilityReport(edges, "paths", tuple(comps))


# -- pointed games --------------------------------------------------------------


@dataclass(frozen=True)
class PointedGame:
    """A game with a chosen base: I_minus = outputs of the base, I_plus = inputs,
    restrictions of each, and the bipartite part Xi between them."""

    g: Game
    base: int
    I_plus: tuple[int, ...]
    I_minus: tuple[int, ...]
    Pi_plus: Tournament
    Pi_minus: Tournament
    plus_index: dict[int, int]
    minus_index: dict[int, int]
    Xi: EdgeSet


def pointed_view(g: Game, base: int = 0) -> PointedGame:
    i_minus = g.out_set(base)
    i_plus = g.in_set(base)
    tp, pidx = restrict(g, i_plus)
    tm, midx = restrict(g, i_minus)
    plus_set, minus_set = set(i_plus), set(i_minus)
    xi = EdgeSet(
        g.p,
        [
            (a, b)
            for (a, b) in g.edges()
            if (a in plus_set and b in minus_set) or (a in minus_set and b in plus_set)
        ],
    )
    return PointedGame(g, base, i_plus, i_minus, tp, tm, pidx, midx, xi)


def _xi_bfs_path(g: Digraph, plus_set: set[int], minus_set: set[int], src: int, dst: int) -> list[int]:
    """Shortest path src..dst through cross edges only, least-vertex tie break."""
    cross = plus_set | minus_set
    parent = {src: -1}
    frontier = [src]
    while frontier:
        nxt = []
        for v in sorted(frontier):
            for w in _bits(g.rows[v]):
                if w not in cross or w in parent:
                    continue
                if (v in plus_set) == (w in plus_set):
                    continue  # not a Xi edge
                parent[w] = v
                if w == dst:
                    path = [w]
                    while parent[path[-1]] != -1:
                        path.append(parent[path[-1]])
                    return path[::-1]
                nxt.append(w)
        frontier = nxt
    raise AssertionError("splitting lemma guarantees a Xi path")


def realize_pointed(gp: Tournament, gm: Tournament) -> tuple[Game, DoubleLayout]:
    """A pointed game whose plus restriction is gp and minus restriction is gm,
    under the double chart (j maps to 1+j below and 1+n+j above).

    Induction on the difference of the two tournaments: start from the double
    of gm and, for each reversed edge in lexicographic order, reverse the
    cycle made of the shortest cross path joining its upper endpoints.
    """
    if gp.p != gm.p:
        raise SizeMismatch("the two tournaments must have equal size")
    n = gp.p
    g, lay = double(gm)
    plus_set = {lay.plus(j) for j in range(n)}
    minus_set = {lay.minus(j) for j in range(n)}
    diffs = sorted((i, j) for (i, j) in gm.edges() if gp.has_edge(j, i))
    for (i, j) in diffs:
        ip, jp = lay.plus(i), lay.plus(j)
        assert g.has_edge(ip, jp)
        path = _xi_bfs_path(g, plus_set, minus_set, jp, ip)
        cyc = EdgeSet(g.p, list(zip(path, path[1:])) + [(ip, jp)])
        g2 = reverse_subgraph(g, cyc)
        assert isinstance(g2, Game)
        g = g2
    got_p, _ = restrict(g, sorted(plus_set))
    got_m, _ = restrict(g, sorted(minus_set))
    assert got_p == gp and got_m == gm
    return g, lay


def eulerian_to_game(d: Digraph | EdgeSet, record: Optional[list[int]] = None) -> Game:
    """A game on the same odd vertex set containing the Eulerian digraph d.

    Completes d to a tournament (undecided pairs i < j oriented i -> j), then
    repeatedly reverses a free path from an overweight vertex to an
    underweight one; the deviation drops by exactly one per loop turn.
    """
    if isinstance(d, Digraph):
        d = EdgeSet.from_digraph(d)
    if d.p % 2 == 0:
        raise EvenSize("games need an odd vertex count")
    if not d.is_eulerian():
        raise NotEulerian("in/out degrees unbalanced")
    p = d.p
    n = (p - 1) // 2
    rows = [0] * p
    for (i, j) in d.edges:
        rows[i] |= 1 << j
    for i in range(p):
        for j in range(i + 1, p):
            if not (rows[i] >> j) & 1 and not (rows[j] >> i) & 1:
                rows[i] |= 1 << j
    g = from_rows(p, rows)

    def deviation(t: Digraph) -> int:
        return sum(max(t.out_degree(i) - n, 0) for i in range(p))

    dev = deviation(g)
    if record is not None:
        record.append(dev)
    while dev > 0:
        over = [i for i in range(p) if g.out_degree(i) > n]
        under = {i for i in range(p) if g.out_degree(i) < n}
        middle = set(range(p)) - set(over) - under
        path = None
        for s in over:
            parent = {s: -1}
            frontier = [s]
            while frontier and path is None:
                nxt = []
                for v in sorted(frontier):
                    for w in _bits(g.rows[v]):
                        if w in parent or (v, w) in d:
                            continue
                        parent[w] = v
                        if w in under:
                            path = [w]
                            while parent[path[-1]] != -1:
                                path.append(parent[path[-1]])
                            path = path[::-1]
                            break
                        if w in middle:
                            nxt.append(w)
                    if path:
                        break
                frontier = nxt
            if path:
                break
        assert path is not None, "a free over-to-under path always exists"
        g = reverse_subgraph(g, EdgeSet(p, list(zip(path, path[1:]))))
        dev -= 1
        if record is not None:
            record.append(deviation(g))
        assert record is None or record[-1] == dev
    out = from_rows(p, g.rows)
    assert isinstance(out, Game) and d.is_subgraph_of(out)
    return out


def embed_in_game(t: Tournament) -> tuple[Game, list[int]]:
    """A game of size 2n-1 containing t, plus the vertex embedding.

    Realizes a pointed game whose upper tournament is the standard order
    (so its top vertex pairs with the base reducibly) and reduces that pair.
    """
    n = t.p
    if n == 0:
        raise TooSmall("need at least one vertex")
    if n == 1:
        return Game(1, (0,)), [0]
    order_rows = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            order_rows[i] |= 1 << j
    order = from_rows(n, order_rows)
    g, lay = realize_pointed(order, t)
    u = lay.plus(0)  # score n-1 inside the upper copy
    assert is_reducible_via(g, u, lay.base)
    sub, index = reduce_via(g, u, lay.base)
    return sub, [index[lay.minus(j)] for j in range(n)]


# -- Steiner variants --------------------------------------------------------------

_VARIANT_PATTERNS: dict[str, tuple[tuple[tuple[str, int], ...], ...]] = {
    # per decomposition cycle <k, j, i> (k beats j beats i beats k);
    # each triple lists (fiber, sign) with sign -1 for the lower copy
    "plus": ((("i", 1), ("j", 1), ("k", -1)),
             (("i", -1), ("j", 1), ("k", 1)),
             (("i", 1), ("j", -1), ("k", 1)),
             (("k", -1), ("j", -1), ("i", -1))),
    "minus": ((("i", -1), ("j", -1), ("k", 1)),
              (("i", 1), ("j", -1), ("k", -1)),
              (("i", -1), ("j", 1), ("k", -1)),
              (("k", 1), ("j", 1), ("i", 1))),
    "cross": ((("k", -1), ("j", -1), ("i", -1)),
              (("k", -1), ("j", 1), ("i", 1)),
              (("k", 1), ("j", -1), ("i", 1)),
              (("k", 1), ("j", 1), ("i", -1))),
    "plus+minus": ((("i", -1), ("j", -1), ("k", -1)),
                   (("i", -1), ("j", 1), ("k", 1)),
                   (("i", 1), ("j", -1), ("k", 1)),
                   (("i", 1), ("j", 1), ("k", -1))),
    "plus+cross": ((("k", -1), ("j", 1), ("i", -1)),
                   (("k", 1), ("j", -1), ("i", -1)),
                   (("k", -1), ("j", -1), ("i", 1)),
                   (("j", 1), ("k", 1), ("i", 1))),
    "minus+cross": ((("k", 1), ("j", -1), ("i", 1)),
                    (("k", -1), ("j", 1), ("i", 1)),
                    (("k", 1), ("j", 1), ("i", -1)),
                    (("j", -1), ("k", -1), ("i", -1))),
}


@dataclass(frozen=True)
class SteinerVariant:
    name: str
    game: Game
    witness: tuple[tuple[int, int, int], ...]


def steiner_variants(pi: Game) -> list[SteinerVariant]:
    """The six games (2 pi)/Delta for Delta among the two layer copies, the
    cross part, and their pairwise unions; each comes with a constructed and
    validated 3-cycle decomposition, so each output is again Steiner."""
    triples = steiner_decomposition(pi)
    if triples is None:
        raise NotSteiner("input game admits no 3-cycle decomposition")
    g2, lay = double(pi)
    parts = {
        "plus": double_layer_edges(lay, +1),
        "minus": double_layer_edges(lay, -1),
        "cross": double_cross_edges(lay),
    }
    out = []
    for name, pattern in _VARIANT_PATTERNS.items():
        dset = parts[name.split("+")[0]]
        for extra in name.split("+")[1:]:
            dset = dset.union(parts[extra])
        gv = reverse_subgraph(g2, dset)
        assert isinstance(gv, Game)
        witness: list[tuple[int, int, int]] = []
        for x in range(pi.p):
            witness.append((lay.plus(x), lay.base, lay.minus(x)))
        for (a, b, c) in triples:
            spots = {"k": a, "j": b, "i": c}
            for tri in pattern:
                verts = tuple(
                    lay.minus(spots[f]) if s < 0 else lay.plus(spots[f]) for (f, s) in tri
                )
                witness.append(verts)  # type: ignore[arg-type]
        _validate_steiner_witness(gv, witness)
        out.append(SteinerVariant(name, gv, tuple(witness)))
    return out


def _validate_steiner_witness(g: Game, witness: Sequence[tuple[int, int, int]]) -> None:
    seen: set[tuple[int, int]] = set()
    for (a, b, c) in witness:
        for (x, y) in ((a, b), (b, c), (c, a)):
            assert g.has_edge(x, y), f"witness edge {x}->{y} missing"
            assert (x, y) not in seen, f"witness reuses edge {x}->{y}"
            seen.add((x, y))
    assert len(seen) == g.edge_count(), "witness does not cover the game"


def nonreducible_from(pi: Game) -> Game:
    """(2 pi) with the upper copy reversed: a game with empty reducibility graph."""
    if pi.p < 3:
        raise TooSmall("the construction needs a game of size >= 3")
    g2, lay = double(pi)
    gv = reverse_subgraph(g2, double_layer_edges(lay, +1))
    assert isinstance(gv, Game)
    return gv


def uniquely_reducible_extension(pi: Game, K: Optional[Iterable[int]] = None) -> tuple[Game, int, int]:
    """An extension with a single reducible pair, when one exists.

    K must keep every maximal reducibility path together or apart, and its
    complement must avoid every out- and in-neighborhood; the first such K in
    lexicographic order is used when none is supplied.
    """
    from .errors import NotApplicable

    p = pi.p
    n = (p + 1) // 2
    rep = reducibility_graph(pi)
    paths = [set(c) for c in rep.components]
    taboo = {frozenset(pi.out_set(i)) for i in range(p)}
    taboo |= {frozenset(pi.in_set(i)) for i in range(p)}

    def good(ks: tuple[int, ...]) -> bool:
        kset = set(ks)
        if any(path & kset and not path <= kset for path in paths):
            return False
        comp = frozenset(set(range(p)) - kset)
        return comp not in taboo

    if K is not None:
        ks = tuple(sorted(set(K)))
        if len(ks) != n:
            raise BadK(f"K must have {n} vertices")
        if not good(ks):
            raise NotApplicable("K violates the unique-reducibility conditions")
        chosen = ks
    else:
        chosen = None
        if rep.kind != "hamiltonian_cycle":
            for ks in combinations(range(p), n):
                if good(ks):
                    chosen = ks
                    break
        if chosen is None:
            raise NotApplicable("no K satisfies the unique-reducibility conditions")
    g, u, v = extend(pi, chosen)
    out = reducibility_graph(g)
    assert len(out.edges) == 1
    return g, u, v


def is_double(g: Game, base: int) -> Optional[DoubleLayout]:
    """Recover a double structure pointed at base, if one exists.

    The partner of each lower vertex is forced (at most one reducible
    out-pair per vertex), so the check is a lookup in the reducibility graph
    followed by one exact comparison against the rebuilt double.
    """
    rep = reducibility_graph(g)
    nxt = {i: j for (i, j) in rep.edges.edges}
    i_minus = g.out_set(base)
    i_plus = set(g.in_set(base))
    pairing = {}
    for i in i_minus:
        j = nxt.get(i)
        if j is None or j not in i_plus:
            return None
        pairing[i] = j
    if len(set(pairing.values())) != len(i_minus):
        return None
    source, sidx = restrict(g, i_minus)
    rebuilt, lay = double(source)
    image = [0] * g.p
    image[base] = 0
    for i in i_minus:
        image[i] = lay.minus(sidx[i])
        image[pairing[i]] = lay.plus(sidx[i])
    if relabel(g, Permutation(image)) != rebuilt:
        return None
    return lay


# -- simple extension property and saturation ---------------------------------------


@dataclass(frozen=True)
class SepReport:
    ok: bool
    witness: dict[frozenset[int], int]
    failing: Optional[frozenset[int]]


def has_sep(g: Tournament, T0: Iterable[int]) -> SepReport:
    """Witness map J -> v_J (v_J beats exactly J inside T0), or the first failing J."""
    t0 = sorted(set(T0))
    if len(t0) > 20:
        raise TooLarge("2^|T0| subsets is past the budget")
    outside = [v for v in range(g.p) if v not in set(t0)]
    witness: dict[frozenset[int], int] = {}
    for mask in range(1 << len(t0)):
        J = [t0[k] for k in range(len(t0)) if (mask >> k) & 1]
        jset = set(J)
        found = None
        for v in outside:
            if all(g.has_edge(v, j) for j in J) and all(
                g.has_edge(j, v) for j in t0 if j not in jset
            ):
                found = v
                break
        if found is None:
            return SepReport(False, witness, frozenset(J))
        witness[frozenset(J)] = found
    return SepReport(True, witness, None)


def saturate(t: Tournament) -> tuple[Tournament, dict[int, frozenset[int]]]:
    """One saturation stage: adds a chooser vertex for every subset of the
    old vertex set, so the old set gains the simple extension property.

    New vertex for subset J sits at index |S0| + mask(J); among new vertices
    the smaller mask beats the larger.
    """
    s = t.p
    if s > 16:
        raise TooLarge("saturation budget is 2^16 new vertices")
    p = s + (1 << s)
    rows = [0] * p
    for i in range(s):
        rows[i] = t.rows[i]
    labels: dict[int, frozenset[int]] = {}
    for mask in range(1 << s):
        v = s + mask
        labels[v] = frozenset(k for k in range(s) if (mask >> k) & 1)
        for k in range(s):
            if (mask >> k) & 1:
                rows[v] |= 1 << k
            else:
                rows[k] |= 1 << v
        for other in range(mask + 1, 1 << s):
            rows[v] |= 1 << (s + other)
    g = from_rows(p, rows)
    assert isinstance(g, Tournament)
    return g, labels


def extend_embedding(
    pi: Tournament,
    S0: Iterable[int],
    rho: dict[int, int],
    gamma: Tournament,
) -> dict[int, int]:
    """Extend an embedding of pi|S0 into gamma to all of pi, one vertex at a
    time with backtracking over the candidate choosers.

    Raises SepExhausted when gamma has no room for some extension step.
    """
    placed = dict(rho)
    s0 = sorted(set(S0))
    if sorted(placed) != s0:
        raise SepExhausted("rho must be defined exactly on S0")
    for a in s0:
        for b in s0:
            if a != b and pi.has_edge(a, b) != gamma.has_edge(placed[a], placed[b]):
                raise SepExhausted("rho is not an embedding of pi|S0")
    todo = [v for v in range(pi.p) if v not in placed]

    def rec(k: int) -> bool:
        if k == len(todo):
            return True
        v = todo[k]
        used = set(placed.values())
        for w in range(gamma.p):
            if w in used:
                continue
            if all(
                gamma.has_edge(w, placed[u]) == pi.has_edge(v, u)
                and gamma.has_edge(placed[u], w) == pi.has_edge(u, v)
                for u in placed
            ):
                placed[v] = w
                if rec(k + 1):
                    return True
                del placed[v]
        return False

    if not rec(0):
        raise SepExhausted("gamma cannot absorb the remaining vertices")
    return placed
