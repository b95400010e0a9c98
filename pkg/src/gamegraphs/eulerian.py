"""Decomposition machinery for Eulerian digraphs and tournaments.

Central quantities: the span (maximum number of edge-disjoint cycles whose
union is the graph) and the balance invariant beta = edges - 2*span, which
is also the minimum 3-cycle reversal distance between tournaments.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .core import Digraph, EdgeSet, Game, Tournament, _bits, scores
from .errors import (
    BadLength,
    BudgetExceeded,
    InvariantViolation,
    NotConnected,
    NotEulerian,
    NotStrong,
    TooLarge,
)

GraphLike = Union[Digraph, EdgeSet]


def _edge_list(d: GraphLike) -> tuple[int, list[tuple[int, int]]]:
    if isinstance(d, Digraph):
        return d.p, sorted(d.edges())
    return d.p, sorted(d.edges)


def _is_eulerian(p: int, edges: Iterable[tuple[int, int]]) -> bool:
    bal = [0] * p
    for (i, j) in edges:
        bal[i] += 1
        bal[j] -= 1
    return all(b == 0 for b in bal)


def normalize_cycle(cycle: Iterable[int]) -> tuple[int, ...]:
    """Rotate so the least vertex comes first (orientation is preserved)."""
    c = tuple(cycle)
    k = c.index(min(c))
    return c[k:] + c[:k]


def cycle_edges(cycle: Iterable[int]) -> list[tuple[int, int]]:
    c = tuple(cycle)
    return [(c[i], c[(i + 1) % len(c)]) for i in range(len(c))]


def cycle_decomposition(d: GraphLike, must_be_eulerian: bool = True) -> list[tuple[int, ...]]:
    """Greedy decomposition into edge-disjoint cycles covering d exactly.

    Deterministic: peel the cycle through the least remaining edge found by
    a least-successor-first depth-first search.  Not necessarily a maximum
    decomposition.
    """
    p, edges = _edge_list(d)
    if must_be_eulerian and not _is_eulerian(p, edges):
        raise NotEulerian("in/out degrees unbalanced")
    remaining = set(edges)
    out = []
    while remaining:
        (u, v) = min(remaining)
        path = _simple_path(p, remaining, v, u)
        if path is None:
            raise NotEulerian("edge lies on no cycle")  # cannot happen when Eulerian
        cyc = (u,) + tuple(path[:-1])
        for e in cycle_edges(cyc):
            remaining.remove(e)
        out.append(normalize_cycle(cyc))
    return out


def _simple_path(p: int, edges: set[tuple[int, int]], src: int, dst: int) -> Optional[list[int]]:
    """Vertex-simple path src..dst inside the edge set, least successor first."""
    succ: dict[int, list[int]] = defaultdict(list)
    for (i, j) in sorted(edges):
        succ[i].append(j)

    def dfs(v: int, visited: set[int], path: list[int]) -> Optional[list[int]]:
        if v == dst:
            return path
        for w in succ[v]:
            if w == dst or w not in visited:
                got = dfs(w, visited | {w}, path + [w])
                if got is not None:
                    return got
        return None

    return dfs(src, {src}, [src])


def euler_trail(d: GraphLike) -> list[int]:
    """Closed edge-simple trail covering every edge once (Hierholzer, least successor first)."""
    p, edges = _edge_list(d)
    if not edges:
        raise NotEulerian("empty edge set has no trail")
    if not _is_eulerian(p, edges):
        raise NotEulerian("in/out degrees unbalanced")
    # weak connectivity over vertices with incident edges
    parent = list(range(p))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (i, j) in edges:
        parent[find(i)] = find(j)
    verts = {v for e in edges for v in e}
    roots = {find(v) for v in verts}
    if len(roots) > 1:
        raise NotConnected("edge set splits into vertex-separated parts")

    succ: dict[int, list[int]] = defaultdict(list)
    for (i, j) in edges:
        succ[i].append(j)
    for v in succ:
        succ[v].sort(reverse=True)
    start = min(verts)
    stack = [start]
    trail: list[int] = []
    while stack:
        v = stack[-1]
        if succ[v]:
            stack.append(succ[v].pop())
        else:
            trail.append(stack.pop())
    trail.reverse()
    return trail


# -- exact span ---------------------------------------------------------------


@dataclass(frozen=True)
class DecompReport:
    """Exact span report: balance = edge_count - 2*span = sum(len(C)-2) over the witness."""

    edge_count: int
    span: int
    balance: int
    witness: tuple[tuple[int, ...], ...]


def _all_cycles(p: int, edges: list[tuple[int, int]], max_cycles: int) -> list[tuple[int, tuple[int, ...], int]]:
    """Every vertex-simple cycle as (length, vertex tuple, edge mask), sorted.

    Cycles are rooted at their least vertex, so each appears exactly once.
    """
    eidx = {e: k for k, e in enumerate(edges)}
    succ: dict[int, list[int]] = defaultdict(list)
    for (i, j) in edges:
        succ[i].append(j)
    for v in succ:
        succ[v].sort()
    cycles: list[tuple[int, tuple[int, ...], int]] = []

    def dfs(start: int, v: int, visited: int, path: list[int], mask: int) -> None:
        if len(cycles) > max_cycles:
            raise BudgetExceeded(f"more than {max_cycles} cycles")
        for w in succ[v]:
            if w == start and len(path) >= 3:
                cycles.append((len(path), tuple(path), mask | (1 << eidx[(v, start)])))
            elif w > start and not (visited >> w) & 1:
                path.append(w)
                dfs(start, w, visited | (1 << w), path, mask | (1 << eidx[(v, w)]))
                path.pop()

    for s in sorted(succ):
        dfs(s, s, 1 << s, [s], 0)
    cycles.sort(key=lambda t: (t[0], t[1]))
    return cycles


def span(d: GraphLike, node_budget: int = 50_000_000, cycle_budget: int = 2_000_000) -> DecompReport:
    """Exact maximum decomposition by branch and bound.

    Branches over the cycles through the lexicographically least uncovered
    edge, shortest cycles first (ties by vertex sequence), pruning a branch
    when taken + floor(remaining/3) cannot beat the best decomposition found.
    """
    p, edges = _edge_list(d)
    if not _is_eulerian(p, edges):
        raise NotEulerian("span needs balanced in/out degrees")
    ne = len(edges)
    if ne == 0:
        return DecompReport(0, 0, 0, ())
    cycles = _all_cycles(p, edges, cycle_budget)
    through: list[list[tuple[int, int, int]]] = [[] for _ in range(ne)]
    for ci, (length, _, mask) in enumerate(cycles):
        m = mask
        while m:
            b = m & -m
            through[b.bit_length() - 1].append((length, mask, ci))
            m ^= b
    full = (1 << ne) - 1
    best = -1
    best_stack: tuple[int, ...] = ()
    seen: dict[int, int] = {}
    nodes = 0
    stack: list[int] = []

    def rec(mask: int, cur: int) -> None:
        nonlocal best, best_stack, nodes
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded(f"span search exceeded {node_budget} nodes")
        if mask == 0:
            if cur > best:
                best = cur
                best_stack = tuple(stack)
            return
        rem = bin(mask).count("1")
        if cur + rem // 3 <= best:
            return
        prev = seen.get(mask, -1)
        if prev >= cur:
            return
        seen[mask] = cur
        least = (mask & -mask).bit_length() - 1
        for length, cmask, ci in through[least]:
            if best >= cur and length > rem - 3 * (best - cur):
                break  # even a perfect 3-cycle tail cannot beat best
            if cmask & mask == cmask:
                stack.append(ci)
                rec(mask ^ cmask, cur + 1)
                stack.pop()

    rec(full, 0)
    witness = tuple(normalize_cycle(cycles[ci][1]) for ci in best_stack)
    return DecompReport(ne, best, ne - 2 * best, witness)


def span_lower_bound(d: GraphLike) -> DecompReport:
    """Bound-only mode: span >= ceil(edges / longest-possible-cycle).

    The witness is the greedy decomposition, whose size is also a valid lower
    bound and is reported when larger; balance here is an upper bound.
    """
    p, edges = _edge_list(d)
    if not _is_eulerian(p, edges):
        raise NotEulerian("span needs balanced in/out degrees")
    ne = len(edges)
    if ne == 0:
        return DecompReport(0, 0, 0, ())
    verts = len({v for e in edges for v in e})
    greedy = cycle_decomposition(EdgeSet(p, edges))
    lb = max(-(-ne // verts), len(greedy))
    return DecompReport(ne, lb, ne - 2 * lb, tuple(greedy))


def balance(d: GraphLike) -> int:
    return span(d).balance


def format_decomposition(report: DecompReport) -> str:
    """Text form: one 'c v1 v2 ... vk' line per cycle, then the report line."""
    lines = ["c " + " ".join(str(v) for v in cyc) for cyc in report.witness]
    lines.append(f"span={report.span} balance={report.balance} edges={report.edge_count}")
    return "\n".join(lines) + "\n"


# -- tournament structure -----------------------------------------------------


def strong_components(g: Digraph) -> list[list[int]]:
    """Maximal strongly connected classes, listed in the induced quotient order.

    For a tournament the condensation is a total order ([i] -> [j] for listed
    i before j); for general digraphs the classes come in a topological order
    of the condensation with ties by least vertex.
    """
    p = g.p
    reach = [g.rows[i] | (1 << i) for i in range(p)]
    changed = True
    while changed:
        changed = False
        for i in range(p):
            acc = reach[i]
            m = reach[i]
            while m:
                b = m & -m
                acc |= reach[b.bit_length() - 1]
                m ^= b
            if acc != reach[i]:
                reach[i] = acc
                changed = True
    comp_of = [-1] * p
    comps: list[list[int]] = []
    for v in range(p):
        if comp_of[v] >= 0:
            continue
        members = [w for w in range(p) if (reach[v] >> w) & 1 and (reach[w] >> v) & 1]
        for w in members:
            comp_of[w] = len(comps)
        comps.append(members)
    # topological order of the condensation: class A before B iff B unreachable from... A reaches B
    def key(c: list[int]) -> tuple[int, int]:
        r = 0
        for v in c:
            r |= reach[v]
        return (-bin(r).count("1"), min(c))

    comps.sort(key=key)
    return comps


def cycle_through(g: Tournament, v: int, length: int) -> tuple[int, ...]:
    """A cycle of the requested length through v, grown by the insertion argument.

    Needs a strong tournament with p > 1 and 3 <= length <= p.
    """
    p = g.p
    if not (0 <= v < p):
        raise BadLength(f"vertex {v} out of range")
    if p <= 1 or not (3 <= length <= p):
        raise BadLength(f"no {length}-cycle in a tournament on {p} vertices")
    if len(strong_components(g)) != 1:
        raise NotStrong("tournament is not strong")
    # least 3-cycle through v
    cyc: Optional[list[int]] = None
    for j1 in g.out_set(v):
        for j2 in g.in_set(v):
            if g.has_edge(j1, j2):
                cyc = [v, j1, j2]
                break
        if cyc:
            break
    if cyc is None:
        raise NotStrong("no 3-cycle through vertex")  # impossible in a strong tournament
    while len(cyc) < length:
        on = set(cyc)
        r = len(cyc)
        inserted = False
        for j in range(p):
            if j in on:
                continue
            outs = [k for k, u in enumerate(cyc) if g.has_edge(j, u)]
            ins = [k for k, u in enumerate(cyc) if g.has_edge(u, j)]
            if outs and ins:
                # rotate so position 0 beats j, insert j after the last
                # consecutive beats-j prefix
                k0 = min(ins)
                rot = cyc[k0:] + cyc[:k0]
                s = 0
                while s < r and g.has_edge(rot[s], j):
                    s += 1
                cyc = rot[:s] + [j] + rot[s:]
                inserted = True
                break
        if inserted:
            continue
        # every outside vertex beats the whole cycle or loses to all of it
        A = [j for j in range(p) if j not in on and all(g.has_edge(u, j) for u in cyc)]
        B = [j for j in range(p) if j not in on and all(g.has_edge(j, u) for u in cyc)]
        pair = None
        for u in A:
            for w in B:
                if g.has_edge(u, w):
                    pair = (u, w)
                    break
            if pair:
                break
        if pair is None:
            raise NotStrong("tournament is not strong")  # defensive; cannot happen
        u, w = pair
        k0 = 0 if cyc[1] != v else 1
        rot = cyc[k0:] + cyc[:k0]
        cyc = [rot[0], u, w] + rot[2:]
    return normalize_cycle(cyc)


def is_order(g: Tournament) -> Optional[list[int]]:
    """Ordering witness [first, ..., last] (earlier beats later) iff g is transitive."""
    sc = scores(g)
    if sc != tuple(range(g.p)):
        return None
    order = sorted(range(g.p), key=lambda v: -g.out_degree(v))
    for a in range(g.p):
        for b in range(a + 1, g.p):
            if not g.has_edge(order[a], order[b]):
                return None
    return order


@dataclass(frozen=True)
class ThreeCycleStats:
    per_vertex: tuple[int, ...]
    total: int
    formula_total: int


def three_cycle_stats(g: Tournament) -> ThreeCycleStats:
    """3-cycle counts by direct enumeration plus the score-vector formula.

    For a game of size 2n+1 each vertex lies in n(n+1)/2 3-cycles and the
    total is (2n+1)n(n+1)/6.
    """
    p = g.p
    per = []
    for i in range(p):
        c = 0
        for j in _bits(g.rows[i]):
            c += bin(g.rows[j] & g._cols[i]).count("1")
        per.append(c)
    total = sum(per) // 3
    s2 = sum(g.out_degree(i) ** 2 for i in range(p))
    num = p * (p - 1) * (2 * p - 1) - 6 * s2
    if num % 12:
        raise InvariantViolation("3-cycle formula is not an integer")
    return ThreeCycleStats(tuple(per), total, num // 12)


def three_cycles(g: Digraph) -> list[tuple[int, int, int]]:
    """All 3-cycles (a,b,c), a minimal, in lexicographic order."""
    out = []
    for a in range(g.p):
        for b in _bits(g.rows[a]):
            if b < a:
                continue
            for c in _bits(g.rows[b] & g._cols[a]):
                if c > a:
                    out.append((a, b, c))
    out.sort()
    return out


def steiner_decomposition(g: Game) -> Optional[list[tuple[int, int, int]]]:
    """Exact-cover search for a decomposition of a game into 3-cycles.

    Returns a witness (automatically a maximum decomposition, with balance
    n(2n+1)/3) or None when the game is not Steiner.
    """
    if not isinstance(g, Game):
        raise InvariantViolation("steiner decomposition needs a game")
    edges = sorted(g.edges())
    if len(edges) % 3:
        return None
    eidx = {e: k for k, e in enumerate(edges)}
    tris = three_cycles(g)
    tri_masks = []
    for (a, b, c) in tris:
        tri_masks.append((1 << eidx[(a, b)]) | (1 << eidx[(b, c)]) | (1 << eidx[(c, a)]))
    by_edge: list[list[int]] = [[] for _ in edges]
    for ti, m in enumerate(tri_masks):
        mm = m
        while mm:
            b = mm & -mm
            by_edge[b.bit_length() - 1].append(ti)
            mm ^= b
    full = (1 << len(edges)) - 1
    chosen: list[int] = []

    def rec(mask: int) -> bool:
        if mask == 0:
            return True
        # branch on the uncovered edge with fewest available triangles
        best_e, best_opts = -1, None
        m = mask
        while m:
            b = m & -m
            e = b.bit_length() - 1
            opts = [ti for ti in by_edge[e] if tri_masks[ti] & mask == tri_masks[ti]]
            if best_opts is None or len(opts) < len(best_opts):
                best_e, best_opts = e, opts
                if not opts:
                    return False
            m ^= b
        for ti in best_opts:  # type: ignore[union-attr]
            chosen.append(ti)
            if rec(mask ^ tri_masks[ti]):
                return True
            chosen.pop()
        return False

    if rec(full):
        return sorted(tris[ti] for ti in chosen)
    return None


def count_eulerian_subgraphs(g: Tournament, budget: int = 1 << 24) -> int:
    """Number of Eulerian subgraphs (including the empty one).

    Equals the number of tournaments with the same scores, hence for a game
    the number of labeled games of its size.  Meet-in-the-middle over edge
    subsets keyed by degree-balance vectors; raises TooLarge when either
    half exceeds the budget.
    """
    p = g.p
    edges = sorted(g.edges())
    ne = len(edges)
    half = ne // 2
    if 1 << max(half, ne - half) > budget:
        raise TooLarge(f"{ne} edges exceeds the counting budget")

    def table(es: list[tuple[int, int]]) -> dict[tuple[int, ...], int]:
        out: dict[tuple[int, ...], int] = defaultdict(int)
        n = len(es)
        bal = [0] * p
        # Gray-code walk so each step flips one edge
        prev = 0
        out[tuple(bal)] += 1
        for k in range(1, 1 << n):
            gray = k ^ (k >> 1)
            bit = (gray ^ prev).bit_length() - 1
            u, v = es[bit]
            if (gray >> bit) & 1:
                bal[u] += 1
                bal[v] -= 1
            else:
                bal[u] -= 1
                bal[v] += 1
            prev = gray
            out[tuple(bal)] += 1
        return out

    ta = table(edges[:half])
    tb = table(edges[half:])
    total = 0
    for key, c in ta.items():
        neg = tuple(-x for x in key)
        if neg in tb:
            total += c * tb[neg]
    return total
