"""Difference graphs and 3-cycle reversal planning.

Delta(rho, Pi, Gamma) collects the edges of Pi that rho reverses relative to
Gamma; reversing Delta in Pi recovers Gamma.  Between same-score tournaments
the minimum number of single-3-cycle reversal steps is the balance invariant
beta(Delta), and plans here come in two flavors: greedy (cycle by cycle, at
sum(len-2) steps) and provably optimal (descent, re-solving the span after
every move so each step carries a machine-checked certificate).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Digraph, EdgeSet, Permutation, Tournament, from_rows
from .errors import (
    NotACycle,
    NotSubgraph,
    ParseError,
    ScoreMismatch,
    SizeMismatch,
)
from .eulerian import cycle_decomposition, span, three_cycles


def delta(rho: Permutation, pi: Tournament, gamma: Tournament) -> EdgeSet:
    """Edges of pi that rho sends to reversed edges of gamma."""
    if pi.p != gamma.p or len(rho) != pi.p:
        raise SizeMismatch("graphs and permutation must share one vertex count")
    return EdgeSet(
        pi.p,
        [(i, j) for (i, j) in pi.edges() if gamma.has_edge(rho(j), rho(i))],
    )


def delta_id(pi: Tournament, gamma: Tournament) -> EdgeSet:
    """Delta(Pi, Gamma): the identity-permutation case."""
    return delta(Permutation.identity(pi.p), pi, gamma)


def reverse_subgraph(pi: Digraph, d: EdgeSet) -> Digraph:
    """Pi with d reversed: (Pi minus d) plus d^-1.  Scores survive iff d is Eulerian."""
    if d.p != pi.p:
        raise SizeMismatch("edge set on a different vertex count")
    if not d.is_subgraph_of(pi):
        raise NotSubgraph("edge set is not contained in the graph")
    rows = list(pi.rows)
    for (i, j) in d.edges:
        rows[i] &= ~(1 << j)
        rows[j] |= 1 << i
    return from_rows(pi.p, rows)


# -- plans ---------------------------------------------------------------------


@dataclass(frozen=True)
class ReversalPlan:
    """Ordered moves; each is an oriented 3-cycle (a,b,c) or 4-cycle (a,b,c,d)
    that must be present at its step."""

    moves: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.moves)

    def __iter__(self):
        return iter(self.moves)


def format_plan(plan: ReversalPlan) -> str:
    lines = []
    for mv in plan.moves:
        tag = "r3" if len(mv) == 3 else "r4"
        lines.append(tag + " " + " ".join(str(v) for v in mv))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_plan(text: str) -> ReversalPlan:
    moves = []
    for ln in text.split("\n"):
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        if parts[0] == "r3" and len(parts) == 4:
            moves.append(tuple(int(x) for x in parts[1:]))
        elif parts[0] == "r4" and len(parts) == 5:
            moves.append(tuple(int(x) for x in parts[1:]))
        else:
            raise ParseError(f"bad plan line: {ln!r}")
    return ReversalPlan(tuple(moves))


def _reverse_cycle(g: Digraph, cycle: Sequence[int]) -> Digraph:
    k = len(cycle)
    rows = list(g.rows)
    for t in range(k):
        a, b = cycle[t], cycle[(t + 1) % k]
        if not (rows[a] >> b) & 1:
            raise NotACycle(f"edge {a}->{b} absent at this step")
        rows[a] &= ~(1 << b)
        rows[b] |= 1 << a
    return from_rows(g.p, rows)


def apply_plan(pi: Digraph, plan: ReversalPlan) -> Digraph:
    """Replay a plan, checking each listed cycle exists with its stated orientation."""
    g = pi
    for mv in plan.moves:
        if len(set(mv)) != len(mv):
            raise NotACycle(f"repeated vertex in move {mv}")
        g = _reverse_cycle(g, mv)
    return g


def _cycle_plan_moves(g: Digraph, cycle: tuple[int, ...]) -> tuple[list[tuple[int, ...]], Digraph]:
    """Moves reversing one cycle via 3-cycles, len(cycle) - 2 of them."""
    if len(cycle) == 3:
        return [cycle], _reverse_cycle(g, cycle)
    i1, i2, i3 = cycle[0], cycle[1], cycle[2]
    shorter = (i1,) + cycle[2:]
    if g.has_edge(i1, i3):
        moves, g2 = _cycle_plan_moves(g, shorter)
        tri = (i1, i2, i3)
        return moves + [tri], _reverse_cycle(g2, tri)
    tri = (i1, i2, i3)
    g2 = _reverse_cycle(g, tri)
    moves, g3 = _cycle_plan_moves(g2, shorter)
    return [tri] + moves, g3


def plan_any(pi: Tournament, gamma: Tournament) -> ReversalPlan:
    """A valid (not necessarily minimal) 3-cycle plan from pi to gamma.

    Reverses the cycles of the greedy decomposition of Delta one at a time;
    a single length-l cycle costs l - 2 steps.
    """
    if pi.p != gamma.p:
        raise SizeMismatch("tournaments on different vertex counts")
    d = delta_id(pi, gamma)
    if not d.is_eulerian():
        raise ScoreMismatch("no 3-cycle plan between tournaments with different scores")
    moves: list[tuple[int, ...]] = []
    g: Digraph = pi
    for cycle in cycle_decomposition(d):
        ms, g = _cycle_plan_moves(g, cycle)
        moves.extend(ms)
    assert g == gamma
    return ReversalPlan(tuple(moves))


def plan_optimal(pi: Tournament, gamma: Tournament) -> ReversalPlan:
    """A minimum-length plan: exactly beta(Delta(pi, gamma)) moves.

    Descent: at each step try the 3-cycles of the current tournament in
    lexicographic order and keep the first whose reversal provably lowers
    beta (certified by re-solving the span), which always exists.
    """
    if pi.p != gamma.p:
        raise SizeMismatch("tournaments on different vertex counts")
    d = delta_id(pi, gamma)
    if not d.is_eulerian():
        raise ScoreMismatch("no 3-cycle plan between tournaments with different scores")
    moves: list[tuple[int, ...]] = []
    g: Digraph = pi
    beta = span(d).balance
    while g != gamma:
        found = False
        for tri in three_cycles(g):
            g2 = _reverse_cycle(g, tri)
            b2 = span(delta_id(g2, gamma)).balance
            if b2 == beta - 1:
                moves.append(tri)
                g, beta = g2, b2
                found = True
                break
        assert found, "descent step must exist while the graphs differ"
    return ReversalPlan(tuple(moves))


def parity(pi: Tournament, gamma: Tournament) -> str:
    """Shared parity of |Delta|, beta(Delta) and every plan length."""
    if pi.p != gamma.p:
        raise SizeMismatch("tournaments on different vertex counts")
    return "even" if len(delta_id(pi, gamma)) % 2 == 0 else "odd"


# -- bipartite tournaments ------------------------------------------------------


def _check_bipartite_tournament(g: Digraph, J: Iterable[int], K: Iterable[int]) -> None:
    js, ks = set(J), set(K)
    if js & ks or js | ks != set(range(g.p)):
        raise SizeMismatch("parts must partition the vertices")
    for a in range(g.p):
        for b in range(g.p):
            if a == b:
                continue
            cross = (a in js) != (b in js)
            has = g.has_edge(a, b) or g.has_edge(b, a)
            if cross and not has and a < b:
                raise ScoreMismatch(f"undecided cross pair {a},{b}")
            if not cross and g.has_edge(a, b):
                raise ScoreMismatch(f"edge inside one part: {a}->{b}")


def _cycle_plan_moves_4(g: Digraph, cycle: tuple[int, ...]) -> tuple[list[tuple[int, ...]], Digraph]:
    """Moves reversing one even cycle via 4-cycles, len/2 - 1 of them."""
    if len(cycle) == 4:
        return [cycle], _reverse_cycle(g, cycle)
    i1, i2, i3, i4 = cycle[0], cycle[1], cycle[2], cycle[3]
    shorter = (i1,) + cycle[3:]
    if g.has_edge(i1, i4):
        moves, g2 = _cycle_plan_moves_4(g, shorter)
        quad = (i1, i2, i3, i4)
        return moves + [quad], _reverse_cycle(g2, quad)
    quad = (i1, i2, i3, i4)
    g2 = _reverse_cycle(g, quad)
    moves, g3 = _cycle_plan_moves_4(g2, shorter)
    return [quad] + moves, g3


def bipartite_plan(pi: Digraph, gamma: Digraph, J: Iterable[int], K: Iterable[int]) -> ReversalPlan:
    """A 4-cycle plan between bipartite tournaments on (J, K) with equal scores.

    A single cycle of length 2l costs l - 1 moves.
    """
    if pi.p != gamma.p:
        raise SizeMismatch("graphs on different vertex counts")
    J, K = list(J), list(K)
    _check_bipartite_tournament(pi, J, K)
    _check_bipartite_tournament(gamma, J, K)
    d = EdgeSet(pi.p, [(i, j) for (i, j) in pi.edges() if gamma.has_edge(j, i)])
    if not d.is_eulerian():
        raise ScoreMismatch("parts have unequal scores; no 4-cycle plan exists")
    moves: list[tuple[int, ...]] = []
    g: Digraph = pi
    for cycle in cycle_decomposition(d):
        ms, g = _cycle_plan_moves_4(g, cycle)
        moves.extend(ms)
    assert g == gamma
    return ReversalPlan(tuple(moves))


# -- special cycles -------------------------------------------------------------


@dataclass(frozen=True)
class SpecialCycles:
    near: tuple[tuple[int, int, int], ...]
    far: tuple[tuple[int, int, int], ...]

    @property
    def count(self) -> int:
        return len(self.near) + len(self.far)


def special_cycles(gamma: Tournament, cycle: Sequence[int]) -> SpecialCycles:
    """Near and far 3-cycles of a cycle in gamma, the single-reversal moves
    that shorten the remaining difference when the cycle is to be undone.

    A vertex whose cycle neighbors close up backwards (successor beats
    predecessor) yields the near cycle through it; a far cycle at x rides a
    cycle edge (j, j+1) with x -> j and j+1 -> x, meeting the cycle only there.
    """
    c = tuple(cycle)
    k = len(c)
    if k < 4 or len(set(c)) != k:
        raise NotACycle("need a cycle of length >= 4 with distinct vertices")
    for t in range(k):
        if not gamma.has_edge(c[t], c[(t + 1) % k]):
            raise NotACycle(f"edge {c[t]}->{c[(t + 1) % k]} not in the tournament")
    near = []
    for t in range(k):
        prv, nxt = c[(t - 1) % k], c[(t + 1) % k]
        if gamma.has_edge(nxt, prv):
            near.append((prv, c[t], nxt))
    far = []
    for t in range(k):
        x = c[t]
        for s in range(k):
            if (s - t) % k in (0, k - 1, k - 2, 1):
                continue
            j, jn = c[s], c[(s + 1) % k]
            if gamma.has_edge(x, j) and gamma.has_edge(jn, x):
                far.append((x, j, jn))
    return SpecialCycles(tuple(sorted(near)), tuple(sorted(far)))
