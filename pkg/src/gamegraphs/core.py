"""Core graph types: digraphs, tournaments, games, edge sets, permutations.

Vertices are dense integers 0..p-1 and adjacency is a tuple of row bitmasks,
so everything fits in machine words for p <= 64 (the design ceiling).  All
values are immutable; equality of graphs is labeled (bit for bit), never up
to isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import (
    AntiparallelPair,
    HeaderClassMismatch,
    InvariantViolation,
    LoopEdge,
    ParseError,
    VertexOutOfRange,
)

MAX_VERTICES = 64


def _bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        b = mask & -mask
        yield b.bit_length() - 1
        mask ^= b


class Digraph:
    """Loop-free digraph with no antiparallel pair: adj and its reverse are disjoint."""

    __slots__ = ("p", "rows", "_cols")

    def __init__(self, p: int, rows: Sequence[int]):
        if not (0 <= p <= MAX_VERTICES):
            raise VertexOutOfRange(f"vertex count {p} outside 0..{MAX_VERTICES}")
        rows = tuple(rows)
        if len(rows) != p:
            raise VertexOutOfRange("row count != p")
        full = (1 << p) - 1
        for i, r in enumerate(rows):
            if r & ~full:
                raise VertexOutOfRange(f"row {i} references vertices >= {p}")
            if (r >> i) & 1:
                raise LoopEdge(f"loop at vertex {i}")
        for i in range(p):
            for j in _bits(rows[i]):
                if (rows[j] >> i) & 1:
                    raise AntiparallelPair(f"both {i}->{j} and {j}->{i}")
        self.p = p
        self.rows = rows
        cols = [0] * p
        for i in range(p):
            for j in _bits(rows[i]):
                cols[j] |= 1 << i
        self._cols = tuple(cols)
        self._check()

    def _check(self) -> None:
        pass

    # -- structure ---------------------------------------------------------

    def has_edge(self, i: int, j: int) -> bool:
        return bool((self.rows[i] >> j) & 1)

    def out_mask(self, i: int) -> int:
        return self.rows[i]

    def in_mask(self, i: int) -> int:
        return self._cols[i]

    def out_set(self, i: int) -> tuple[int, ...]:
        return tuple(_bits(self.rows[i]))

    def in_set(self, i: int) -> tuple[int, ...]:
        return tuple(_bits(self._cols[i]))

    def out_degree(self, i: int) -> int:
        return bin(self.rows[i]).count("1")

    def in_degree(self, i: int) -> int:
        return bin(self._cols[i]).count("1")

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.p) for j in _bits(self.rows[i])]

    def edge_count(self) -> int:
        return sum(bin(r).count("1") for r in self.rows)

    # -- dunder ------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, Digraph) and self.p == other.p and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.p, self.rows))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(p={self.p}, edges={self.edges()})"


class Tournament(Digraph):
    """Complete digraph: exactly one direction per pair of distinct vertices."""

    __slots__ = ()

    def _check(self) -> None:
        for i in range(self.p):
            if self.rows[i] | self._cols[i] != ((1 << self.p) - 1) & ~(1 << i):
                raise InvariantViolation(f"not a tournament: pair through vertex {i} undecided")


class Game(Tournament):
    """Regular tournament on an odd vertex count: every score equals n = (p-1)/2."""

    __slots__ = ()

    def _check(self) -> None:
        super()._check()
        if self.p % 2 == 0:
            raise InvariantViolation(f"game needs odd vertex count, got {self.p}")
        n = (self.p - 1) // 2
        for i in range(self.p):
            if bin(self.rows[i]).count("1") != n:
                raise InvariantViolation(f"not regular: vertex {i} has score != {n}")

    @property
    def n(self) -> int:
        return (self.p - 1) // 2


def from_rows(p: int, rows: Sequence[int]) -> Digraph:
    """Strongest truthful class for the given adjacency rows."""
    g = Digraph(p, rows)
    flags = classify_digraph(g)
    if flags.is_game:
        return Game(p, rows)
    if flags.is_tournament:
        return Tournament(p, rows)
    return g


def make_digraph(p: int, edges: Iterable[tuple[int, int]]) -> Digraph:
    """Digraph with exactly the given edges; validates range, loops, antiparallel pairs."""
    rows = [0] * p
    for (i, j) in edges:
        if not (0 <= i < p and 0 <= j < p):
            raise VertexOutOfRange(f"edge ({i},{j}) outside 0..{p - 1}")
        if i == j:
            raise LoopEdge(f"loop at {i}")
        if (rows[j] >> i) & 1:
            raise AntiparallelPair(f"both {i}->{j} and {j}->{i}")
        rows[i] |= 1 << j
    return from_rows(p, rows)


def circulant(p: int, diffs: Iterable[int]) -> Digraph:
    """Digraph on Z_p with i -> i+d (mod p) for each difference d."""
    ds = sorted({d % p for d in diffs})
    rows = [0] * p
    for i in range(p):
        for d in ds:
            if d:
                rows[i] |= 1 << ((i + d) % p)
    return from_rows(p, rows)


@dataclass(frozen=True)
class DigraphFlags:
    is_tournament: bool
    is_eulerian: bool
    is_game: bool
    is_regular: bool


def classify_digraph(g: Digraph) -> DigraphFlags:
    """Tournament / Eulerian / regular flags; is_game = is_tournament and is_eulerian."""
    full = (1 << g.p) - 1
    tourn = all(g.rows[i] | g._cols[i] == full & ~(1 << i) for i in range(g.p))
    eul = all(g.out_degree(i) == g.in_degree(i) for i in range(g.p))
    degs = {g.out_degree(i) for i in range(g.p)}
    reg = eul and len(degs) <= 1
    return DigraphFlags(tourn, eul, tourn and eul, reg)


def reverse(g: Digraph) -> Digraph:
    """Transpose of the adjacency; an involution preserving all class flags."""
    return from_rows(g.p, g._cols)


def restrict(g: Digraph, J: Iterable[int]) -> tuple[Digraph, dict[int, int]]:
    """Restriction to J, reindexed to 0..|J|-1 in ascending vertex order.

    Returns the restricted graph and the old->new index map.
    """
    verts = sorted(set(J))
    for v in verts:
        if not (0 <= v < g.p):
            raise VertexOutOfRange(f"vertex {v} outside 0..{g.p - 1}")
    index = {v: k for k, v in enumerate(verts)}
    keep = sum(1 << u for u in verts)
    rows = [0] * len(verts)
    for v in verts:
        for w in _bits(g.rows[v] & keep):
            rows[index[v]] |= 1 << index[w]
    return from_rows(len(verts), rows), index


def scores(g: Digraph) -> tuple[int, ...]:
    """Out-degrees in non-decreasing order (sum = p(p-1)/2 for tournaments)."""
    return tuple(sorted(g.out_degree(i) for i in range(g.p)))


def out_degrees(g: Digraph) -> tuple[int, ...]:
    return tuple(g.out_degree(i) for i in range(g.p))


def in_degrees(g: Digraph) -> tuple[int, ...]:
    return tuple(g.in_degree(i) for i in range(g.p))


class Permutation:
    """Bijection on 0..p-1; image[i] is where i gets sent."""

    __slots__ = ("image",)

    def __init__(self, image: Sequence[int]):
        image = tuple(image)
        if sorted(image) != list(range(len(image))):
            raise VertexOutOfRange("not a bijection on 0..p-1")
        self.image = image

    @staticmethod
    def identity(p: int) -> "Permutation":
        return Permutation(range(p))

    def __call__(self, i: int) -> int:
        return self.image[i]

    def __len__(self) -> int:
        return len(self.image)

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self.compose(other))(i) = self(other(i))."""
        return Permutation(tuple(self.image[other.image[i]] for i in range(len(self.image))))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.image)
        for i, j in enumerate(self.image):
            inv[j] = i
        return Permutation(inv)

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycle decomposition; fixed points included as 1-cycles."""
        seen = [False] * len(self.image)
        out = []
        for s in range(len(self.image)):
            if seen[s]:
                continue
            cyc = [s]
            seen[s] = True
            v = self.image[s]
            while v != s:
                cyc.append(v)
                seen[v] = True
                v = self.image[v]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        from math import lcm
        return lcm(*(len(c) for c in self.cycles()))

    def sign(self) -> int:
        return (-1) ** sum(len(c) - 1 for c in self.cycles())

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.image == other.image

    def __hash__(self) -> int:
        return hash(self.image)

    def __repr__(self) -> str:
        return f"Permutation({list(self.image)})"


def relabel(g: Digraph, rho: Permutation) -> Digraph:
    """Image graph: edge (rho(i), rho(j)) iff edge (i, j) in g."""
    if len(rho) != g.p:
        raise VertexOutOfRange("permutation length != p")
    rows = [0] * g.p
    for i in range(g.p):
        for j in _bits(g.rows[i]):
            rows[rho(i)] |= 1 << rho(j)
    return from_rows(g.p, rows)


class EdgeSet:
    """Explicit set of directed edges on 0..p-1; no loops, no antiparallel pair.

    Used for difference graphs and for decomposition inputs.  Disjoint edge
    sets may share vertices.
    """

    __slots__ = ("p", "edges")

    def __init__(self, p: int, edges: Iterable[tuple[int, int]]):
        es = frozenset((int(i), int(j)) for (i, j) in edges)
        for (i, j) in es:
            if not (0 <= i < p and 0 <= j < p):
                raise VertexOutOfRange(f"edge ({i},{j}) outside 0..{p - 1}")
            if i == j:
                raise LoopEdge(f"loop at {i}")
            if (j, i) in es:
                raise AntiparallelPair(f"both {i}->{j} and {j}->{i}")
        self.p = p
        self.edges = es

    @staticmethod
    def from_digraph(g: Digraph) -> "EdgeSet":
        return EdgeSet(g.p, g.edges())

    def to_digraph(self) -> Digraph:
        return make_digraph(self.p, self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, e: tuple[int, int]) -> bool:
        return e in self.edges

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self.edges))

    def reverse(self) -> "EdgeSet":
        return EdgeSet(self.p, ((j, i) for (i, j) in self.edges))

    def union(self, other: "EdgeSet") -> "EdgeSet":
        if other.p != self.p:
            raise VertexOutOfRange("edge sets on different vertex counts")
        return EdgeSet(self.p, self.edges | other.edges)

    def difference(self, other: "EdgeSet") -> "EdgeSet":
        return EdgeSet(self.p, self.edges - other.edges)

    def is_subgraph_of(self, g: Digraph) -> bool:
        return all(g.has_edge(i, j) for (i, j) in self.edges)

    def out_degree(self, v: int) -> int:
        return sum(1 for (i, _) in self.edges if i == v)

    def in_degree(self, v: int) -> int:
        return sum(1 for (_, j) in self.edges if j == v)

    def is_eulerian(self) -> bool:
        bal = [0] * self.p
        for (i, j) in self.edges:
            bal[i] += 1
            bal[j] -= 1
        return all(b == 0 for b in bal)

    def vertices(self) -> tuple[int, ...]:
        """Vertices with at least one incident edge."""
        vs = set()
        for (i, j) in self.edges:
            vs.add(i)
            vs.add(j)
        return tuple(sorted(vs))

    def __eq__(self, other) -> bool:
        return isinstance(other, EdgeSet) and self.p == other.p and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.p, self.edges))

    def __repr__(self) -> str:
        return f"EdgeSet(p={self.p}, edges={sorted(self.edges)})"


# -- text format -------------------------------------------------------------
#
# line 1: "digraph <p>" | "tournament <p>" | "game <p>"
# then p lines of p characters from {0,1}; row i column j = 1 iff i -> j
# lines starting with '#' are comments; LF line endings

_HEADERS = ("digraph", "tournament", "game")


def serialize(g: Digraph) -> str:
    """Bit-exact text form with the strongest truthful header."""
    flags = classify_digraph(g)
    kind = "game" if flags.is_game else ("tournament" if flags.is_tournament else "digraph")
    lines = [f"{kind} {g.p}"]
    for i in range(g.p):
        lines.append("".join("1" if (g.rows[i] >> j) & 1 else "0" for j in range(g.p)))
    return "\n".join(lines) + "\n"


def parse(text: str) -> Digraph:
    """Parse the text format; rejects a header claiming a class the bits do not satisfy."""
    lines = [ln for ln in text.split("\n") if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ParseError("empty input")
    head = lines[0].split()
    if len(head) != 2 or head[0] not in _HEADERS:
        raise ParseError(f"bad header: {lines[0]!r}")
    try:
        p = int(head[1])
    except ValueError:
        raise ParseError(f"bad vertex count: {head[1]!r}")
    if len(lines) != p + 1:
        raise ParseError(f"expected {p} rows, got {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        ln = ln.strip()
        if len(ln) != p or set(ln) - {"0", "1"}:
            raise ParseError(f"bad row: {ln!r}")
        rows.append(sum(1 << j for j, c in enumerate(ln) if c == "1"))
    g = from_rows(p, rows)
    kind = head[0]
    flags = classify_digraph(g)
    if kind == "tournament" and not flags.is_tournament:
        raise HeaderClassMismatch("header says tournament, bits are not")
    if kind == "game" and not flags.is_game:
        raise HeaderClassMismatch("header says game, bits are not")
    return g
