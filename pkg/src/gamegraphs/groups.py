"""Finite groups of odd order, game subsets, group games, and homogeneous games.

Groups are bare Cayley tables with identity index 0; all the library-scale
examples have order at most 27, so exhaustive validation is cheap.  A game
subset A picks one element from each inverse pair, and its group game
Gamma[A] has an edge i -> j exactly when i^-1 j lies in A.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations as iter_permutations
from itertools import product
from math import gcd
from typing import Iterable, Iterator, Sequence

from .core import Digraph, Game, Permutation, from_rows, relabel, restrict
from .errors import (
    BadAction,
    BadPrime,
    EvenOrder,
    EvenOrderAction,
    EvenOrderSubgroup,
    ExtraAutomorphisms,
    InvariantViolation,
    NotGameSubset,
    NotPairSubset,
    NotSubgroup,
    TooLarge,
)


class FiniteGroup:
    """Group given by its Cayley table; element 0 is the identity."""

    __slots__ = ("m", "table", "inv")

    def __init__(self, table: Sequence[Sequence[int]]):
        m = len(table)
        tab = tuple(tuple(row) for row in table)
        for row in tab:
            if len(row) != m or sorted(row) != list(range(m)):
                raise InvariantViolation("Cayley table rows must be permutations")
        for i in range(m):
            if tab[0][i] != i or tab[i][0] != i:
                raise InvariantViolation("element 0 is not a two-sided identity")
        inv = [-1] * m
        for i in range(m):
            for j in range(m):
                if tab[i][j] == 0:
                    inv[i] = j
        if any(v < 0 for v in inv) or any(tab[inv[i]][i] != 0 for i in range(m)):
            raise InvariantViolation("missing inverses")
        for i in range(m):
            for j in range(m):
                for k in range(m):
                    if tab[tab[i][j]][k] != tab[i][tab[j][k]]:
                        raise InvariantViolation("table is not associative")
        self.m = m
        self.table = tab
        self.inv = tuple(inv)

    def mult(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inverse(self, i: int) -> int:
        return self.inv[i]

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != 0:
            x = self.mult(x, i)
            k += 1
        return k

    def is_subgroup(self, elems: Iterable[int]) -> bool:
        s = set(elems)
        return 0 in s and all(self.mult(a, b) in s for a in s for b in s)

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.m})"


def cyclic_group(m: int) -> FiniteGroup:
    return FiniteGroup([[(i + j) % m for j in range(m)] for i in range(m)])


def direct_product(g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
    """Product group; element (i, j) gets index i*|G2| + j."""
    m1, m2 = g1.m, g2.m
    tab = [[0] * (m1 * m2) for _ in range(m1 * m2)]
    for a1, a2, b1, b2 in product(range(m1), range(m2), range(m1), range(m2)):
        tab[a1 * m2 + a2][b1 * m2 + b2] = g1.mult(a1, b1) * m2 + g2.mult(a2, b2)
    return FiniteGroup(tab)


def semidirect_cyclic(q: int, p: int, a: int) -> FiniteGroup:
    """Z_q acting on Z_p by multiplication by a; needs a^q = 1 mod p.

    Element (x, y) has index x*p + y and (x1,y1)(x2,y2) = (x1+x2, y1*a^x2 + y2).
    """
    if gcd(a, p) != 1 or pow(a, q, p) != 1:
        raise BadAction(f"{a}^{q} != 1 mod {p}")
    tab = [[0] * (q * p) for _ in range(q * p)]
    for x1, y1, x2, y2 in product(range(q), range(p), range(q), range(p)):
        tab[x1 * p + y1][x2 * p + y2] = ((x1 + x2) % q) * p + (y1 * pow(a, x2, p) + y2) % p
    return FiniteGroup(tab)


def euler_phi(m: int) -> int:
    return len(units(m))


def units(m: int) -> tuple[int, ...]:
    if m < 1:
        raise InvariantViolation("modulus must be positive")
    if m == 1:
        return (0,)
    return tuple(i for i in range(1, m) if gcd(i, m) == 1)


def is_fermat_square_free(m: int) -> bool:
    """True iff m is a square-free product of Fermat primes.

    Equivalent to phi(m) being a power of two; both sides are computed and
    compared as a cross-check.
    """
    if m <= 1 or m % 2 == 0:
        raise InvariantViolation("needs an odd number > 1")
    x, factors = m, {}
    d = 3
    while d * d <= x:
        while x % d == 0:
            factors[d] = factors.get(d, 0) + 1
            x //= d
        d += 2
    if x > 1:
        factors[x] = factors.get(x, 0) + 1
    direct = all(e == 1 for e in factors.values()) and all(
        (q - 1) & (q - 2) == 0 for q in factors
    )
    phi = euler_phi(m)
    assert direct == (phi & (phi - 1) == 0), "Fermat criterion out of step with phi"
    return direct


# -- game subsets --------------------------------------------------------------


class GameSubset:
    """Subset A with e not in A and A disjoint from A^-1, stored as a bitmask.

    A full game subset has |A| = (|G|-1)/2 so that {e}, A, A^-1 partition G;
    anything smaller is just a graph subset.
    """

    __slots__ = ("group", "mask")

    def __init__(self, group: FiniteGroup, mask_or_elems):
        mask = mask_or_elems if isinstance(mask_or_elems, int) else sum(
            1 << e for e in mask_or_elems
        )
        if mask & 1:
            raise NotGameSubset("identity cannot belong to a graph subset")
        if mask >> group.m:
            raise NotGameSubset("element out of range")
        for e in _mask_bits(mask):
            if (mask >> group.inverse(e)) & 1:
                raise NotGameSubset(f"{e} and its inverse both present")
        self.group = group
        self.mask = mask

    def elements(self) -> tuple[int, ...]:
        return tuple(_mask_bits(self.mask))

    def __contains__(self, e: int) -> bool:
        return bool((self.mask >> e) & 1)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    @property
    def is_full(self) -> bool:
        return 2 * len(self) == self.group.m - 1

    def inverse_subset(self) -> "GameSubset":
        return GameSubset(self.group, [self.group.inverse(e) for e in self.elements()])

    def apply(self, xi: Permutation) -> "GameSubset":
        return GameSubset(self.group, [xi(e) for e in self.elements()])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GameSubset)
            and self.group == other.group
            and self.mask == other.mask
        )

    def __hash__(self) -> int:
        return hash((self.group, self.mask))

    def __repr__(self) -> str:
        return f"GameSubset({sorted(self.elements())} of order-{self.group.m} group)"


def _mask_bits(mask: int) -> Iterator[int]:
    while mask:
        b = mask & -mask
        yield b.bit_length() - 1
        mask ^= b


def enumerate_game_subsets(G: FiniteGroup) -> list[GameSubset]:
    """All 2^((m-1)/2) game subsets, ascending by bitmask."""
    if G.m % 2 == 0:
        raise EvenOrder("game subsets need a group of odd order")
    pairs = []
    seen = set()
    for e in range(1, G.m):
        if e in seen:
            continue
        seen.add(e)
        seen.add(G.inverse(e))
        pairs.append((e, G.inverse(e)))
    masks = [0]
    for (a, b) in pairs:
        masks = [m | (1 << c) for m in masks for c in (a, b)]
    return [GameSubset(G, m) for m in sorted(masks)]


def group_game(G: FiniteGroup, A: GameSubset) -> Game:
    """Gamma[A]: edge i -> j iff i^-1 j in A.  Every left translation is an automorphism."""
    if A.group != G:
        raise NotGameSubset("subset belongs to a different group")
    if not A.is_full:
        raise NotGameSubset("subset does not split every inverse pair")
    rows = [0] * G.m
    for i in range(G.m):
        for j in range(G.m):
            if i != j and G.mult(G.inverse(i), j) in A:
                rows[i] |= 1 << j
    g = from_rows(G.m, rows)
    assert isinstance(g, Game)
    return g


def group_digraph(G: FiniteGroup, A: GameSubset) -> Digraph:
    """Gamma[A] for a graph subset that need not be full."""
    rows = [0] * G.m
    for i in range(G.m):
        for j in range(G.m):
            if i != j and G.mult(G.inverse(i), j) in A:
                rows[i] |= 1 << j
    return from_rows(G.m, rows)


def translation_perms(G: FiniteGroup) -> list[Permutation]:
    """Left translations as vertex permutations (automorphisms of every Gamma[A])."""
    return [Permutation([G.mult(k, i) for i in range(G.m)]) for k in range(G.m)]


# -- group automorphisms -------------------------------------------------------


@dataclass(frozen=True)
class GroupAutSet:
    perms: tuple[Permutation, ...]

    @property
    def order(self) -> int:
        return len(self.perms)

    def __iter__(self):
        return iter(self.perms)


def _is_group_automorphism(G: FiniteGroup, xi: Permutation) -> bool:
    return all(
        xi(G.mult(i, j)) == G.mult(xi(i), xi(j)) for i in range(G.m) for j in range(G.m)
    )


def multiplication_map(m: int, a: int) -> Permutation:
    return Permutation([(a * i) % m for i in range(m)])


def group_automorphisms(G: FiniteGroup, brute_limit: int = 9) -> GroupAutSet:
    """All Cayley-table-preserving bijections.

    Standard cyclic tables get the analytic answer (multiplication by each
    unit); other groups are brute-forced over bijections fixing the identity,
    capped at order 9.
    """
    if G == cyclic_group(G.m):
        perms = [multiplication_map(G.m, a) for a in units(G.m)] if G.m > 1 else [
            Permutation.identity(1)
        ]
        return GroupAutSet(tuple(sorted(perms, key=lambda q: q.image)))
    if G.m > brute_limit:
        raise TooLarge(f"generic automorphism search capped at order {brute_limit}")
    out = []
    for img in iter_permutations(range(1, G.m)):
        xi = Permutation((0,) + img)
        if _is_group_automorphism(G, xi):
            out.append(xi)
    return GroupAutSet(tuple(sorted(out, key=lambda q: q.image)))


def isomorphic_subset_family(G: FiniteGroup, A: GameSubset) -> list[GameSubset]:
    """The game subsets B with Gamma[B] isomorphic to Gamma[A]: exactly {xi(A)}.

    Valid only when the automorphisms of Gamma[A] are the |G| translations;
    otherwise ExtraAutomorphisms is raised.
    """
    from .morph import automorphisms

    game = group_game(G, A)
    auts = automorphisms(game)
    trans = set(translation_perms(G))
    if set(auts.perms) != trans:
        raise ExtraAutomorphisms(
            f"Aut has order {auts.order}, translations only give {len(trans)}"
        )
    family = {A.apply(xi) for xi in group_automorphisms(G)}
    return sorted(family, key=lambda s: s.mask)


def h_invariant_subsets(G: FiniteGroup, H: Iterable[Permutation]) -> list[GameSubset]:
    """Game subsets fixed setwise by every member of an odd-order subgroup H of G*.

    The H-orbits of G \\ {e} come in inverse pairs; choosing one orbit per
    pair gives all 2^(pair count) invariant subsets.
    """
    hperms = list(H)
    if len(hperms) % 2 == 0:
        raise EvenOrderSubgroup("H must have odd order")
    for xi in hperms:
        if not _is_group_automorphism(G, xi):
            raise NotSubgroup("H contains a non-automorphism")
    orbit_of: dict[int, frozenset[int]] = {}
    for e in range(1, G.m):
        if e in orbit_of:
            continue
        orb = {e}
        frontier = [e]
        while frontier:
            x = frontier.pop()
            for xi in hperms:
                y = xi(x)
                if y not in orb:
                    orb.add(y)
                    frontier.append(y)
        fo = frozenset(orb)
        for x in orb:
            orbit_of[x] = fo
    pairs = []
    done = set()
    for e in range(1, G.m):
        orb = orbit_of[e]
        if orb in done:
            continue
        inv_orb = orbit_of[G.inverse(e)]
        if inv_orb == orb:
            raise EvenOrderSubgroup("orbit meets its own inverse; H has even order")
        done.add(orb)
        done.add(inv_orb)
        pairs.append((orb, inv_orb))
    masks = [0]
    for (o1, o2) in pairs:
        m1 = sum(1 << x for x in o1)
        m2 = sum(1 << x for x in o2)
        masks = [m | c for m in masks for c in (m1, m2)]
    subs = [GameSubset(G, m) for m in sorted(masks)]
    for s in subs:
        assert all(s.apply(xi) == s for xi in hperms)
    return subs


def quadratic_residue_subset(p: int) -> GameSubset:
    """Nonzero squares mod p as a game subset of Z_p; needs p prime, p = 3 mod 4."""
    if p < 3 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise BadPrime(f"{p} is not an odd prime")
    if p % 4 != 3:
        raise BadPrime(f"{p} = 1 mod 4: squares meet their negatives")
    squares = sorted({(x * x) % p for x in range(1, p)})
    return GameSubset(cyclic_group(p), squares)


# -- double cosets and homogeneous games ---------------------------------------


@dataclass(frozen=True)
class DoubleCosetPartition:
    """Blocks HiH partitioning G; block_of_inverse pairs each non-H block with its inverse."""

    blocks: tuple[tuple[int, ...], ...]
    inverse_block: tuple[int, ...]

    def block_index(self, e: int) -> int:
        for k, b in enumerate(self.blocks):
            if e in b:
                return k
        raise KeyError(e)


def _check_subgroup(G: FiniteGroup, H: Iterable[int]) -> tuple[int, ...]:
    hs = tuple(sorted(set(H)))
    if not G.is_subgroup(hs):
        raise NotSubgroup(f"{list(hs)} is not closed or misses the identity")
    return hs


def double_cosets(G: FiniteGroup, H: Iterable[int]) -> DoubleCosetPartition:
    """The HiH partition; for i outside H the blocks of i and i^-1 are distinct."""
    hs = _check_subgroup(G, H)
    blocks: list[tuple[int, ...]] = []
    assigned: dict[int, int] = {}
    for i in range(G.m):
        if i in assigned:
            continue
        blk = sorted({G.mult(G.mult(h1, i), h2) for h1 in hs for h2 in hs})
        idx = len(blocks)
        blocks.append(tuple(blk))
        for x in blk:
            assigned[x] = idx
    invb = tuple(assigned[G.inverse(b[0])] for b in blocks)
    return DoubleCosetPartition(tuple(blocks), invb)


def subgroup_group(G: FiniteGroup, H: Iterable[int]) -> tuple[FiniteGroup, list[int]]:
    """H as a FiniteGroup in its own right, plus the H-index -> G-element list."""
    hs = list(_check_subgroup(G, H))
    pos = {e: k for k, e in enumerate(hs)}
    tab = [[pos[G.mult(a, b)] for b in hs] for a in hs]
    return FiniteGroup(tab), hs


def pair_game_subsets(G: FiniteGroup, H: Iterable[int]) -> list[GameSubset]:
    """Game subsets A for (G, H): i in A\\H forces HiH inside A, and A meets H
    in a game subset of H.  There are 2^(d+k) of them for 2d non-H double
    cosets and |H| = 2k+1."""
    if G.m % 2 == 0:
        raise EvenOrder("needs odd group order")
    hs = _check_subgroup(G, H)
    if len(hs) % 2 == 0:
        raise EvenOrder("needs odd subgroup order")
    dc = double_cosets(G, hs)
    pair_choices: list[tuple[int, int]] = []
    seen = set()
    for k, blk in enumerate(dc.blocks):
        if blk[0] in hs or k in seen:
            continue
        seen.add(k)
        seen.add(dc.inverse_block[k])
        pair_choices.append((k, dc.inverse_block[k]))
    Hgrp, hlist = subgroup_group(G, hs)
    base_subsets = enumerate_game_subsets(Hgrp)
    out = []
    for a0 in base_subsets:
        m0 = sum(1 << hlist[e] for e in a0.elements())
        masks = [m0]
        for (k1, k2) in pair_choices:
            b1 = sum(1 << x for x in dc.blocks[k1])
            b2 = sum(1 << x for x in dc.blocks[k2])
            masks = [m | c for m in masks for c in (b1, b2)]
        out.extend(masks)
    return [GameSubset(G, m) for m in sorted(out)]


def is_pair_game_subset(G: FiniteGroup, H: Iterable[int], A: GameSubset) -> bool:
    hs = set(_check_subgroup(G, H))
    if not A.is_full:
        return False
    elems = set(A.elements())
    for i in elems - hs:
        blk = {G.mult(G.mult(h1, i), h2) for h1 in hs for h2 in hs}
        if not blk <= elems:
            return False
    inter = elems & hs
    return 2 * len(inter) == len(hs) - 1 and all(G.inverse(x) not in inter for x in inter)


def quotient_game(
    G: FiniteGroup, H: Iterable[int], A: GameSubset
) -> tuple[Game, list[tuple[int, ...]], list[int]]:
    """The homogeneous game Gamma[A/H] on the left cosets G/H.

    Returns (game, cosets sorted by least member, projection element->coset).
    The projection is a surjective morphism from Gamma[A], and every left
    translation descends to an automorphism.
    """
    hs = _check_subgroup(G, H)
    if not is_pair_game_subset(G, hs, A):
        raise NotPairSubset("A is not a game subset for (G, H)")
    cosets_set = {tuple(sorted(G.mult(i, h) for h in hs)) for i in range(G.m)}
    cosets = sorted(cosets_set)
    proj = [0] * G.m
    for k, c in enumerate(cosets):
        for x in c:
            proj[x] = k
    elems = set(A.elements())
    rows = [0] * len(cosets)
    for a, ca in enumerate(cosets):
        for b, cb in enumerate(cosets):
            if a != b and G.mult(G.inverse(ca[0]), cb[0]) in elems:
                rows[a] |= 1 << b
    g = from_rows(len(cosets), rows)
    assert isinstance(g, Game)
    return g, cosets, proj


def lex_factorization_check(G: FiniteGroup, H: Iterable[int], A: GameSubset) -> Permutation:
    """Explicit isomorphism Gamma[A/H] lex Gamma[A cap H] -> Gamma[A].

    The coset section takes the minimum-index representative; the witness is
    verified edge by edge before being returned.
    """
    from .construct import lex_product

    hs = _check_subgroup(G, H)
    if not is_pair_game_subset(G, hs, A):
        raise NotPairSubset("A is not a game subset for (G, H)")
    quotient, cosets, _ = quotient_game(G, hs, A)
    Hgrp, hlist = subgroup_group(G, hs)
    inner = GameSubset(Hgrp, [hlist.index(x) for x in A.elements() if x in set(hs)])
    fiber = group_game(Hgrp, inner)
    prod = lex_product(quotient, fiber)
    image = [0] * G.m
    for x, coset in enumerate(cosets):
        rep = coset[0]
        for hk, h in enumerate(hlist):
            image[x * len(hlist) + hk] = G.mult(rep, h)
    rho = Permutation(image)
    target = group_game(G, A)
    if relabel(prod, rho) != target:
        raise NotPairSubset("section map fails to carry the product onto Gamma[A]")
    return rho


# -- group actions on games -----------------------------------------------------


@dataclass(frozen=True)
class OrbitSubgameReport:
    orbit: tuple[int, ...]
    restriction: Game
    quotient: Game
    witness: Permutation  # quotient -> restriction (on restricted indices)
    pair_subset: GameSubset


def orbit_subgame(g: Game, T: FiniteGroup, action: Sequence[Permutation], a: int):
    """Restriction of a game to the orbit Ta, with its homogeneous-game chart.

    The action is a homomorphism T -> Aut(g); the evaluation t -> t(a)
    factors through the isotropy subgroup to an isomorphism from the
    quotient game onto the orbit restriction.
    """
    if T.m % 2 == 0:
        raise EvenOrderAction("acting group must have odd order")
    if len(action) != T.m:
        raise BadAction("need one permutation per group element")
    for t1 in range(T.m):
        if relabel(g, action[t1]) != g:
            raise BadAction(f"element {t1} does not act as an automorphism")
        for t2 in range(T.m):
            if action[T.mult(t1, t2)] != action[t1].compose(action[t2]):
                raise BadAction("action is not a homomorphism")
    H = tuple(sorted(t for t in range(T.m) if action[t](a) == a))
    Hgrp, hlist = subgroup_group(T, H)
    a0 = enumerate_game_subsets(Hgrp)[0]
    mask = sum(1 << hlist[e] for e in a0.elements())
    for t in range(T.m):
        if t not in H and g.has_edge(a, action[t](a)):
            mask |= 1 << t
    A = GameSubset(T, mask)
    quotient, cosets, _ = quotient_game(T, H, A)
    orbit = tuple(sorted({action[t](a) for t in range(T.m)}))
    sub, index = restrict(g, orbit)
    assert isinstance(sub, Game), "orbit restriction must be a subgame"
    image = [index[action[c[0]](a)] for c in cosets]
    rho = Permutation(image)
    assert relabel(quotient, rho) == sub
    return OrbitSubgameReport(orbit, sub, quotient, rho, A)


def cyclic_action_subgame(g: Game, xi: Permutation, a: int) -> OrbitSubgameReport:
    """Specialization: the cyclic group generated by one automorphism acting at a."""
    order = xi.order()
    T = cyclic_group(order)
    powers = [Permutation.identity(g.p)]
    for _ in range(order - 1):
        powers.append(xi.compose(powers[-1]))
    return orbit_subgame(g, T, powers, a)


# -- text formats ----------------------------------------------------------------
#
# group file:  "group <m>" then m lines of m space-separated indices
# subset file: "subset <m> <bitstring>" where character k is element k


def serialize_group(G: FiniteGroup) -> str:
    lines = [f"group {G.m}"]
    for row in G.table:
        lines.append(" ".join(str(x) for x in row))
    return "\n".join(lines) + "\n"


def parse_group(text: str) -> FiniteGroup:
    from .errors import ParseError

    lines = [ln for ln in text.split("\n") if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or not lines[0].startswith("group "):
        raise ParseError("missing 'group <m>' header")
    try:
        m = int(lines[0].split()[1])
        rows = [[int(x) for x in ln.split()] for ln in lines[1 : m + 1]]
    except (ValueError, IndexError):
        raise ParseError("malformed group table")
    if len(rows) != m:
        raise ParseError(f"expected {m} table rows")
    return FiniteGroup(rows)


def serialize_subset(A: GameSubset) -> str:
    bits = "".join("1" if e in A else "0" for e in range(A.group.m))
    return f"subset {A.group.m} {bits}\n"


def parse_subset(text: str, G: FiniteGroup) -> GameSubset:
    from .errors import ParseError

    parts = text.split()
    if len(parts) != 3 or parts[0] != "subset":
        raise ParseError("expected 'subset <m> <bitstring>'")
    m = int(parts[1])
    if m != G.m or len(parts[2]) != m or set(parts[2]) - {"0", "1"}:
        raise ParseError("subset does not match the group")
    return GameSubset(G, [k for k, c in enumerate(parts[2]) if c == "1"])
