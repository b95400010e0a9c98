"""Regular tournaments ("games"): decomposition, reversal planning, group
games, isomorphism, and exhaustive atlas machinery."""

from .core import (
    Digraph,
    EdgeSet,
    Game,
    Permutation,
    Tournament,
    circulant,
    classify_digraph,
    make_digraph,
    parse,
    relabel,
    restrict,
    reverse,
    scores,
    serialize,
)
from .errors import DomainError

__all__ = [
    "Digraph",
    "Tournament",
    "Game",
    "EdgeSet",
    "Permutation",
    "DomainError",
    "circulant",
    "classify_digraph",
    "make_digraph",
    "parse",
    "relabel",
    "restrict",
    "reverse",
    "scores",
    "serialize",
]
