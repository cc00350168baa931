"""Antichains of graphs under the subgraph ordering."""

from __future__ import annotations

from typing import Iterable, Iterator, List

from .core import Hypergraph, are_isomorphic
from .morphism import is_subgraph


class Basis:
    """Pairwise incomparable graphs representing their upward closure."""

    def __init__(self, members: Iterable[Hypergraph] = ()) -> None:
        self.members: List[Hypergraph] = []
        for g in members:
            self.add(g)

    def __iter__(self) -> Iterator[Hypergraph]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def represents(self, g: Hypergraph) -> bool:
        return any(is_subgraph(b, g) for b in self.members)

    def add(self, g: Hypergraph) -> bool:
        """Insert ``g`` unless already represented; drop members above it.

        Returns True if the basis changed.
        """
        if self.represents(g):
            return False
        self.members = [b for b in self.members if not is_subgraph(g, b)]
        self.members.append(g)
        return True

    def copy(self) -> "Basis":
        b = Basis()
        b.members = list(self.members)
        return b


def _size_key(g: Hypergraph):
    return (g.size, len(g.nodes))


def minimize(graphs: Iterable[Hypergraph]) -> Basis:
    """Minimal elements of ``graphs``, one per isomorphism class.

    Smaller graphs are inserted first (stable on input order), which makes the
    result deterministic and saves removals.
    """
    ordered = sorted(graphs, key=_size_key)
    basis = Basis()
    for g in ordered:
        if not basis.represents(g):
            basis.members.append(g)
    return basis


def represented(g: Hypergraph, basis: Iterable[Hypergraph]) -> bool:
    return any(is_subgraph(b, g) for b in basis)


def same_up_to_iso(a: Iterable[Hypergraph], b: Iterable[Hypergraph]) -> bool:
    """Equality of two graph collections as sets of isomorphism classes."""
    a, b = list(a), list(b)
    for x in a:
        if not any(are_isomorphic(x, y) for y in b):
            return False
    for y in b:
        if not any(are_isomorphic(x, y) for x in a):
            return False
    return True
