"""Partial hypergraph morphisms and the subgraph ordering."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from .core import Hypergraph, are_isomorphic, embeddings, first_embedding


class MorphismError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PartialMorphism:
    source: Hypergraph
    target: Hypergraph
    node_map: Dict[int, int] = field(default_factory=dict)
    edge_map: Dict[int, int] = field(default_factory=dict)

    @classmethod
    def identity(cls, g: Hypergraph) -> "PartialMorphism":
        return cls(g, g, {v: v for v in g.nodes}, {e: e for e in g.edges})

    @classmethod
    def empty(cls, source: Hypergraph, target: Hypergraph) -> "PartialMorphism":
        return cls(source, target, {}, {})

    def violations(self) -> List[str]:
        out = []
        for v, w in self.node_map.items():
            if v not in self.source.incidence:
                out.append(f"node {v} not in source")
            if w not in self.target.incidence:
                out.append(f"node image {w} not in target")
        for e, f in self.edge_map.items():
            if e not in self.source.edges or f not in self.target.edges:
                out.append(f"edge {e}->{f} outside source/target")
                continue
            lab, conn = self.source.edges[e]
            tlab, tconn = self.target.edges[f]
            if lab != tlab:
                out.append(f"edge {e}: label {lab} mapped to {tlab}")
            if any(v not in self.node_map for v in conn):
                out.append(f"edge {e}: defined but an incident node is not")
            elif tuple(self.node_map[v] for v in conn) != tconn:
                out.append(f"edge {e}: connection not preserved")
        return out

    def is_valid(self) -> bool:
        return not self.violations()

    # -- properties -------------------------------------------------------------

    def is_total(self) -> bool:
        return len(self.node_map) == len(self.source.nodes) and len(self.edge_map) == len(self.source.edges)

    def is_injective(self) -> bool:
        return len(set(self.node_map.values())) == len(self.node_map) and len(
            set(self.edge_map.values())
        ) == len(self.edge_map)

    def is_surjective(self) -> bool:
        return set(self.node_map.values()) == set(self.target.nodes) and set(self.edge_map.values()) == set(
            self.target.edges
        )

    def is_match(self) -> bool:
        return self.is_total() and self.is_injective()

    def is_subgraph_witness(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def is_iso(self) -> bool:
        return self.is_total() and self.is_injective() and self.is_surjective()

    # -- algebra ----------------------------------------------------------------

    def then(self, other: "PartialMorphism") -> "PartialMorphism":
        """``other . self``."""
        return compose(self, other)

    def inverse(self) -> "PartialMorphism":
        if not self.is_injective():
            raise MorphismError("only injective morphisms can be inverted")
        return PartialMorphism(
            self.target,
            self.source,
            {w: v for v, w in self.node_map.items()},
            {f: e for e, f in self.edge_map.items()},
        )

    def image_nodes(self) -> set:
        return set(self.node_map.values())

    def image_edges(self) -> set:
        return set(self.edge_map.values())

    def same_as(self, other: "PartialMorphism") -> bool:
        return self.node_map == other.node_map and self.edge_map == other.edge_map

    def __repr__(self) -> str:
        return f"PartialMorphism(nodes={self.node_map}, edges={self.edge_map})"


def compose(f: PartialMorphism, g: PartialMorphism) -> PartialMorphism:
    """``g . f``: defined on x iff f(x) and g(f(x)) are defined."""
    if f.target is not g.source and f.target != g.source:
        raise MorphismError("target of the first morphism is not the source of the second")
    nodes = {v: g.node_map[w] for v, w in f.node_map.items() if w in g.node_map}
    edges = {e: g.edge_map[x] for e, x in f.edge_map.items() if x in g.edge_map}
    return PartialMorphism(f.source, g.target, nodes, edges)


def restrict_codomain(f: PartialMorphism, keep: Hypergraph) -> PartialMorphism:
    """Compose ``f`` with the subgraph witness ``f.target -> keep`` (same ids)."""
    kn = set(keep.nodes)
    nodes = {v: w for v, w in f.node_map.items() if w in kn}
    edges = {e: x for e, x in f.edge_map.items() if x in keep.edges}
    return PartialMorphism(f.source, keep, nodes, edges)


def enumerate_matches(pattern: Hypergraph, host: Hypergraph) -> List[PartialMorphism]:
    """All total injective morphisms ``pattern -> host``."""
    return [PartialMorphism(pattern, host, n, e) for n, e in embeddings(pattern, host)]


def iter_matches(pattern: Hypergraph, host: Hypergraph) -> Iterator[PartialMorphism]:
    for n, e in embeddings(pattern, host):
        yield PartialMorphism(pattern, host, n, e)


def subgraph_leq(g1: Hypergraph, g2: Hypergraph) -> Optional[PartialMorphism]:
    """Witness ``mu: g2 -> g1`` (partial, injective, surjective) iff g1 is a subgraph of g2."""
    if len(g1.nodes) > len(g2.nodes) or len(g1.edges) > len(g2.edges):
        return None
    found = first_embedding(g1, g2)
    if found is None:
        return None
    nodes, edges = found
    return PartialMorphism(g2, g1, {w: v for v, w in nodes.items()}, {f: e for e, f in edges.items()})


def is_subgraph(g1: Hypergraph, g2: Hypergraph) -> bool:
    if len(g1.nodes) > len(g2.nodes) or len(g1.edges) > len(g2.edges):
        return False
    c1 = g1.label_counts()
    c2 = g2.label_counts()
    for lab, n in c1.items():
        if c2.get(lab, 0) < n:
            return False
    return first_embedding(g1, g2) is not None


def delete_element(g: Hypergraph, kind: str, x: int) -> Hypergraph:
    """Remove one edge, or one node together with its incident edges."""
    if kind == "e":
        return g.restrict(g.nodes, [e for e in g.edges if e != x])
    return g.restrict([v for v in g.nodes if v != x], g.edges)


def _children(g: Hypergraph) -> Iterator[Hypergraph]:
    for e in g.edges:
        yield delete_element(g, "e", e)
    for v in g.nodes:
        yield delete_element(g, "v", v)


def subgraph_subsets(g: Hypergraph) -> List[Hypergraph]:
    """Every subgraph of ``g`` as an id-preserving restriction (no iso reduction)."""
    seen = {g}
    order = [g]
    frontier = [g]
    while frontier:
        nxt = []
        for h in frontier:
            for c in _children(h):
                if c not in seen:
                    seen.add(c)
                    order.append(c)
                    nxt.append(c)
        frontier = nxt
    return order


def witness_for(g: Hypergraph, sub: Hypergraph) -> PartialMorphism:
    """The subgraph morphism ``g -> sub`` for an id-preserving restriction."""
    return PartialMorphism(g, sub, {v: v for v in sub.nodes}, {e: e for e in sub.edges})


def enumerate_subgraph_quotients(g: Hypergraph, up_to_iso: bool = False) -> List[Tuple[PartialMorphism, Hypergraph]]:
    """Subgraph morphisms ``mu: g -> R'`` with their targets.

    By default one result per subgraph of ``g`` (i.e. per morphism up to
    renaming of the target). ``up_to_iso`` keeps a single representative for
    each isomorphism class of the target graph.
    """
    subs = subgraph_subsets(g)
    if up_to_iso:
        reps: List[Hypergraph] = []
        buckets: Dict[tuple, List[Hypergraph]] = {}
        for s in subs:
            bucket = buckets.setdefault(s.invariant(), [])
            if any(are_isomorphic(s, t) for t in bucket):
                continue
            bucket.append(s)
            reps.append(s)
        subs = reps
    return [(witness_for(g, s), s) for s in subs]


def incidence_encoding(g: Hypergraph, tag: str) -> Tuple[Hypergraph, Dict[int, int], Dict[int, int]]:
    """Encode ``g`` as a graph of unary/binary edges so that edges become nodes.

    Returns the encoding and the maps from g's nodes/edges to encoding nodes.
    """
    nodes: Dict[int, int] = {}
    edge_nodes: Dict[int, int] = {}
    out_edges = {}
    nid = 0
    for v in g.nodes:
        nodes[v] = nid
        out_edges[len(out_edges)] = (f"{tag}:node", (nid,))
        nid += 1
    for e, (lab, conn) in g.edges.items():
        edge_nodes[e] = nid
        out_edges[len(out_edges)] = (f"{tag}:edge:{lab}", (nid,))
        for i, v in enumerate(conn):
            out_edges[len(out_edges)] = (f"{tag}:at{i}", (nid, nodes[v]))
        nid += 1
    return Hypergraph(range(nid), out_edges), nodes, edge_nodes


def morphism_encoding(f: PartialMorphism, marked_source_nodes=()) -> Hypergraph:
    """A single graph whose isomorphism class is that of the morphism ``f``.

    Nodes listed in ``marked_source_nodes`` get an extra marker so that
    isomorphisms must respect them.
    """
    src, sn, se = incidence_encoding(f.source, "s")
    tgt, tn, te = incidence_encoding(f.target, "t")
    both, rn, _ = src.disjoint_union(tgt)
    edges = dict(both.edges)
    nxt = max(edges, default=-1) + 1
    for v, w in f.node_map.items():
        edges[nxt] = ("map", (sn[v], rn[tn[w]]))
        nxt += 1
    for e, x in f.edge_map.items():
        edges[nxt] = ("map", (se[e], rn[te[x]]))
        nxt += 1
    for v in marked_source_nodes:
        edges[nxt] = ("mark", (sn[v],))
        nxt += 1
    return Hypergraph(both.nodes, edges)
