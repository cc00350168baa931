"""Pushouts of partial morphisms and minimal pushout complements."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .core import Hypergraph, PathBound, are_isomorphic, within_path_bound
from .morphism import PartialMorphism


@dataclass(frozen=True, eq=False)
class PushoutResult:
    object: Hypergraph
    left_inj: PartialMorphism  # G1 -> object
    right_inj: PartialMorphism  # G2 -> object


@dataclass(frozen=True, eq=False)
class PocResult:
    complement: Hypergraph
    match: PartialMorphism  # A -> complement, total injective
    glue: PartialMorphism  # complement -> G


class _UnionFind:
    def __init__(self) -> None:
        self.parent: Dict = {}

    def add(self, x) -> None:
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # the earlier-inserted root wins; keeps numbering deterministic
            self.parent[rb] = ra


def pushout(phi: PartialMorphism, psi: PartialMorphism) -> PushoutResult:
    """Pushout of ``phi: G0 -> G1`` and ``psi: G0 -> G2``.

    Elements of G1 and G2 are glued along G0; a class is dropped when it
    contains the image of an element on which one of the two morphisms is
    undefined, and edge classes are dropped when attached to a dropped node.
    """
    g0, g1, g2 = phi.source, phi.target, psi.target
    nodes = _UnionFind()
    for v in g1.nodes:
        nodes.add((1, v))
    for v in g2.nodes:
        nodes.add((2, v))
    edges = _UnionFind()
    for e in g1.edges:
        edges.add((1, e))
    for e in g2.edges:
        edges.add((2, e))

    bad_nodes = []
    for v in g0.nodes:
        a, b = phi.node_map.get(v), psi.node_map.get(v)
        if a is not None and b is not None:
            nodes.union((1, a), (2, b))
        elif a is not None:
            bad_nodes.append((1, a))
        elif b is not None:
            bad_nodes.append((2, b))
    bad_edges = []
    for e in g0.edges:
        a, b = phi.edge_map.get(e), psi.edge_map.get(e)
        if a is not None and b is not None:
            edges.union((1, a), (2, b))
        elif a is not None:
            bad_edges.append((1, a))
        elif b is not None:
            bad_edges.append((2, b))

    invalid_n = {nodes.find(x) for x in bad_nodes}
    invalid_e = {edges.find(x) for x in bad_edges}

    node_id: Dict = {}
    for x in nodes.parent:
        r = nodes.find(x)
        if r not in invalid_n and r not in node_id:
            node_id[r] = len(node_id)

    def node_of(side: int, v: int) -> Optional[int]:
        return node_id.get(nodes.find((side, v)))

    edge_id: Dict = {}
    edge_data: Dict[int, Tuple[str, Tuple[int, ...]]] = {}
    for x in edges.parent:
        r = edges.find(x)
        if r in invalid_e or r in edge_id:
            continue
        side, e = x
        lab, conn = (g1 if side == 1 else g2).edges[e]
        image = [node_of(side, v) for v in conn]
        if any(w is None for w in image):
            invalid_e.add(r)
            continue
        edge_id[r] = len(edge_id)
        edge_data[edge_id[r]] = (lab, tuple(image))

    obj = Hypergraph(range(len(node_id)), edge_data)

    def inj(side: int, g: Hypergraph) -> PartialMorphism:
        nm = {}
        for v in g.nodes:
            w = node_of(side, v)
            if w is not None:
                nm[v] = w
        em = {}
        for e in g.edges:
            r = edges.find((side, e))
            if r in edge_id:
                em[e] = edge_id[r]
        return PartialMorphism(g, obj, nm, em)

    return PushoutResult(obj, inj(1, g1), inj(2, g2))


def _forced_iso(
    ref: PushoutResult, left: PartialMorphism, right: PartialMorphism, candidate: Hypergraph
) -> bool:
    """Is there an iso h: ref.object -> candidate with h.ref.left = left, h.ref.right = right?

    Every element of a pushout object is hit by one of the injections, so h is
    determined; we only check it is a well-defined structure-preserving bijection.
    """
    hn: Dict[int, int] = {}
    he: Dict[int, int] = {}
    for inj, other in ((ref.left_inj, left), (ref.right_inj, right)):
        if set(inj.node_map) != set(other.node_map) or set(inj.edge_map) != set(other.edge_map):
            return False
        for v, w in inj.node_map.items():
            if hn.setdefault(w, other.node_map[v]) != other.node_map[v]:
                return False
        for e, f in inj.edge_map.items():
            if he.setdefault(f, other.edge_map[e]) != other.edge_map[e]:
                return False
    obj = ref.object
    if len(hn) != len(obj.nodes) or len(he) != len(obj.edges):
        return False
    if len(set(hn.values())) != len(hn) or len(set(he.values())) != len(he):
        return False
    if set(hn.values()) != set(candidate.nodes) or set(he.values()) != set(candidate.edges):
        return False
    for e, (lab, conn) in obj.edges.items():
        clab, cconn = candidate.edges[he[e]]
        if clab != lab or tuple(hn[v] for v in conn) != cconn:
            return False
    return True


def is_pushout(phi: PartialMorphism, psi: PartialMorphism, candidate: PushoutResult) -> bool:
    """Check ``candidate`` against the pushout of ``phi`` and ``psi``."""
    if candidate.left_inj.source is not phi.target and candidate.left_inj.source != phi.target:
        return False
    if candidate.right_inj.source is not psi.target and candidate.right_inj.source != psi.target:
        return False
    if not (candidate.left_inj.is_valid() and candidate.right_inj.is_valid()):
        return False
    ref = pushout(phi, psi)
    return _forced_iso(ref, candidate.left_inj, candidate.right_inj, candidate.object)


def verify_complement(delta: PartialMorphism, comatch: PartialMorphism, poc: PocResult) -> bool:
    """Does ``poc`` complete ``delta`` and ``comatch`` to a pushout square with object G?"""
    if not poc.match.is_match() or not poc.glue.is_valid():
        return False
    ref = pushout(delta, poc.match)
    return _forced_iso(ref, comatch, poc.glue, comatch.target)


def minimal_pushout_complements(
    delta: PartialMorphism,
    comatch: PartialMorphism,
    path_bound: Optional[PathBound] = None,
    verify: bool = True,
) -> List[PocResult]:
    """Minimal pushout complements of ``delta: A -> B`` and ``comatch: B -> G``.

    The complement consists of a copy of A plus one context element for each
    element of G outside the image of the co-match. A context edge attached to
    a co-matched node must be re-attached to some preimage of that node in A;
    every choice gives one candidate. Complements with further (deleted)
    context edges are never minimal, so they are not generated.
    """
    A, B, G = delta.source, delta.target, comatch.target
    inv_nodes = {w: b for b, w in comatch.node_map.items()}
    img_edges = set(comatch.edge_map.values())
    pre: Dict[int, List[int]] = {b: [] for b in B.nodes}
    for x in A.nodes:
        b = delta.node_map.get(x)
        if b is not None:
            pre[b].append(x)

    ctx_nodes = [v for v in G.nodes if v not in inv_nodes]
    ctx_edges = [e for e in G.edges if e not in img_edges]

    # complement ids: A nodes, then context nodes; A edges, then context edges
    a_node = {x: i for i, x in enumerate(A.nodes)}
    c_node = {v: len(a_node) + i for i, v in enumerate(ctx_nodes)}
    a_edge = {e: i for i, e in enumerate(A.edges)}
    c_edge = {e: len(a_edge) + i for i, e in enumerate(ctx_edges)}

    slots: List[Tuple[int, int]] = []  # (context edge, position) needing a choice
    options: List[List[int]] = []
    for e in ctx_edges:
        for i, v in enumerate(G.edges[e][1]):
            if v in inv_nodes:
                choice = [a_node[x] for x in pre[inv_nodes[v]]]
                if not choice:
                    return []
                slots.append((e, i))
                options.append(choice)

    base_edges = {a_edge[e]: (lab, tuple(a_node[v] for v in conn)) for e, (lab, conn) in A.edges.items()}
    glue_nodes = {}
    for x in A.nodes:
        b = delta.node_map.get(x)
        if b is not None:
            glue_nodes[a_node[x]] = comatch.node_map[b]
    for v in ctx_nodes:
        glue_nodes[c_node[v]] = v
    glue_edges = {}
    for e in A.edges:
        b = delta.edge_map.get(e)
        if b is not None:
            glue_edges[a_edge[e]] = comatch.edge_map[b]
    for e in ctx_edges:
        glue_edges[c_edge[e]] = e

    results = []
    nodes = list(a_node.values()) + list(c_node.values())
    for pick in itertools.product(*options):
        chosen = dict(zip(slots, pick))
        edges = dict(base_edges)
        for e in ctx_edges:
            lab, conn = G.edges[e]
            edges[c_edge[e]] = (
                lab,
                tuple(chosen[(e, i)] if v in inv_nodes else c_node[v] for i, v in enumerate(conn)),
            )
        comp = Hypergraph(nodes, edges)
        if path_bound is not None and not within_path_bound(comp, path_bound):
            continue
        poc = PocResult(
            comp,
            PartialMorphism(A, comp, dict(a_node), dict(a_edge)),
            PartialMorphism(comp, G, glue_nodes, glue_edges),
        )
        if verify and not verify_complement(delta, comatch, poc):
            raise AssertionError("constructed complement does not close the pushout square")
        if any(r.complement.invariant() == comp.invariant() and are_isomorphic(r.complement, comp) for r in results):
            continue
        results.append(poc)
    return results
