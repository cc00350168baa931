"""Brute-force reference computations used to cross-check the symbolic engine."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .core import Hypergraph, PathBound, Signature, are_isomorphic, embeddings, within_path_bound
from .morphism import PartialMorphism, compose, is_subgraph
from .pushout import PocResult, pushout
from .rules import UQRule, successors

GUARD = 8


class GuardError(ValueError):
    pass


@dataclass(frozen=True)
class EnumBounds:
    max_nodes: int
    max_edges: int
    path_bound: Optional[PathBound] = None
    max_elements: Optional[int] = None

    def __post_init__(self) -> None:
        if self.max_nodes < 0 or self.max_edges < 0:
            raise GuardError("bounds must be non-negative")
        if self.total > GUARD:
            raise GuardError(f"enumeration bound {self.total} exceeds the guard of {GUARD} elements")

    @property
    def total(self) -> int:
        t = self.max_nodes + self.max_edges
        return t if self.max_elements is None else min(t, self.max_elements)


def _possible_edges(sig: Signature, n: int) -> List[Tuple[str, Tuple[int, ...]]]:
    out = []
    for lab in sig.labels:
        for conn in itertools.product(range(n), repeat=sig.arity[lab]):
            out.append((lab, conn))
    return out


def enumerate_graphs(sig: Signature, b: EnumBounds) -> Iterator[Hypergraph]:
    """One graph per isomorphism class within the bounds, in a fixed order.

    Nodes are added first, then edge multisets in label order; candidates
    isomorphic to an earlier one are rejected.
    """
    for n in range(b.max_nodes + 1):
        options = _possible_edges(sig, n)
        for m in range(b.max_edges + 1):
            if n + m > b.total:
                break
            seen: Dict[tuple, List[Hypergraph]] = {}
            for combo in itertools.combinations_with_replacement(options, m):
                g = Hypergraph(range(n), dict(enumerate(combo)))
                if b.path_bound is not None and not within_path_bound(g, b.path_bound):
                    continue
                bucket = seen.setdefault(g.invariant(), [])
                if any(are_isomorphic(g, h) for h in bucket):
                    continue
                bucket.append(g)
                yield g


def forward_table(rules: Sequence[UQRule], hosts: Sequence[Hypergraph]) -> List[Tuple[Hypergraph, List[Hypergraph]]]:
    """Every host paired with all of its one-step successors."""
    return [(h, [res for _, _, _, res in successors(rules, h)]) for h in hosts]


def pred_oracle(
    rules: Sequence[UQRule],
    g: Hypergraph,
    b: EnumBounds,
    sig: Optional[Signature] = None,
    table: Optional[List[Tuple[Hypergraph, List[Hypergraph]]]] = None,
) -> List[Hypergraph]:
    """Enumerated graphs having a successor that contains ``g``."""
    if table is None:
        if sig is None:
            raise ValueError("a signature is needed to enumerate hosts")
        table = forward_table(rules, list(enumerate_graphs(sig, b)))
    return [h for h, succ in table if any(is_subgraph(g, s) for s in succ)]


def complement_oracle(
    delta: PartialMorphism,
    comatch: PartialMorphism,
    sig: Signature,
    extra_deleted: int = 1,
) -> List[PocResult]:
    """All pushout complements of ``delta`` and ``comatch`` within a size bound.

    Candidates are ``A`` plus up to ``|G|`` further elements (and up to
    ``extra_deleted`` further edges that the pushout deletes); each one is
    accepted only if its pushout is isomorphic to ``G`` compatibly with the
    co-match.
    """
    A, B, G = delta.source, delta.target, comatch.target
    found: List[PocResult] = []
    g_labels = Counter(lab for lab, _ in G.edges.values())
    n_a = len(A.nodes)
    a_ids = {x: i for i, x in enumerate(A.nodes)}
    a_eids = {e: i for i, e in enumerate(A.edges)}
    a_edges = {a_eids[e]: (lab, tuple(a_ids[v] for v in conn)) for e, (lab, conn) in A.edges.items()}

    def build(n_x: int, extra: Sequence[Tuple[str, Tuple[int, ...]]]) -> Tuple[Hypergraph, PartialMorphism]:
        edges = dict(a_edges)
        for i, ed in enumerate(extra):
            edges[len(a_edges) + i] = ed
        cand = Hypergraph(range(n_a + n_x), edges)
        return cand, PartialMorphism(A, cand, dict(a_ids), dict(a_eids))

    for n_x in range(len(G.nodes) + 1):
        bare, m0 = build(n_x, ())
        po0 = pushout(delta, m0)
        if len(po0.object.nodes) != len(G.nodes):
            continue
        alive = set(po0.right_inj.node_map)
        need = g_labels - Counter(lab for lab, _ in po0.object.edges.values())
        if sum(need.values()) + len(po0.object.edges) != len(G.edges):
            continue
        surviving: Dict[str, List[Tuple[str, Tuple[int, ...]]]] = {}
        dying: List[Tuple[str, Tuple[int, ...]]] = []
        for lab, conn in _possible_edges(sig, n_a + n_x):
            if all(v in alive for v in conn):
                surviving.setdefault(lab, []).append((lab, conn))
            else:
                dying.append((lab, conn))
        per_label = [
            list(itertools.combinations_with_replacement(surviving.get(lab, []), k)) for lab, k in sorted(need.items())
        ]
        extras: List[Tuple] = [()]
        for k in range(1, extra_deleted + 1):
            extras += list(itertools.combinations_with_replacement(dying, k))
        for parts in itertools.product(*per_label):
            chosen = [ed for part in parts for ed in part]
            for dead in extras:
                cand, m = build(n_x, chosen + list(dead))
                po = pushout(delta, m)
                fixed_n = {po.left_inj.node_map[b]: comatch.node_map[b] for b in B.nodes}
                fixed_e = {po.left_inj.edge_map[b]: comatch.edge_map[b] for b in B.edges}
                iso = next(embeddings(po.object, G, fixed_n, fixed_e, bijective=True), None)
                if iso is None:
                    continue
                h = PartialMorphism(po.object, G, iso[0], iso[1])
                found.append(PocResult(cand, m, compose(po.right_inj, h)))
    return found


@dataclass
class Agreement:
    graph: Hypergraph
    missing: List[Hypergraph]  # minimal oracle predecessors the backward step misses
    extra: List[Hypergraph]  # backward results the oracle does not confirm

    @property
    def ok(self) -> bool:
        return not self.missing and not self.extra


def check_agreement(
    rules: Sequence[UQRule],
    g: Hypergraph,
    b: EnumBounds,
    table: List[Tuple[Hypergraph, List[Hypergraph]]],
    cfg=None,
) -> Agreement:
    """Compare the minimised oracle predecessors of ``g`` with the backward step.

    Backward results larger than the enumeration bound are ignored; every
    smaller one must be a minimal oracle predecessor and vice versa.
    """
    from .backward import SearchConfig, backward_step
    from .order import minimize

    cfg = cfg or SearchConfig()
    oracle = minimize(pred_oracle(rules, g, b, table=table)).members
    raw = [h for rho in rules for h in backward_step(rho, g, cfg)]
    ours = [
        h
        for h in minimize(raw).members
        if len(h.nodes) <= b.max_nodes and len(h.edges) <= b.max_edges and h.size <= b.total
    ]
    missing = [h for h in oracle if not any(are_isomorphic(h, x) for x in ours)]
    extra = [h for h in ours if not any(are_isomorphic(h, x) for x in oracle)]
    return Agreement(g, missing, extra)
