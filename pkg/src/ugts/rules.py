"""Universally quantified rules, their instantiations and forward application."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from .core import Hypergraph, are_isomorphic
from .morphism import PartialMorphism, compose, iter_matches
from .pushout import pushout


@dataclass(frozen=True, eq=False)
class Rule:
    lhs: Hypergraph
    rhs: Hypergraph
    morphism: PartialMorphism


@dataclass(frozen=True, eq=False)
class Quantification:
    p: PartialMorphism  # L -> L_u, total injective
    q: PartialMorphism  # L_u -> R_u
    name: str = ""


@dataclass(eq=False)
class UQRule:
    name: str
    base: Rule
    quants: List[Quantification] = field(default_factory=list)
    _cache: Dict[Tuple[int, ...], "Instantiation"] = field(default_factory=dict, repr=False)
    _delta_cache: Dict[Tuple[int, ...], list] = field(default_factory=dict, repr=False)
    _qnodes: Optional[Set[int]] = field(default=None, repr=False)

    @property
    def lhs(self) -> Hypergraph:
        return self.base.lhs

    @property
    def rhs(self) -> Hypergraph:
        return self.base.rhs

    def qnodes(self) -> Set[int]:
        if self._qnodes is None:
            self._qnodes = quantified_nodes_of_rule(self)
        return self._qnodes


@dataclass(frozen=True, eq=False)
class Instantiation:
    pi: PartialMorphism  # L -> Lbar, total injective
    gamma: PartialMorphism  # Lbar -> Rbar
    counts: Tuple[int, ...]

    @property
    def lbar(self) -> Hypergraph:
        return self.gamma.source

    @property
    def rbar(self) -> Hypergraph:
        return self.gamma.target

    @property
    def length(self) -> int:
        return sum(self.counts)


def validate_rule(rho: UQRule) -> List[str]:
    problems = [f"rule morphism: {p}" for p in rho.base.morphism.violations()]
    L = rho.lhs
    for i, u in enumerate(rho.quants):
        tag = f"quantification {u.name or i}"
        problems += [f"{tag}: p: {p}" for p in u.p.violations()]
        problems += [f"{tag}: q: {p}" for p in u.q.violations()]
        if u.p.source != L:
            problems.append(f"{tag}: p does not start at the rule's left side")
            continue
        if not u.p.is_match():
            problems.append(f"{tag}: p is not total and injective")
            continue
        q_pre_n: Dict[int, int] = {}
        for w in u.q.node_map.values():
            q_pre_n[w] = q_pre_n.get(w, 0) + 1
        q_pre_e: Dict[int, int] = {}
        for f in u.q.edge_map.values():
            q_pre_e[f] = q_pre_e.get(f, 0) + 1
        for v in L.nodes:
            img = u.q.node_map.get(u.p.node_map[v])
            if img is None:
                problems.append(f"{tag}: q∘p undefined on node {L.node_name(v)}")
            elif q_pre_n[img] != 1:
                problems.append(f"{tag}: q∘p({L.node_name(v)}) has {q_pre_n[img]} preimages")
        for e in L.edges:
            img = u.q.edge_map.get(u.p.edge_map[e])
            if img is None:
                problems.append(f"{tag}: q∘p undefined on edge {e}")
            elif q_pre_e[img] != 1:
                problems.append(f"{tag}: q∘p(edge {e}) has {q_pre_e[img]} preimages")
        if not quantified_nodes(u):
            problems.append(f"{tag}: empty set of quantified nodes")
    return problems


def quantified_nodes(u: Quantification) -> Set[int]:
    """Nodes v of L such that p(v) has an incident edge with no preimage in L."""
    Lu = u.p.target
    image_edges = u.p.image_edges()
    out = set()
    for v, w in u.p.node_map.items():
        if any(e not in image_edges for e in Lu.incident_edges(w)):
            out.add(v)
    return out


def quantified_nodes_of_rule(rho: UQRule) -> Set[int]:
    out: Set[int] = set()
    for u in rho.quants:
        out |= quantified_nodes(u)
    return out


# -- instantiation -------------------------------------------------------------


def base_instantiation(rho: UQRule) -> Instantiation:
    return Instantiation(PartialMorphism.identity(rho.lhs), rho.base.morphism, tuple(0 for _ in rho.quants))


def extend(rho: UQRule, inst: Instantiation, index: int) -> Tuple[Instantiation, PartialMorphism]:
    """One instantiation step with quantification ``index``.

    Returns the new instantiation and the injection of the old right side
    into the new one.
    """
    u = rho.quants[index]
    left = pushout(inst.pi, u.p)
    right = pushout(compose(inst.pi, inst.gamma), compose(u.p, u.q))
    lbar_u = left.object
    # mediating morphism: glue gamma (via the old right side) and q
    nm: Dict[int, int] = {}
    em: Dict[int, int] = {}
    for v, z in left.left_inj.node_map.items():
        y = inst.gamma.node_map.get(v)
        if y is not None and y in right.left_inj.node_map:
            nm[z] = right.left_inj.node_map[y]
    for e, z in left.left_inj.edge_map.items():
        y = inst.gamma.edge_map.get(e)
        if y is not None and y in right.left_inj.edge_map:
            em[z] = right.left_inj.edge_map[y]
    for v, z in left.right_inj.node_map.items():
        y = u.q.node_map.get(v)
        val = right.right_inj.node_map.get(y) if y is not None else None
        if val is not None:
            if nm.setdefault(z, val) != val:
                raise AssertionError("mediating morphism is not well defined")
    for e, z in left.right_inj.edge_map.items():
        y = u.q.edge_map.get(e)
        val = right.right_inj.edge_map.get(y) if y is not None else None
        if val is not None:
            if em.setdefault(z, val) != val:
                raise AssertionError("mediating morphism is not well defined")
    eta = PartialMorphism(lbar_u, right.object, nm, em)
    counts = list(inst.counts)
    counts[index] += 1
    return Instantiation(compose(inst.pi, left.left_inj), eta, tuple(counts)), right.left_inj


def instantiate(rho: UQRule, counts: Sequence[int], order: Optional[Sequence[int]] = None) -> Instantiation:
    """Instantiation with ``counts[i]`` copies of quantification ``i``.

    ``order`` is an explicit sequence of quantification indices; by default
    steps are taken in index order and the result is cached.
    """
    counts = tuple(counts)
    if len(counts) != len(rho.quants):
        raise ValueError("one count per quantification expected")
    if order is None:
        cached = rho._cache.get(counts)
        if cached is not None:
            return cached
        order = [i for i, n in enumerate(counts) for _ in range(n)]
        use_cache = True
    else:
        if sorted(order) != sorted(i for i, n in enumerate(counts) for _ in range(n)):
            raise ValueError("order does not agree with counts")
        use_cache = False
    inst = base_instantiation(rho)
    for i in order:
        inst, _ = extend(rho, inst, i)
    if use_cache:
        rho._cache.setdefault(counts, inst)
    return inst


def count_vectors(n_quants: int, total: int) -> Iterator[Tuple[int, ...]]:
    """All count vectors with the given sum, in lexicographic order."""
    if n_quants == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in count_vectors(n_quants - 1, total - first):
            yield (first,) + rest


def instantiation_bound(rho: UQRule, g: Hypergraph, coarse: bool = False) -> int:
    """Upper bound on the instantiation length needed for a backward step from ``g``."""
    if not rho.quants:
        return 0
    if coarse:
        return len(g.nodes) + len(g.edges)
    base = base_instantiation(rho)
    steps = [extend(rho, base, i) for i in range(len(rho.quants))]
    if all(are_isomorphic(inst.rbar, rho.rhs) for inst, _ in steps):
        return 0
    for inst, inj in steps:
        old_n = inj.image_nodes()
        old_e = inj.image_edges()
        rbar = inst.rbar
        for e, (_, conn) in rbar.edges.items():
            if e in old_e:
                continue
            if not any(v not in old_n for v in conn):
                return len(g.nodes) + len(g.edges)
    return len(g.nodes)


# -- forward application --------------------------------------------------------


def satisfies_application_condition(
    rho: UQRule, inst: Instantiation, match: PartialMorphism, qnodes: Optional[Set[int]] = None
) -> bool:
    """No host edge at a matched quantified node may lie outside the match image."""
    host = match.target
    image = match.image_edges()
    for x in rho.qnodes() if qnodes is None else qnodes:
        v = match.node_map[inst.pi.node_map[x]]
        for e in host.incident_edges(v):
            if e not in image:
                return False
    return True


def applicable_instances(rho: UQRule, g: Hypergraph) -> List[Tuple[Instantiation, PartialMorphism]]:
    """All (instantiation, match) pairs under which ``rho`` can be applied to ``g``."""
    qn = rho.qnodes()
    out = []
    total = 0
    while True:
        fitting = 0
        for counts in count_vectors(len(rho.quants), total):
            inst = instantiate(rho, counts)
            if len(inst.lbar.nodes) > len(g.nodes) or len(inst.lbar.edges) > len(g.edges):
                continue
            fitting += 1
            for m in iter_matches(inst.lbar, g):
                if satisfies_application_condition(rho, inst, m, qn):
                    out.append((inst, m))
        if fitting == 0 or not rho.quants:
            break
        total += 1
    return out


def apply(inst: Instantiation, match: PartialMorphism, g: Hypergraph) -> Hypergraph:
    """Result of rewriting ``g`` with ``inst`` at ``match``."""
    if match.source is not inst.lbar or match.target is not g:
        if match.source != inst.lbar or match.target != g:
            raise ValueError("match does not go from the instantiation's left side into g")
    if not match.is_match():
        raise ValueError("match must be total and injective")
    return pushout(inst.gamma, match).object


def successors(rules: Sequence[UQRule], g: Hypergraph) -> Iterator[Tuple[UQRule, Instantiation, PartialMorphism, Hypergraph]]:
    for rho in rules:
        for inst, m in applicable_instances(rho, g):
            yield rho, inst, m, apply(inst, m, g)


def step_orders(counts: Sequence[int]) -> List[Tuple[int, ...]]:
    """All distinct orders in which the steps of ``counts`` can be taken."""
    steps = [i for i, n in enumerate(counts) for _ in range(n)]
    return sorted(set(itertools.permutations(steps)))
