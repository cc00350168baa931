"""Backward coverability search over upward-closed sets of graphs."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .core import Hypergraph, PathBound, are_isomorphic, within_path_bound
from .morphism import (
    PartialMorphism,
    _children,
    is_subgraph,
    iter_matches,
    morphism_encoding,
    restrict_codomain,
)
from .order import Basis, represented
from .pushout import minimal_pushout_complements
from .rules import (
    Instantiation,
    UQRule,
    apply,
    count_vectors,
    instantiate,
    instantiation_bound,
    satisfies_application_condition,
    validate_rule,
)

GENERAL = "general"
RESTRICTED = "restricted"
SAFE = "safe"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SearchConfig:
    mode: str = GENERAL
    path_bound: Optional[PathBound] = None
    postcond_lift: bool = True
    max_iterations: Optional[int] = 1000
    coarse_bound: bool = False

    def __post_init__(self) -> None:
        if self.mode not in (GENERAL, RESTRICTED):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == RESTRICTED and self.path_bound is None:
            raise ValueError("restricted mode needs a path bound")
        if self.max_iterations is not None and self.max_iterations <= 0:
            raise ValueError("max_iterations must be positive")

    @property
    def restriction(self) -> Optional[PathBound]:
        return self.path_bound if self.mode == RESTRICTED else None


@dataclass(eq=False)
class TraceEntry:
    """Provenance of one graph produced by a backward step."""

    source: Hypergraph
    rule: str
    counts: Tuple[int, ...]
    comatch: PartialMorphism
    match: PartialMorphism  # Lbar -> result
    result: Hypergraph


@dataclass(eq=False)
class SearchState:
    working: Basis
    iteration: int = 0
    steps: int = 0
    stationary: bool = False
    trace: List[TraceEntry] = field(default_factory=list)
    wall_ms: int = 0


def _delta_classes(rho: UQRule, inst: Instantiation) -> List[Hypergraph]:
    """Subgraphs R' of the instantiation's right side, one per class of ``mu . gamma``.

    Two subgraphs are equivalent when the composed morphisms ``Lbar -> R'``
    are isomorphic respecting the quantified nodes; equivalent ones give
    isomorphic backward results. Children of equivalent subgraphs are
    equivalent, so pruning level by level loses nothing.
    """
    cache = rho._delta_cache
    if inst.counts in cache:
        return cache[inst.counts]
    marked = sorted(inst.pi.node_map[x] for x in rho.qnodes())
    full = inst.rbar
    result = [full]
    level = [full]
    seen = {full}
    while level:
        buckets: Dict[tuple, List[Hypergraph]] = {}
        nxt = []
        for h in level:
            for child in _children(h):
                if child in seen:
                    continue
                seen.add(child)
                enc = morphism_encoding(restrict_codomain(inst.gamma, child), marked)
                bucket = buckets.setdefault(enc.invariant(), [])
                if any(are_isomorphic(enc, other) for other in bucket):
                    continue
                bucket.append(enc)
                nxt.append(child)
        result.extend(nxt)
        level = nxt
    cache[inst.counts] = result
    return result


def _lift_blocks(
    qn: Iterable[int], inst: Instantiation, delta: PartialMorphism, comatch: PartialMorphism
) -> bool:
    """Application condition lifted to the co-match.

    A co-matched quantified node with an extra host edge can never become a
    valid predecessor, provided that node is its image's only preimage (the
    context edge then has nowhere else to attach).
    """
    host = comatch.target
    img_edges = comatch.image_edges()
    for x in qn:
        y = inst.pi.node_map[x]
        b = delta.node_map.get(y)
        if b is None:
            continue
        if sum(1 for w in delta.node_map.values() if w == b) != 1:
            continue
        v = comatch.node_map[b]
        if any(e not in img_edges for e in host.incident_edges(v)):
            return True
    return False


def backward_step(
    rho: UQRule,
    g: Hypergraph,
    cfg: SearchConfig = SearchConfig(),
    trace: Optional[List[TraceEntry]] = None,
) -> List[Hypergraph]:
    """Graphs from which one application of ``rho`` can reach a graph above ``g``.

    The caller is expected to minimise the returned list.
    """
    restriction = cfg.restriction
    if restriction is not None and not within_path_bound(g, restriction):
        raise ValueError("restricted backward step from a graph outside the path bound")
    qn = sorted(rho.qnodes())
    bound = instantiation_bound(rho, g, coarse=cfg.coarse_bound)
    out: List[Hypergraph] = []
    for total in range(bound + 1):
        for counts in count_vectors(len(rho.quants), total):
            inst = instantiate(rho, counts)
            for sub in _delta_classes(rho, inst):
                if len(sub.nodes) > len(g.nodes) or len(sub.edges) > len(g.edges):
                    continue
                delta = restrict_codomain(inst.gamma, sub)
                for comatch in iter_matches(sub, g):
                    if cfg.postcond_lift and _lift_blocks(qn, inst, delta, comatch):
                        continue
                    for poc in minimal_pushout_complements(delta, comatch, path_bound=restriction, verify=False):
                        if not satisfies_application_condition(rho, inst, poc.match, qn):
                            continue
                        out.append(poc.complement)
                        if trace is not None:
                            trace.append(TraceEntry(g, rho.name, inst.counts, comatch, poc.match, poc.complement))
    return out


def backward_search(
    rules: Sequence[UQRule],
    finals: Iterable[Hypergraph],
    cfg: SearchConfig = SearchConfig(),
    keep_trace: bool = False,
    progress=None,
) -> SearchState:
    """Saturate the working set with backward steps until nothing new appears."""
    for rho in rules:
        problems = validate_rule(rho)
        if problems:
            raise ValueError(f"rule {rho.name}: " + "; ".join(problems))
    finals = list(finals)
    restriction = cfg.restriction
    if restriction is not None:
        for f in finals:
            if not within_path_bound(f, restriction):
                raise ValueError("final graph outside the path bound")
    start = time.perf_counter()
    state = SearchState(working=Basis())
    for f in sorted(finals, key=lambda h: (h.size, len(h.nodes))):
        state.working.add(f)
    trace = state.trace if keep_trace else None
    dirty = list(state.working.members)
    while dirty:
        if cfg.max_iterations is not None and state.iteration >= cfg.max_iterations:
            break
        state.iteration += 1
        produced: List[Hypergraph] = []
        for g in dirty:
            for rho in rules:
                produced.extend(backward_step(rho, g, cfg, trace))
                state.steps += 1
        before = {id(m) for m in state.working.members}
        for h in sorted(produced, key=lambda h: (h.size, len(h.nodes))):
            state.working.add(h)
        dirty = [m for m in state.working.members if id(m) not in before]
        if progress is not None:
            progress(state, len(produced), len(dirty))
    state.stationary = not dirty
    state.wall_ms = int((time.perf_counter() - start) * 1000)
    return state


def verdict(init: Hypergraph, state: SearchState, cfg: SearchConfig = SearchConfig()) -> str:
    """``safe`` when the initial graph is provably outside the computed closure."""
    if not state.stationary:
        return INCONCLUSIVE
    return INCONCLUSIVE if represented(init, state.working) else SAFE


def replay(entry: TraceEntry, rules_by_name: Dict[str, UQRule]) -> Optional[Hypergraph]:
    """Re-run the forward step recorded in ``entry``.

    Returns the forward result if the step is a genuine application whose
    result covers the entry's source graph, else ``None``.
    """
    rho = rules_by_name[entry.rule]
    inst = instantiate(rho, entry.counts)
    if entry.match.source != inst.lbar or not entry.match.is_match():
        return None
    if not satisfies_application_condition(rho, inst, entry.match):
        return None
    h = apply(inst, entry.match, entry.result)
    return h if is_subgraph(entry.source, h) else None
