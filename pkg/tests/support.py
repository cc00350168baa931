"""Random graph and morphism generators shared by the test modules."""

import random
from typing import Optional

from hypothesis import strategies as st

from ugts.core import Hypergraph, Signature
from ugts.frontend import parse_spec
from ugts.fixtures import fixture_text
from ugts.morphism import PartialMorphism

SIG = Signature({"T": 1, "F": 2, "R": 3, "Z": 0})
LABELS = sorted(SIG.arity)

_DINING = None


def dining():
    global _DINING
    if _DINING is None:
        _DINING = parse_spec(fixture_text())
    return _DINING


def random_graph(rng: random.Random, max_elements: int = 6, sig: Signature = SIG) -> Hypergraph:
    n = rng.randint(0, max(0, min(4, max_elements)))
    m = rng.randint(0, max_elements - n)
    labels = [l for l in sorted(sig.arity) if n > 0 or sig.arity[l] == 0]
    edges = {}
    for i in range(m if labels else 0):
        lab = rng.choice(labels)
        edges[i] = (lab, tuple(rng.randrange(n) for _ in range(sig.arity[lab])))
    return Hypergraph(range(n), edges)


def random_morphism(rng: random.Random, g0: Hypergraph, extra: int = 2, total_injective: bool = False):
    """A partial morphism out of ``g0`` into a freshly built target.

    Built by dropping, merging and then adding elements, so every morphism
    invariant holds by construction.
    """
    alive = [v for v in g0.nodes if total_injective or rng.random() < 0.8]
    n_img = len(alive) if total_injective else max(1, len(alive) - rng.randint(0, 1)) if alive else 0
    node_map = {v: (i if total_injective else rng.randrange(n_img)) for i, v in enumerate(alive)}
    n_extra = rng.randint(0, extra)
    edges = {}
    edge_map = {}
    by_key = {}
    for e, (lab, conn) in g0.edges.items():
        if not all(v in node_map for v in conn):
            continue
        if not total_injective and rng.random() < 0.2:
            continue
        key = (lab, tuple(node_map[v] for v in conn))
        if not total_injective and key in by_key and rng.random() < 0.5:
            edge_map[e] = by_key[key]
            continue
        eid = len(edges)
        edges[eid] = key
        by_key[key] = eid
        edge_map[e] = eid
    n = n_img + n_extra
    for _ in range(rng.randint(0, extra)):
        labs = [l for l in LABELS if n > 0 or SIG.arity[l] == 0]
        lab = rng.choice(labs)
        edges[len(edges)] = (lab, tuple(rng.randrange(n) for _ in range(SIG.arity[lab])))
    target = Hypergraph(range(n), edges)
    return PartialMorphism(g0, target, node_map, edge_map)


def random_span(rng: random.Random, max_elements: int = 6):
    g0 = random_graph(rng, max_elements)
    phi = random_morphism(rng, g0, total_injective=rng.random() < 0.3)
    psi = random_morphism(rng, g0, total_injective=rng.random() < 0.3)
    return phi, psi


@st.composite
def graphs(draw, max_nodes: int = 4, max_edges: int = 4) -> Hypergraph:
    n = draw(st.integers(0, max_nodes))
    labs = [l for l in LABELS if n > 0 or SIG.arity[l] == 0]
    edge = st.sampled_from(labs).flatmap(
        lambda lab: st.tuples(st.just(lab), st.tuples(*[st.integers(0, n - 1)] * SIG.arity[lab]))
    )
    es = draw(st.lists(edge, max_size=max_edges))
    return Hypergraph(range(n), dict(enumerate(es)))


def seeded(seed: Optional[int] = None) -> random.Random:
    return random.Random(seed)
