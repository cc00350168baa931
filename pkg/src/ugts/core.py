"""Hypergraphs over an arity signature.

Graphs are immutable values. Node and edge identifiers are small integers that
only mean something inside one graph; relations between graphs are always
expressed through morphisms (see :mod:`ugts.morphism`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

if TYPE_CHECKING:
    from .morphism import PartialMorphism

Edge = Tuple[str, Tuple[int, ...]]


@dataclass(frozen=True)
class Signature:
    """Edge labels together with their arities."""

    arity: Mapping[str, int]

    def __post_init__(self) -> None:
        for label, n in self.arity.items():
            if not isinstance(n, int) or n < 0:
                raise ValueError(f"label {label!r} has invalid arity {n!r}")
        object.__setattr__(self, "arity", dict(self.arity))

    @property
    def labels(self) -> List[str]:
        return sorted(self.arity)

    def __contains__(self, label: object) -> bool:
        return label in self.arity

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.arity.items())))


@dataclass(frozen=True)
class PathBound:
    """Upper bound ``k`` on the length of simple undirected paths."""

    k: int

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError("path bound must be non-negative")


class Hypergraph:
    """A finite edge-labelled hypergraph.

    ``edges`` maps an edge id to ``(label, connection)``. Optional ``names``
    give human-readable node names; they take no part in equality.
    """

    __slots__ = ("nodes", "edges", "names", "_incidence", "_invariant", "_paths", "_hash")

    def __init__(
        self,
        nodes: Iterable[int] = (),
        edges: Optional[Mapping[int, Edge]] = None,
        names: Optional[Mapping[int, str]] = None,
    ) -> None:
        self.nodes: Tuple[int, ...] = tuple(sorted(set(nodes)))
        self.edges: Dict[int, Edge] = {
            e: (lab, tuple(conn)) for e, (lab, conn) in sorted((edges or {}).items())
        }
        self.names: Optional[Dict[int, str]] = dict(names) if names else None
        self._incidence = None
        self._invariant = None
        self._paths: Dict[int, bool] = {}
        self._hash = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def build(cls, nodes: Iterable[str], edges: Iterable[Tuple[str, Iterable[str]]]) -> "Hypergraph":
        """Build a graph from named nodes and ``(label, [node names])`` edges."""
        ids: Dict[str, int] = {}
        for n in nodes:
            ids.setdefault(n, len(ids))
        emap = {}
        for i, (label, conn) in enumerate(edges):
            emap[i] = (label, tuple(ids[n] for n in conn))
        return cls(ids.values(), emap, {v: k for k, v in ids.items()})

    def restrict(self, nodes: Iterable[int], edges: Iterable[int]) -> "Hypergraph":
        """Subgraph keeping the given ids (edges with a dropped endpoint are dropped too)."""
        keep = set(nodes)
        kept_edges = {}
        for e in edges:
            lab, conn = self.edges[e]
            if all(v in keep for v in conn):
                kept_edges[e] = (lab, conn)
        names = {v: n for v, n in self.names.items() if v in keep} if self.names else None
        return Hypergraph(keep, kept_edges, names)

    def relabel(self, node_map: Mapping[int, int], edge_map: Mapping[int, int]) -> "Hypergraph":
        names = None
        if self.names:
            names = {node_map[v]: n for v, n in self.names.items()}
        return Hypergraph(
            (node_map[v] for v in self.nodes),
            {edge_map[e]: (lab, tuple(node_map[v] for v in conn)) for e, (lab, conn) in self.edges.items()},
            names,
        )

    def disjoint_union(self, other: "Hypergraph") -> Tuple["Hypergraph", Dict[int, int], Dict[int, int]]:
        """Return ``self + other`` and the node/edge renaming applied to ``other``."""
        n0 = max(self.nodes, default=-1) + 1
        e0 = max(self.edges, default=-1) + 1
        nmap = {v: n0 + i for i, v in enumerate(other.nodes)}
        emap = {e: e0 + i for i, e in enumerate(other.edges)}
        edges = dict(self.edges)
        for e, (lab, conn) in other.edges.items():
            edges[emap[e]] = (lab, tuple(nmap[v] for v in conn))
        return Hypergraph(list(self.nodes) + list(nmap.values()), edges), nmap, emap

    # -- queries ---------------------------------------------------------------

    def label(self, e: int) -> str:
        return self.edges[e][0]

    def conn(self, e: int) -> Tuple[int, ...]:
        return self.edges[e][1]

    @property
    def size(self) -> int:
        return len(self.nodes) + len(self.edges)

    @property
    def incidence(self) -> Dict[int, List[Tuple[int, int]]]:
        """node -> list of (edge, position) pairs."""
        if self._incidence is None:
            inc: Dict[int, List[Tuple[int, int]]] = {v: [] for v in self.nodes}
            for e, (_, conn) in self.edges.items():
                for i, v in enumerate(conn):
                    if v in inc:
                        inc[v].append((e, i))
            self._incidence = inc
        return self._incidence

    def incident_edges(self, v: int) -> List[int]:
        seen = []
        for e, _ in self.incidence[v]:
            if e not in seen:
                seen.append(e)
        return seen

    def label_counts(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for lab, _ in self.edges.values():
            counts[lab] = counts.get(lab, 0) + 1
        return counts

    def invariant(self) -> tuple:
        """Isomorphism invariant from a few rounds of colour refinement."""
        if self._invariant is None:
            self._invariant = _refine_invariant(self)
        return self._invariant

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self.nodes == other.nodes and self.edges == other.edges

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nodes, tuple(self.edges.items())))
        return self._hash

    def node_name(self, v: int) -> str:
        if self.names and v in self.names:
            return self.names[v]
        return f"n{v}"

    def __repr__(self) -> str:
        parts = [self.node_name(v) for v in self.nodes]
        for lab, conn in self.edges.values():
            parts.append(f"{lab}({','.join(self.node_name(v) for v in conn)})")
        return "Hypergraph{" + ", ".join(parts) + "}"


EMPTY = Hypergraph()


def validate_graph(g: Hypergraph, sig: Signature) -> List[str]:
    """Return a list of violations; an empty list means ``g`` is valid over ``sig``."""
    problems = []
    nodes = set(g.nodes)
    for e, (lab, conn) in g.edges.items():
        if lab not in sig:
            problems.append(f"edge {e}: unknown label {lab}")
            continue
        if len(conn) != sig.arity[lab]:
            problems.append(
                f"edge {e}: arity mismatch for {lab} (expected {sig.arity[lab]}, got {len(conn)})"
            )
        for v in conn:
            if v not in nodes:
                problems.append(f"edge {e}: dangling endpoint {g.node_name(v)}")
    return problems


# -- colour refinement ----------------------------------------------------------


def _compress(values: Dict[int, object]) -> Dict[int, int]:
    palette = {c: i for i, c in enumerate(sorted(set(values.values())))}
    return {v: palette[c] for v, c in values.items()}


def refine_colours(g: Hypergraph, colours: Optional[Dict[int, int]] = None, rounds: Optional[int] = None) -> Dict[int, int]:
    """Stable (or ``rounds``-bounded) colour refinement of the nodes of ``g``.

    Colours are small integers assigned from sorted keys, so they are
    comparable between isomorphic graphs.
    """
    inc = g.incidence
    if colours is None:
        start = {v: tuple(sorted((g.edges[e][0], i) for e, i in inc[v])) for v in g.nodes}
    else:
        start = {v: (colours[v], tuple(sorted((g.edges[e][0], i) for e, i in inc[v]))) for v in g.nodes}
    col = _compress(start)
    n_classes = len(set(col.values()))
    step = 0
    while rounds is None or step < rounds:
        step += 1
        sig = {
            v: (
                col[v],
                tuple(sorted((g.edges[e][0], i, tuple(col[w] for w in g.edges[e][1])) for e, i in inc[v])),
            )
            for v in g.nodes
        }
        new = _compress(sig)
        k = len(set(new.values()))
        col = new
        if k == n_classes:
            break
        n_classes = k
    return col


def _refine_invariant(g: Hypergraph) -> tuple:
    col = refine_colours(g)
    nullary = sorted(lab for lab, conn in g.edges.values() if not conn)
    return (
        len(g.nodes),
        len(g.edges),
        tuple(sorted(col.values())),
        tuple(sorted((lab, tuple(col[v] for v in conn)) for lab, conn in g.edges.values())),
        tuple(nullary),
    )


# -- embedding search ------------------------------------------------------------


def _profile(g: Hypergraph, v: int) -> Dict[Tuple[str, int], int]:
    prof: Dict[Tuple[str, int], int] = {}
    for e, i in g.incidence[v]:
        key = (g.edges[e][0], i)
        prof[key] = prof.get(key, 0) + 1
    return prof


def _dominates(big: Dict, small: Dict) -> bool:
    for k, n in small.items():
        if big.get(k, 0) < n:
            return False
    return True


def embeddings(
    pattern: Hypergraph,
    host: Hypergraph,
    fixed_nodes: Optional[Mapping[int, int]] = None,
    fixed_edges: Optional[Mapping[int, int]] = None,
    bijective: bool = False,
) -> Iterator[Tuple[Dict[int, int], Dict[int, int]]]:
    """Enumerate total injective label/connection preserving maps ``pattern -> host``.

    ``fixed_nodes``/``fixed_edges`` pin part of the map in advance. With
    ``bijective`` only isomorphisms are produced.
    """
    if bijective:
        if len(pattern.nodes) != len(host.nodes) or len(pattern.edges) != len(host.edges):
            return
    elif len(pattern.nodes) > len(host.nodes) or len(pattern.edges) > len(host.edges):
        return
    pc = pattern.label_counts()
    hc = host.label_counts()
    for lab, n in pc.items():
        if hc.get(lab, 0) < n or (bijective and hc.get(lab, 0) != n):
            return
    if bijective and len(hc) != len(pc):
        return

    nmap: Dict[int, int] = dict(fixed_nodes or {})
    emap: Dict[int, int] = dict(fixed_edges or {})
    used_n = set(nmap.values())
    used_e = set(emap.values())
    if len(used_n) != len(nmap) or len(used_e) != len(emap):
        return
    for e, f in emap.items():
        lab, conn = pattern.edges[e]
        hlab, hconn = host.edges[f]
        if lab != hlab or len(conn) != len(hconn):
            return
        for v, w in zip(conn, hconn):
            if nmap.get(v, w) != w:
                return
            if v not in nmap:
                if w in used_n:
                    return
                nmap[v] = w
                used_n.add(w)

    pprof = {v: _profile(pattern, v) for v in pattern.nodes}
    hprof = {w: _profile(host, w) for w in host.nodes}

    def node_ok(v: int, w: int) -> bool:
        if bijective:
            return pprof[v] == hprof[w]
        return _dominates(hprof[w], pprof[v])

    for v, w in nmap.items():
        if not node_ok(v, w):
            return

    # host edges by label and by (node, label)
    by_label: Dict[str, List[int]] = {}
    for f, (lab, _) in host.edges.items():
        by_label.setdefault(lab, []).append(f)
    by_node_label: Dict[Tuple[int, str], List[int]] = {}
    for f, (lab, conn) in host.edges.items():
        for w in set(conn):
            by_node_label.setdefault((w, lab), []).append(f)

    # order remaining pattern edges: keep the explored part connected
    todo = [e for e in pattern.edges if e not in emap]
    order: List[int] = []
    bound = set(nmap)
    rarity = {lab: len(by_label.get(lab, ())) for lab in pc}
    while todo:
        best = max(
            todo,
            key=lambda e: (
                sum(1 for v in set(pattern.edges[e][1]) if v in bound),
                len(pattern.edges[e][1]),
                -rarity[pattern.edges[e][0]],
                -e,
            ),
        )
        todo.remove(best)
        order.append(best)
        bound.update(pattern.edges[best][1])
    rest_nodes = [v for v in pattern.nodes if v not in bound]

    def candidates(e: int) -> List[int]:
        lab, conn = pattern.edges[e]
        for v in conn:
            if v in nmap:
                return by_node_label.get((nmap[v], lab), [])
        return by_label.get(lab, [])

    def place_nodes(i: int) -> Iterator[Tuple[Dict[int, int], Dict[int, int]]]:
        if i == len(rest_nodes):
            yield dict(nmap), dict(emap)
            return
        v = rest_nodes[i]
        for w in host.nodes:
            if w in used_n or not node_ok(v, w):
                continue
            nmap[v] = w
            used_n.add(w)
            yield from place_nodes(i + 1)
            used_n.discard(w)
            del nmap[v]

    def place_edges(i: int) -> Iterator[Tuple[Dict[int, int], Dict[int, int]]]:
        if i == len(order):
            yield from place_nodes(0)
            return
        e = order[i]
        conn = pattern.edges[e][1]
        for f in candidates(e):
            if f in used_e:
                continue
            hconn = host.edges[f][1]
            added = []
            ok = True
            for v, w in zip(conn, hconn):
                cur = nmap.get(v)
                if cur is None:
                    if w in used_n or not node_ok(v, w):
                        ok = False
                        break
                    nmap[v] = w
                    used_n.add(w)
                    added.append(v)
                elif cur != w:
                    ok = False
                    break
            if ok:
                emap[e] = f
                used_e.add(f)
                yield from place_edges(i + 1)
                used_e.discard(f)
                del emap[e]
            for v in added:
                used_n.discard(nmap.pop(v))

    yield from place_edges(0)


def first_embedding(pattern: Hypergraph, host: Hypergraph, **kw) -> Optional[Tuple[Dict[int, int], Dict[int, int]]]:
    for found in embeddings(pattern, host, **kw):
        return found
    return None


def embeds(pattern: Hypergraph, host: Hypergraph) -> bool:
    """Cheap filters followed by a search for one total injective morphism."""
    if len(pattern.nodes) > len(host.nodes) or len(pattern.edges) > len(host.edges):
        return False
    return first_embedding(pattern, host) is not None


def isomorphic(g: Hypergraph, h: Hypergraph) -> Optional["PartialMorphism"]:
    """Return an isomorphism ``g -> h`` as a morphism, or ``None``."""
    if g.invariant() != h.invariant():
        return None
    found = first_embedding(g, h, bijective=True)
    if found is None:
        return None
    from .morphism import PartialMorphism

    return PartialMorphism(g, h, found[0], found[1])


def are_isomorphic(g: Hypergraph, h: Hypergraph) -> bool:
    if g.invariant() != h.invariant():
        return False
    return first_embedding(g, h, bijective=True) is not None


# -- bounded undirected paths ----------------------------------------------------


def longest_path_exceeds(g: Hypergraph, k: int) -> bool:
    """True iff ``g`` has a simple undirected path with more than ``k`` edges."""
    adj: Dict[int, List[Tuple[int, int]]] = {v: [] for v in g.nodes}
    for e, (_, conn) in g.edges.items():
        ends = sorted(set(conn))
        for a in ends:
            for b in ends:
                if a != b:
                    adj[a].append((e, b))

    def dfs(v: int, length: int, seen_n: set, seen_e: set) -> bool:
        if length > k:
            return True
        for e, w in adj[v]:
            if w in seen_n or e in seen_e:
                continue
            seen_n.add(w)
            seen_e.add(e)
            hit = dfs(w, length + 1, seen_n, seen_e)
            seen_n.discard(w)
            seen_e.discard(e)
            if hit:
                return True
        return False

    return any(dfs(v, 0, {v}, set()) for v in g.nodes)


def within_path_bound(g: Hypergraph, bound: PathBound) -> bool:
    k = bound.k
    if k not in g._paths:
        g._paths[k] = not longest_path_exceeds(g, k)
    return g._paths[k]


# -- canonical form ----------------------------------------------------------------


def _serialise(g: Hypergraph, order: List[int]) -> tuple:
    pos = {v: i for i, v in enumerate(order)}
    return (len(order), tuple(sorted((lab, tuple(pos[v] for v in conn)) for lab, conn in g.edges.values())))


def canonical_order(g: Hypergraph) -> List[int]:
    """Node order giving the lexicographically least serialisation.

    Exhaustive individualisation/refinement; intended for the small graphs
    that appear in reports.
    """
    best: List[Optional[tuple]] = [None, None]

    def search(colours: Dict[int, int]) -> None:
        col = refine_colours(g, colours)
        cells: Dict[int, List[int]] = {}
        for v, c in col.items():
            cells.setdefault(c, []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = c
                break
        if target is None:
            order = sorted(g.nodes, key=lambda v: col[v])
            key = _serialise(g, order)
            if best[0] is None or key < best[0]:
                best[0], best[1] = key, order
            return
        for v in cells[target]:
            nxt = {w: 2 * c + (0 if w == v else 1) if c == target else 2 * c for w, c in col.items()}
            # keep the individualised vertex first inside its old cell
            search(nxt)

    search({v: 0 for v in g.nodes})
    return best[1] if best[1] is not None else []


def canonical_graph(g: Hypergraph) -> Hypergraph:
    """Copy of ``g`` with nodes renumbered canonically and edges sorted."""
    order = canonical_order(g)
    pos = {v: i for i, v in enumerate(order)}
    edges = sorted((lab, tuple(pos[v] for v in conn)) for lab, conn in g.edges.values())
    return Hypergraph(range(len(order)), {i: e for i, e in enumerate(edges)})
