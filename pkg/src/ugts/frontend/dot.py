"""Graphviz export of hypergraphs."""

from __future__ import annotations

from typing import Dict, List

from ..core import Hypergraph


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _quote(text: str) -> str:
    return '"' + _escape(text) + '"'


def render_dot(g: Hypergraph, name: str = "G") -> str:
    """DOT text for ``g``; the output depends only on the graph's ids, labels and names.

    Unary edges become annotations inside the node label, binary edges
    labelled arrows and every other arity a box with numbered tentacles.
    """
    notes: Dict[int, List[str]] = {v: [] for v in g.nodes}
    for e in sorted(g.edges):
        lab, conn = g.edges[e]
        if len(conn) == 1:
            notes[conn[0]].append(lab)
    lines = [f"digraph {_quote(name)} {{", "  node [shape=circle];"]
    for v in sorted(g.nodes):
        text = _escape(g.node_name(v))
        if notes[v]:
            text += "\\n" + _escape(",".join(sorted(notes[v])))
        lines.append(f'  v{v} [label="{text}"];')
    for e in sorted(g.edges):
        lab, conn = g.edges[e]
        if len(conn) == 1:
            continue
        if len(conn) == 2:
            lines.append(f"  v{conn[0]} -> v{conn[1]} [label={_quote(lab)}];")
            continue
        lines.append(f"  e{e} [shape=box, label={_quote(lab)}];")
        for i, v in enumerate(conn):
            lines.append(f"  e{e} -> v{v} [label=\"{i + 1}\", arrowhead=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"
