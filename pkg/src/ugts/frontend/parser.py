"""Reader and writer for ``.ugts`` specification files.

Example::

    signature { T/1 H/1 }
    rule get_hungry {
      left  { nodes p; T(p); }
      right { nodes p; H(p); }
      map   { p -> p; }
    }
    graph g { nodes a; T(a); }
    init g;
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..core import Hypergraph, Signature, validate_graph
from ..morphism import PartialMorphism
from ..rules import Quantification, Rule, UQRule, validate_rule


class ParseError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0) -> None:
        super().__init__(f"{line}:{col}: {message}" if line else message)
        self.message = message
        self.line = line
        self.col = col


@dataclass
class SpecFile:
    signature: Signature
    graphs: Dict[str, Hypergraph] = field(default_factory=dict)
    rules: Dict[str, UQRule] = field(default_factory=dict)
    inits: List[str] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)

    @property
    def rule_list(self) -> List[UQRule]:
        return list(self.rules.values())

    @property
    def error_graphs(self) -> List[Hypergraph]:
        return [self.graphs[n] for n in self.errors]

    @property
    def init_graphs(self) -> Dict[str, Hypergraph]:
        return {n: self.graphs[n] for n in self.inits}


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<arrow>->)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<nat>[0-9]+)
  | (?P<punct>[{}();:,/])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


@dataclass
class _EdgeDecl:
    ident: Optional[str]
    label: str
    args: List[str]
    tok: Token


@dataclass
class _Body:
    nodes: List[Tuple[str, Token]] = field(default_factory=list)
    edges: List[_EdgeDecl] = field(default_factory=list)
    tok: Optional[Token] = None


@dataclass
class _Graph:
    """A parsed body turned into a graph, with its name tables."""

    graph: Hypergraph
    node_ids: Dict[str, int]
    edge_ids: Dict[str, int]


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = tokenize(text)
        self.i = 0

    # -- token helpers ---------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, message: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind == "eof":
            raise self.fail(f"expected {text!r}, found {self.tok.text or 'end of file'!r}")
        t = self.tok
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind != "eof":
            self.i += 1
            return True
        return False

    def name(self) -> Token:
        if self.tok.kind != "name":
            raise self.fail(f"expected a name, found {self.tok.text or 'end of file'!r}")
        t = self.tok
        self.i += 1
        return t

    # -- grammar -----------------------------------------------------------------

    def spec(self) -> SpecFile:
        self.expect("signature")
        self.expect("{")
        arity: Dict[str, int] = {}
        while not self.accept("}"):
            lab = self.name()
            self.expect("/")
            if self.tok.kind != "nat":
                raise self.fail("expected an arity")
            n = int(self.tok.text)
            self.i += 1
            if lab.text in arity:
                raise self.fail(f"label {lab.text} declared twice", lab)
            arity[lab.text] = n
            self.accept(";") or self.accept(",")
        if not arity:
            raise self.fail("signature must declare at least one label")
        spec = SpecFile(Signature(arity))
        pending: List[Tuple[str, Token]] = []
        while self.tok.kind != "eof":
            kw = self.name()
            if kw.text == "graph":
                name = self.name()
                if name.text in spec.graphs:
                    raise self.fail(f"graph {name.text} defined twice", name)
                self.expect("{")
                body = self.body("}")
                self.expect("}")
                spec.graphs[name.text] = self.make_graph(body, spec.signature).graph
            elif kw.text == "rule":
                name = self.name()
                if name.text in spec.rules:
                    raise self.fail(f"rule {name.text} defined twice", name)
                spec.rules[name.text] = self.rule(name, spec.signature)
            elif kw.text in ("init", "error"):
                name = self.name()
                self.expect(";")
                pending.append((kw.text, name))
            else:
                raise self.fail(f"unexpected {kw.text!r}; expected graph, rule, init or error", kw)
        for kind, name in pending:
            if name.text not in spec.graphs:
                raise self.fail(f"unknown graph {name.text}", name)
            (spec.inits if kind == "init" else spec.errors).append(name.text)
        return spec

    def body(self, close: str) -> _Body:
        body = _Body(tok=self.tok)
        while self.tok.text != close and self.tok.kind != "eof":
            if self.tok.text == "nodes" and self.tokens[self.i + 1].kind == "name":
                self.i += 1
                while self.tok.kind == "name":
                    t = self.name()
                    body.nodes.append((t.text, t))
                self.expect(";")
                continue
            first = self.name()
            ident = None
            if self.accept(":"):
                ident = first.text
                label_tok = self.name()
            else:
                label_tok = first
            self.expect("(")
            args = []
            if not self.accept(")"):
                args.append(self.name().text)
                while self.accept(","):
                    args.append(self.name().text)
                self.expect(")")
            self.expect(";")
            body.edges.append(_EdgeDecl(ident, label_tok.text, args, label_tok))
        return body

    def make_graph(self, body: _Body, sig: Signature, base: Optional[_Graph] = None) -> _Graph:
        """Turn a body into a graph; ``base`` elements are included and may be referenced."""
        node_ids: Dict[str, int] = dict(base.node_ids) if base else {}
        edge_ids: Dict[str, int] = dict(base.edge_ids) if base else {}
        edges: Dict[int, Tuple[str, Tuple[int, ...]]] = dict(base.graph.edges) if base else {}
        for n, t in body.nodes:
            if n in node_ids:
                if base is not None and n in base.node_ids:
                    continue
                raise self.fail(f"node {n} declared twice", t)
            if n in edge_ids:
                raise self.fail(f"{n} is already an edge id", t)
            node_ids[n] = len(node_ids)
        next_edge = max(edges, default=-1) + 1
        for d in body.edges:
            if d.label not in sig:
                raise self.fail(f"unknown label {d.label}", d.tok)
            if len(d.args) != sig.arity[d.label]:
                raise self.fail(
                    f"arity mismatch: {d.label} has arity {sig.arity[d.label]} but {len(d.args)} nodes given",
                    d.tok,
                )
            for a in d.args:
                if a not in node_ids:
                    raise self.fail(f"dangling node {a}: not declared", d.tok)
            conn = tuple(node_ids[a] for a in d.args)
            if d.ident is not None:
                if d.ident in node_ids:
                    raise self.fail(f"{d.ident} is already a node name", d.tok)
                if d.ident in edge_ids:
                    if base is not None and d.ident in base.edge_ids:
                        if base.graph.edges[base.edge_ids[d.ident]] != (d.label, conn):
                            raise self.fail(f"edge {d.ident} differs from the rule's left side", d.tok)
                        continue
                    raise self.fail(f"edge id {d.ident} used twice", d.tok)
                edge_ids[d.ident] = next_edge
            edges[next_edge] = (d.label, conn)
            next_edge += 1
        g = Hypergraph(node_ids.values(), edges, {v: k for k, v in node_ids.items()})
        problems = validate_graph(g, sig)
        if problems:
            raise self.fail(problems[0], body.tok)
        return _Graph(g, node_ids, edge_ids)

    def mapping(self, src: _Graph, tgt: _Graph) -> PartialMorphism:
        self.expect("map")
        start = self.expect("{")
        nm: Dict[int, int] = {}
        em: Dict[int, int] = {}
        while not self.accept("}"):
            a = self.name()
            self.expect("->")
            b = self.name()
            self.expect(";")
            if a.text in src.node_ids:
                if b.text not in tgt.node_ids:
                    raise self.fail(f"{b.text} is not a node of the target side", b)
                if src.node_ids[a.text] in nm:
                    raise self.fail(f"{a.text} mapped twice", a)
                nm[src.node_ids[a.text]] = tgt.node_ids[b.text]
            elif a.text in src.edge_ids:
                if b.text not in tgt.edge_ids:
                    raise self.fail(f"{b.text} is not an edge id of the target side", b)
                if src.edge_ids[a.text] in em:
                    raise self.fail(f"{a.text} mapped twice", a)
                em[src.edge_ids[a.text]] = tgt.edge_ids[b.text]
            else:
                raise self.fail(f"{a.text} is neither a node nor an edge id of the source side", a)
        f = PartialMorphism(src.graph, tgt.graph, nm, em)
        problems = f.violations()
        if problems:
            raise self.fail(f"invalid morphism: {problems[0]}", start)
        return f

    def rule(self, name: Token, sig: Signature) -> UQRule:
        self.expect("{")
        self.expect("left")
        self.expect("{")
        left = self.make_graph(self.body("}"), sig)
        self.expect("}")
        self.expect("right")
        self.expect("{")
        right = self.make_graph(self.body("}"), sig)
        self.expect("}")
        r = self.mapping(left, right)
        quants = []
        while self.tok.text == "forall":
            qtok = self.expect("forall")
            qname = self.name()
            self.expect("{")
            self.expect("left")
            self.expect("{")
            lu = self.make_graph(self.body("}"), sig, base=left)
            self.expect("}")
            self.expect("right")
            self.expect("{")
            ru = self.make_graph(self.body("}"), sig)
            self.expect("}")
            q = self.mapping(lu, ru)
            self.expect("}")
            p = PartialMorphism(
                left.graph,
                lu.graph,
                {v: v for v in left.graph.nodes},
                {e: e for e in left.graph.edges},
            )
            u = Quantification(p, q, qname.text)
            quants.append(u)
            probe = UQRule(name.text, Rule(left.graph, right.graph, r), [u])
            problems = validate_rule(probe)
            if problems:
                raise self.fail(f"invalid quantification: {problems[0]}", qtok)
        self.expect("}")
        rho = UQRule(name.text, Rule(left.graph, right.graph, r), quants)
        problems = validate_rule(rho)
        if problems:
            raise self.fail(f"invalid rule: {problems[0]}", name)
        return rho


def parse_spec(text: str) -> SpecFile:
    """Parse and validate a specification; raises :class:`ParseError`."""
    return _Parser(text).spec()


# -- printing -----------------------------------------------------------------


def _node_names(g: Hypergraph, taken: Optional[Dict[int, str]] = None) -> Dict[int, str]:
    names: Dict[int, str] = dict(taken or {})
    used = set(names.values())
    for v in g.nodes:
        if v in names:
            continue
        cand = g.names.get(v) if g.names else None
        if cand is None or cand in used or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", cand):
            i = v
            cand = f"n{i}"
            while cand in used:
                i += 1
                cand = f"n{i}"
        names[v] = cand
        used.add(cand)
    return names


def _edge_line(lab: str, conn, names: Dict[int, str], ident: Optional[str] = None) -> str:
    head = f"{ident}: " if ident else ""
    return f"{head}{lab}({','.join(names[v] for v in conn)});"


def format_body(
    g: Hypergraph,
    names: Dict[int, str],
    edge_ids: Optional[Dict[int, str]] = None,
    skip_nodes=(),
    skip_edges=(),
) -> str:
    parts = []
    decl = [names[v] for v in g.nodes if v not in skip_nodes]
    if decl:
        parts.append("nodes " + " ".join(decl) + ";")
    for e, (lab, conn) in g.edges.items():
        if e in skip_edges:
            continue
        parts.append(_edge_line(lab, conn, names, (edge_ids or {}).get(e)))
    return " ".join(parts)


def format_graph(name: str, g: Hypergraph) -> str:
    return f"graph {name} {{ {format_body(g, _node_names(g))} }}"


def _fresh_ids(prefix: str, items, used: set) -> Dict[int, str]:
    out = {}
    for x in items:
        cand = f"{prefix}{x}"
        while cand in used:
            cand = "_" + cand
        used.add(cand)
        out[x] = cand
    return out


def format_rule(rho: UQRule) -> str:
    L, R, r = rho.lhs, rho.rhs, rho.base.morphism
    ln = _node_names(L)
    rn = _node_names(R)
    used = set(ln.values()) | set(rn.values())
    le = _fresh_ids("l", L.edges, used)
    re_ = _fresh_ids("r", R.edges, used)
    lines = [f"rule {rho.name} {{"]
    lines.append(f"  left {{ {format_body(L, ln, le)} }}")
    lines.append(f"  right {{ {format_body(R, rn, re_)} }}")
    maps = [f"{ln[v]} -> {rn[w]};" for v, w in r.node_map.items()]
    maps += [f"{le[e]} -> {re_[f]};" for e, f in r.edge_map.items()]
    lines.append(f"  map {{ {' '.join(maps)} }}")
    for i, u in enumerate(rho.quants):
        Lu, Ru = u.p.target, u.q.target
        luname = _node_names(Lu, {u.p.node_map[v]: ln[v] for v in L.nodes})
        lu_edges = {u.p.edge_map[e]: le[e] for e in L.edges}
        used_u = set(used) | set(luname.values())
        lu_edges.update(_fresh_ids("u", [e for e in Lu.edges if e not in lu_edges], used_u))
        runame = _node_names(Ru)
        used_u |= set(runame.values())
        ru_edges = _fresh_ids("v", Ru.edges, used_u)
        lines.append(f"  forall {u.name or f'q{i}'} {{")
        body = format_body(
            Lu, luname, lu_edges, skip_nodes=u.p.image_nodes(), skip_edges=u.p.image_edges()
        )
        lines.append(f"    left {{ {body} }}")
        lines.append(f"    right {{ {format_body(Ru, runame, ru_edges)} }}")
        maps = [f"{luname[v]} -> {runame[w]};" for v, w in u.q.node_map.items()]
        maps += [f"{lu_edges[e]} -> {ru_edges[f]};" for e, f in u.q.edge_map.items()]
        lines.append(f"    map {{ {' '.join(maps)} }}")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines)


def format_spec(spec: SpecFile) -> str:
    sig = " ".join(f"{lab}/{spec.signature.arity[lab]}" for lab in spec.signature.arity)
    out = [f"signature {{ {sig} }}", ""]
    for rho in spec.rules.values():
        out.append(format_rule(rho))
        out.append("")
    for name, g in spec.graphs.items():
        out.append(format_graph(name, g))
    for name in spec.inits:
        out.append(f"init {name};")
    for name in spec.errors:
        out.append(f"error {name};")
    return "\n".join(out) + "\n"
