import itertools

import pytest

from support import dining
from ugts.core import Hypergraph, are_isomorphic
from ugts.frontend import parse_spec
from ugts.morphism import PartialMorphism, compose, morphism_encoding
from ugts.pushout import pushout
from ugts.rules import (
    Quantification,
    UQRule,
    applicable_instances,
    apply,
    count_vectors,
    extend,
    instantiate,
    instantiation_bound,
    quantified_nodes,
    quantified_nodes_of_rule,
    step_orders,
    validate_rule,
)

SYNTH = """
signature { A/1 B/1 C/2 D/2 G/1 K/2 }
// the first quantification also adds G(p), an edge on an old node only
rule wide {
  left  { nodes p; a: A(p); }
  right { nodes p; B(p); }
  map   { p -> p; }
  forall first {
    left  { nodes x; C(p,x); }
    right { nodes p x; a: A(p); D(p,x); G(p); }
    map   { p -> p; x -> x; a -> a; }
  }
  forall second {
    left  { nodes y; c: K(y,p); }
    right { nodes p y; a: A(p); c: K(y,p); }
    map   { p -> p; y -> y; a -> a; c -> c; }
  }
}
"""


def synth():
    return parse_spec(SYNTH).rules["wide"]


def pair_iso(i1, i2):
    """(pi, gamma) pairs equal up to isomorphism, quantified nodes marked."""
    return are_isomorphic(morphism_encoding(i1.gamma), morphism_encoding(i2.gamma)) and are_isomorphic(
        morphism_encoding(i1.pi), morphism_encoding(i2.pi)
    )


class TestValidation:
    def test_fixture_rules_valid(self):
        for rho in dining().rule_list:
            assert validate_rule(rho) == [], rho.name

    def test_plain_rule(self):
        assert validate_rule(dining().rules["get_hungry"]) == []

    def test_q_drops_shared_node(self):
        rho = dining().rules["release_all"]
        u = rho.quants[0]
        q = PartialMorphism(u.q.source, u.q.target, {k: v for k, v in u.q.node_map.items() if k != u.p.node_map[0]}, {})
        bad = UQRule("bad", rho.base, [Quantification(u.p, q)])
        assert any("q∘p undefined" in p for p in validate_rule(bad))

    def test_empty_quantified_nodes(self):
        rho = dining().rules["get_hungry"]
        L = rho.lhs
        Lu = Hypergraph(list(L.nodes) + [7], L.edges)
        p = PartialMorphism(L, Lu, {v: v for v in L.nodes}, {e: e for e in L.edges})
        q = PartialMorphism.identity(Lu)
        bad = UQRule("bad", rho.base, [Quantification(p, q)])
        assert quantified_nodes(bad.quants[0]) == set()
        assert any("empty set of quantified nodes" in m for m in validate_rule(bad))

    def test_two_preimages(self):
        rho = dining().rules["release_all"]
        u = rho.quants[0]
        Lu = u.p.target
        merged = Hypergraph([0], {})
        q = PartialMorphism(Lu, merged, {v: 0 for v in Lu.nodes}, {})
        bad = UQRule("bad", rho.base, [Quantification(u.p, q)])
        assert any("preimages" in m for m in validate_rule(bad))


class TestQuantifiedNodes:
    def test_release_all(self):
        rho = dining().rules["release_all"]
        qn = quantified_nodes(rho.quants[0])
        assert [rho.lhs.node_name(v) for v in qn] == ["p"]

    def test_union(self):
        rho = synth()
        assert quantified_nodes_of_rule(rho) == quantified_nodes(rho.quants[0]) | quantified_nodes(rho.quants[1])
        assert validate_rule(rho) == []


class TestInstantiate:
    def test_zero(self):
        rho = dining().rules["release_all"]
        inst = instantiate(rho, (0,))
        assert inst.pi.is_iso() and inst.gamma is rho.base.morphism
        assert inst.length == 0

    def test_release_all_one(self):
        inst = instantiate(dining().rules["release_all"], (1,))
        assert are_isomorphic(inst.lbar, Hypergraph.build("pq", [("E", "p"), ("OF", "qp")]))
        assert are_isomorphic(inst.rbar, Hypergraph.build("pq", [("T", "p"), ("F", "qp")]))
        assert inst.pi.is_match()

    def test_count_mismatch(self):
        with pytest.raises(ValueError):
            instantiate(dining().rules["release_all"], (1, 1))

    def test_interleavings(self):
        rho = synth()
        ref = instantiate(rho, (2, 1))
        for order in step_orders((2, 1)):
            assert pair_iso(ref, instantiate(rho, (2, 1), order))

    def test_bad_order(self):
        with pytest.raises(ValueError):
            instantiate(synth(), (1, 0), [1])

    def test_monotone_embedding(self):
        for rho in dining().rule_list + [synth()]:
            for i in range(len(rho.quants)):
                for total in range(3):
                    for counts in count_vectors(len(rho.quants), total):
                        inst = instantiate(rho, counts)
                        new, r_inj = extend(rho, inst, i)
                        l_inj = pushout(inst.pi, rho.quants[i].p).left_inj
                        # gamma . mu' = mu'' . eta, with mu', mu'' the inverses of the injections
                        mu1, mu2 = l_inj.inverse(), r_inj.inverse()
                        assert mu1.is_subgraph_witness() and mu2.is_subgraph_witness()
                        lhs = compose(mu1, inst.gamma)
                        rhs = compose(new.gamma, mu2)
                        assert lhs.same_as(rhs)


class TestBound:
    def test_no_quants(self):
        g = Hypergraph.build("abc", [("T", "a")])
        assert instantiation_bound(dining().rules["get_hungry"], g) == 0

    def test_release_all(self):
        g = Hypergraph.build("abc", [("T", "a"), ("F", "ab"), ("F", "bc"), ("E", "c")])
        assert instantiation_bound(dining().rules["release_all"], g) == 3
        assert instantiation_bound(dining().rules["release_all"], g, coarse=True) == 7

    def test_generic(self):
        g = Hypergraph.build("abc", [("A", "a"), ("C", "ab"), ("C", "bc"), ("B", "c")])
        assert instantiation_bound(synth(), g) == 7


class TestApplication:
    def test_start_eating_two_forks(self):
        g = Hypergraph.build("pab", [("H", "p"), ("OF", "ap"), ("OF", "bp")])
        found = applicable_instances(dining().rules["start_eating"], g)
        # the two matches differ only by swapping the neighbours
        assert [inst.counts for inst, _ in found] == [(2,), (2,)]

    def test_start_eating_free_fork(self):
        g = Hypergraph.build("pab", [("H", "p"), ("F", "ap")])
        assert applicable_instances(dining().rules["start_eating"], g) == []

    def test_get_hungry(self):
        g = Hypergraph.build("p", [("T", "p")])
        found = applicable_instances(dining().rules["get_hungry"], g)
        assert len(found) == 1 and found[0][0].length == 0
        inst, m = found[0]
        assert are_isomorphic(apply(inst, m, g), Hypergraph.build("p", [("H", "p")]))

    def test_release_all(self):
        g = Hypergraph.build("pab", [("E", "p"), ("OF", "ap"), ("OF", "bp")])
        found = applicable_instances(dining().rules["release_all"], g)
        assert {inst.counts for inst, _ in found} == {(2,)}
        want = Hypergraph.build("pab", [("T", "p"), ("F", "ap"), ("F", "bp")])
        assert all(are_isomorphic(apply(inst, m, g), want) for inst, m in found)

    def test_condition_covers_all_quantifications(self):
        # an unused K edge at the quantified node blocks the rule
        g = Hypergraph.build("pxy", [("A", "p"), ("C", "px"), ("K", "yp")])
        counts = {inst.counts for inst, _ in applicable_instances(synth(), g)}
        assert counts == {(1, 1)}

    def test_apply_rejects_foreign_match(self):
        inst = instantiate(dining().rules["get_hungry"], ())
        g = Hypergraph.build("p", [("T", "p")])
        other = Hypergraph.build("q", [("H", "q")])
        with pytest.raises(ValueError):
            apply(inst, PartialMorphism(other, g, {0: 0}, {}), g)


def test_order_independence_up_to_three():
    for rho in dining().rule_list + [synth()]:
        for total in range(4):
            for counts in count_vectors(len(rho.quants), total):
                ref = instantiate(rho, counts)
                for order in step_orders(counts):
                    assert pair_iso(ref, instantiate(rho, counts, order))
