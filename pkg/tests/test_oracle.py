import pytest

from support import dining
from ugts.backward import RESTRICTED, SearchConfig
from ugts.core import Hypergraph, PathBound, Signature, are_isomorphic, within_path_bound
from ugts.morphism import iter_matches, restrict_codomain
from ugts.oracle import (
    EnumBounds,
    GuardError,
    check_agreement,
    complement_oracle,
    enumerate_graphs,
    forward_table,
    pred_oracle,
)
from ugts.order import minimize, same_up_to_iso
from ugts.pushout import minimal_pushout_complements
from ugts.backward import _delta_classes
from ugts.rules import instantiate


class TestEnumerate:
    def test_unary(self):
        gs = list(enumerate_graphs(Signature({"T": 1}), EnumBounds(1, 1)))
        assert len(gs) == 3

    def test_no_nodes(self):
        gs = list(enumerate_graphs(Signature({"T": 1, "F": 2}), EnumBounds(0, 3)))
        assert [g.size for g in gs] == [0]

    def test_binary_with_bound(self):
        gs = list(enumerate_graphs(Signature({"F": 2}), EnumBounds(2, 1, path_bound=PathBound(1))))
        assert any(are_isomorphic(g, Hypergraph.build("ab", [("F", "ab")])) for g in gs)
        assert all(within_path_bound(g, PathBound(1)) for g in gs)

    def test_pairwise_distinct_and_stable(self):
        b = EnumBounds(3, 2)
        sig = Signature({"T": 1, "F": 2})
        gs = list(enumerate_graphs(sig, b))
        assert gs == list(enumerate_graphs(sig, b))
        for i, a in enumerate(gs):
            for c in gs[i + 1 :]:
                assert not are_isomorphic(a, c)

    def test_guard(self):
        with pytest.raises(GuardError):
            EnumBounds(5, 5)
        assert EnumBounds(6, 6, max_elements=6).total == 6


class TestPred:
    def test_get_hungry(self):
        spec = dining()
        out = pred_oracle([spec.rules["get_hungry"]], Hypergraph.build("p", [("H", "p")]), EnumBounds(3, 3), spec.signature)
        assert same_up_to_iso(minimize(out).members, [Hypergraph.build("p", [("T", "p")])])

    def test_no_rules(self):
        spec = dining()
        assert pred_oracle([], Hypergraph.build("p", []), EnumBounds(2, 2), spec.signature) == []

    def test_empty_target(self):
        spec = dining()
        b = EnumBounds(2, 2)
        hosts = list(enumerate_graphs(spec.signature, b))
        table = forward_table(spec.rule_list, hosts)
        got = pred_oracle(spec.rule_list, Hypergraph(), b, table=table)
        assert len(got) == sum(1 for _, succ in table if succ)

    def test_needs_signature(self):
        with pytest.raises(ValueError):
            pred_oracle([], Hypergraph(), EnumBounds(1, 1))


def test_agreement_small_hosts():
    spec = dining()
    k = PathBound(3)
    b = EnumBounds(4, 4, path_bound=k, max_elements=4)
    hosts = list(enumerate_graphs(spec.signature, b))
    table = forward_table(spec.rule_list, hosts)
    cfg = SearchConfig(RESTRICTED, k)
    for g in spec.error_graphs + hosts[::7]:
        res = check_agreement(spec.rule_list, g, b, table, cfg)
        assert res.ok, (g, res.missing, res.extra)


def test_complement_oracle_sample():
    spec = dining()
    hosts = list(enumerate_graphs(spec.signature, EnumBounds(3, 3, max_elements=3)))
    for rho in spec.rule_list:
        inst = instantiate(rho, tuple(1 for _ in rho.quants))
        for sub in _delta_classes(rho, inst):
            delta = restrict_codomain(inst.gamma, sub)
            for h in hosts:
                for cm in iter_matches(sub, h):
                    ours = [p.complement for p in minimal_pushout_complements(delta, cm)]
                    theirs = minimize(p.complement for p in complement_oracle(delta, cm, spec.signature))
                    assert same_up_to_iso(theirs.members, ours)
