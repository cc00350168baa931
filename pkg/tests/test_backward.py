import pytest

from support import dining
from ugts.backward import (
    GENERAL,
    INCONCLUSIVE,
    RESTRICTED,
    SAFE,
    SearchConfig,
    backward_search,
    backward_step,
    replay,
    verdict,
)
from ugts.core import EMPTY, Hypergraph, PathBound, are_isomorphic
from ugts.morphism import iter_matches, restrict_codomain
from ugts.order import minimize, represented, same_up_to_iso
from ugts.pushout import minimal_pushout_complements
from ugts.rules import count_vectors, instantiate, instantiation_bound, satisfies_application_condition


@pytest.fixture(scope="module")
def general_run():
    spec = dining()
    return backward_search(spec.rule_list, spec.error_graphs, SearchConfig(), keep_trace=True)


def test_config_checks():
    with pytest.raises(ValueError):
        SearchConfig(mode=RESTRICTED)
    with pytest.raises(ValueError):
        SearchConfig(mode="other")
    with pytest.raises(ValueError):
        SearchConfig(max_iterations=0)


class TestStep:
    def test_get_hungry(self):
        g = Hypergraph.build("p", [("H", "p")])
        out = backward_step(dining().rules["get_hungry"], g)
        assert same_up_to_iso(minimize(out).members, [Hypergraph.build("p", [("T", "p")])])

    def test_only_empty_quotient(self):
        rho = dining().rules["acquire_a"]
        out = minimize(backward_step(rho, EMPTY)).members
        assert same_up_to_iso(out, [rho.lhs])

    def test_application_filter_is_active(self):
        rho = dining().rules["start_eating"]
        g = Hypergraph.build("pq", [("E", "p"), ("F", "qp")])
        qn = rho.qnodes()
        rejected = 0
        for total in range(instantiation_bound(rho, g) + 1):
            for counts in count_vectors(1, total):
                inst = instantiate(rho, counts)
                for cm in iter_matches(inst.rbar, g):
                    for poc in minimal_pushout_complements(inst.gamma, cm):
                        if not satisfies_application_condition(rho, inst, poc.match, qn):
                            rejected += 1
        assert rejected > 0
        trace = []
        backward_step(rho, g, SearchConfig(postcond_lift=False), trace)
        for entry in trace:
            inst = instantiate(rho, entry.counts)
            assert satisfies_application_condition(rho, inst, entry.match, qn)

    def test_restricted_rejects_long_graph(self):
        g = Hypergraph.build("abc", [("F", "ab"), ("F", "bc")])
        with pytest.raises(ValueError):
            backward_step(dining().rules["get_hungry"], g, SearchConfig(RESTRICTED, PathBound(1)))

    @pytest.mark.parametrize("name", ["start_eating", "release_all", "acquire_a", "get_hungry"])
    def test_lift_and_bound_transparent(self, name):
        rho = dining().rules[name]
        for g in dining().error_graphs + [Hypergraph.build("pqr", [("E", "p"), ("OF", "qp"), ("H", "r"), ("F", "rq")])]:
            ref = minimize(backward_step(rho, g)).members
            for cfg in (SearchConfig(postcond_lift=False), SearchConfig(coarse_bound=True)):
                assert same_up_to_iso(minimize(backward_step(rho, g, cfg)).members, ref)


class TestSearch:
    def test_no_finals(self):
        st = backward_search(dining().rule_list, [])
        assert st.stationary and len(st.working) == 0

    def test_dining_general(self, general_run):
        assert general_run.stationary
        assert len(general_run.working) == 12
        for e in dining().error_graphs:
            assert any(are_isomorphic(e, m) for m in general_run.working)
        for m in general_run.working:
            assert any(lab == "E" for lab, _ in m.edges.values())

    def test_verdicts(self, general_run):
        spec = dining()
        for name, g in spec.init_graphs.items():
            assert verdict(g, general_run) == SAFE, name
        bad, _, _ = spec.error_graphs[0].disjoint_union(spec.graphs["ring2"])
        assert verdict(bad, general_run) == INCONCLUSIVE

    def test_budget(self):
        spec = dining()
        st = backward_search(spec.rule_list, spec.error_graphs, SearchConfig(max_iterations=1))
        assert not st.stationary
        assert verdict(spec.graphs["ring2"], st) == INCONCLUSIVE

    def test_replay(self, general_run):
        rules = dining().rules
        assert general_run.trace
        for entry in general_run.trace:
            h = replay(entry, rules)
            assert h is not None

    def test_restricted_needs_finals_inside(self):
        g = Hypergraph.build("abc", [("E", "a"), ("F", "ab"), ("F", "bc")])
        with pytest.raises(ValueError):
            backward_search(dining().rule_list, [g], SearchConfig(RESTRICTED, PathBound(1)))

    def test_restricted_stationary(self, general_run):
        spec = dining()
        st = backward_search(spec.rule_list, spec.error_graphs, SearchConfig(RESTRICTED, PathBound(2)))
        assert st.stationary
        assert same_up_to_iso(st.working.members, general_run.working.members)

    def test_upward_closure_grows(self):
        spec = dining()
        prev = []

        def progress(state, produced, fresh):
            for m in prev:
                assert represented(m, state.working)
            prev[:] = list(state.working)

        backward_search(spec.rule_list, spec.error_graphs, progress=progress)


def test_quotient_dedup_matches_all_subsets(monkeypatch):
    import ugts.backward as bw
    from ugts.morphism import subgraph_subsets
    from ugts.oracle import EnumBounds, enumerate_graphs

    spec = dining()
    hosts = list(enumerate_graphs(spec.signature, EnumBounds(3, 3, max_elements=3)))
    deduped = {(id(g), rho.name): minimize(backward_step(rho, g)).members for g in hosts for rho in spec.rule_list}
    monkeypatch.setattr(bw, "_delta_classes", lambda rho, inst: subgraph_subsets(inst.rbar))
    for g in hosts:
        for rho in spec.rule_list:
            assert same_up_to_iso(minimize(backward_step(rho, g)).members, deduped[(id(g), rho.name)])
