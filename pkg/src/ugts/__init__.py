"""Coverability checking for graph transformation systems with universally quantified rules."""

from .core import Hypergraph, PathBound, Signature, isomorphic, validate_graph, within_path_bound
from .morphism import PartialMorphism, compose, enumerate_matches, enumerate_subgraph_quotients, subgraph_leq
from .pushout import PocResult, PushoutResult, is_pushout, minimal_pushout_complements, pushout
from .rules import (
    Instantiation,
    Quantification,
    Rule,
    UQRule,
    applicable_instances,
    apply,
    instantiate,
    instantiation_bound,
    quantified_nodes,
    validate_rule,
)
from .order import Basis, minimize, represented
from .backward import SearchConfig, SearchState, backward_search, backward_step, verdict

__version__ = "0.1.0"
