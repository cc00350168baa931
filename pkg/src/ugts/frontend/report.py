"""Search results in a stable, serialisable form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List

from ..backward import SAFE, SearchConfig, SearchState, verdict
from ..core import Hypergraph, canonical_graph
from ..order import Basis, represented
from .parser import SpecFile, _node_names, format_body


def canonical_bodies(graphs) -> List[str]:
    """DSL bodies of the canonical forms, sorted; equal lists mean equal iso classes."""
    return sorted(format_body(c, _node_names(c)) for c in map(canonical_graph, graphs))


@dataclass
class Report:
    basis: Basis
    verdicts: Dict[str, str]
    iterations: int
    steps: int
    wall_ms: int
    stationary: bool
    inits: Dict[str, Hypergraph] = field(default_factory=dict)

    @classmethod
    def from_search(cls, spec: SpecFile, state: SearchState, cfg: SearchConfig) -> "Report":
        verdicts = {name: verdict(g, state, cfg) for name, g in spec.init_graphs.items()}
        return cls(
            state.working, verdicts, state.iteration, state.steps, state.wall_ms, state.stationary, spec.init_graphs
        )

    @property
    def all_safe(self) -> bool:
        return all(v == SAFE for v in self.verdicts.values())

    def check(self) -> List[str]:
        """Consistency problems between the verdicts and the basis (ideally none)."""
        return [
            name
            for name, v in self.verdicts.items()
            if (v == SAFE) != (self.stationary and not represented(self.inits[name], self.basis))
        ]

    def serialised_basis(self) -> List[str]:
        return [f"graph b{i} {{ {body} }}" for i, body in enumerate(canonical_bodies(self.basis))]

    def to_dict(self, with_time: bool = True) -> dict:
        return {
            "stationary": self.stationary,
            "basis": self.serialised_basis(),
            "verdicts": dict(sorted(self.verdicts.items())),
            "stats": {
                "iterations": self.iterations,
                "backward_steps": self.steps,
                "wall_ms": self.wall_ms if with_time else 0,
            },
        }

    def to_json(self, with_time: bool = True) -> str:
        return json.dumps(self.to_dict(with_time), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [
            f"stationary: {'yes' if self.stationary else 'no'}",
            f"iterations: {self.iterations}  backward steps: {self.steps}  time: {self.wall_ms} ms",
            f"basis ({len(self.basis)} graphs):",
        ]
        lines += ["  " + s for s in self.serialised_basis()]
        lines += [f"{name}: {v}" for name, v in sorted(self.verdicts.items())]
        return "\n".join(lines) + "\n"

