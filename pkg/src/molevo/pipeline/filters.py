"""Corpus filter chain: weight and logP window, element set, charge, ring size, alerts."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..descriptors import alert_names, crippen_logp, molecular_weight
from ..molgraph.graph import MolGraph
from ..molgraph.perception import perceive


@dataclass(frozen=True)
class FilterChain:
    mw_range: tuple[float, float] = (250.0, 350.0)
    logp_max: float = 5.0
    allowed_elements: frozenset[str] = field(
        default_factory=lambda: frozenset({"C", "N", "S", "O", "F", "Cl", "Br", "H"}))
    max_ring_size: int = 8
    neutral_only: bool = True
    use_alerts: bool = True

    def _checks(self):
        # cheapest first so that passes() can stop early
        yield "elements", lambda g: all(a.element in self.allowed_elements for a in g.atoms)
        yield "charge", lambda g: not (self.neutral_only and any(a.charge for a in g.atoms))
        yield "mw_range", lambda g: self.mw_range[0] <= molecular_weight(g) <= self.mw_range[1]
        yield "ring_size", lambda g: all(len(r) <= self.max_ring_size for r in g.rings)
        yield "logp_max", lambda g: crippen_logp(g) < self.logp_max
        yield "alerts", lambda g: not (self.use_alerts and alert_names(g))

    def failures(self, graph: MolGraph) -> list[str]:
        """Names of every predicate the molecule fails (empty list = kept)."""
        graph = perceive(graph)
        return [name for name, ok in self._checks() if not ok(graph)]

    def passes(self, graph: MolGraph) -> bool:
        graph = perceive(graph)
        return all(ok(graph) for _, ok in self._checks())

    @classmethod
    def from_dict(cls, d: dict) -> "FilterChain":
        kw = dict(d)
        if "mw_range" in kw:
            kw["mw_range"] = tuple(kw["mw_range"])
        if "allowed_elements" in kw:
            kw["allowed_elements"] = frozenset(kw["allowed_elements"])
        return cls(**kw)
