"""Novelty lookup and local rule-based appraisal of Pareto compounds."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..descriptors import alert_names, compute_descriptors
from ..molgraph.graph import MolGraph
from ..molgraph.smiles import parse_smiles
from .store import CompoundStore


def novelty_check(keys: Sequence[str], store: CompoundStore,
                  initial_keys: Iterable[str] = ()) -> list[bool]:
    """True (novel) when a key is neither in the store nor in the run's initial sample."""
    initial = set(initial_keys)
    return [k not in store and k not in initial for k in keys]


@dataclass(frozen=True)
class LipinskiRules:
    mw_max: float = 500.0
    logp_max: float = 5.0
    hbd_max: int = 5
    hba_max: int = 10
    max_violations: int = 1


@dataclass
class Appraisal:
    smiles: str
    mw: float
    logp: float
    hbd: int
    hba: int
    violations: list[str]
    lipinski_pass: bool
    alerts: list[str]


@dataclass
class AppraisalReport:
    rows: list[Appraisal] = field(default_factory=list)

    @property
    def summary(self) -> dict[str, int]:
        return {"compounds": len(self.rows),
                "lipinski_pass": sum(r.lipinski_pass for r in self.rows),
                "flagged_alerts": sum(bool(r.alerts) for r in self.rows)}


def appraise_graph(smiles: str, graph: MolGraph, rules: LipinskiRules) -> Appraisal:
    d = compute_descriptors(graph)
    violations = [name for name, bad in (("mw", d.mw > rules.mw_max), ("logp", d.logp > rules.logp_max),
                                         ("hbd", d.hbd > rules.hbd_max), ("hba", d.hba > rules.hba_max)) if bad]
    return Appraisal(smiles, d.mw, d.logp, d.hbd, d.hba, violations,
                     len(violations) <= rules.max_violations, alert_names(graph))


def appraise(smiles: Sequence[str], rules: LipinskiRules | None = None) -> AppraisalReport:
    """Per-compound Lipinski pass/fail and alert flags."""
    rules = rules or LipinskiRules()
    return AppraisalReport([appraise_graph(s, parse_smiles(s), rules) for s in smiles])
