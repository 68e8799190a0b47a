"""Declarative multi-property tasks and their evaluation into objective vectors."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .._data import data_path
from ..descriptors import compute_descriptors
from ..fingerprints import Fingerprint, fingerprint, tanimoto
from ..molgraph.graph import MolGraph
from ..molgraph.perception import perceive
from ..molgraph.smiles import parse_smiles
from .modifiers import ModifierError, ScoreModifier
from .qed import qed_from_descriptors
from .sascore import sa_normalized

ObjectiveVector = tuple[float, ...]

_DESCRIPTORS = ("mw", "logp", "hbd", "hba", "tpsa", "rotatable_bonds", "aromatic_rings",
                "rings", "heavy_atoms", "alerts")


class UnknownTaskError(KeyError):
    pass


class TaskSpecError(ValueError):
    pass


def _descriptors(graph: MolGraph, cache: dict):
    if "desc" not in cache:
        cache["desc"] = compute_descriptors(graph)
    return cache["desc"]


def _descriptor_value(name: str, graph: MolGraph, cache: dict) -> float:
    if name.startswith("count:"):
        el = name.split(":", 1)[1]
        return float(sum(a.element == el for a in graph.atoms))
    return float(getattr(_descriptors(graph, cache), name))


@dataclass(frozen=True)
class Component:
    label: str
    source: str  # qed | sa_normalized | descriptor | similarity | composite
    modifier: ScoreModifier = field(default_factory=ScoreModifier)
    descriptor: str = ""
    fp_kind: str = ""
    radius: int = 2
    target: Fingerprint | None = None
    parts: tuple[tuple[str, float, ScoreModifier], ...] = ()

    def raw(self, graph: MolGraph, cache: dict) -> float:
        if self.source == "qed":
            return qed_from_descriptors(_descriptors(graph, cache)) if len(graph) else 0.0
        if self.source == "sa_normalized":
            return sa_normalized(graph)
        if self.source == "descriptor":
            return _descriptor_value(self.descriptor, graph, cache)
        if self.source == "similarity":
            fp = fingerprint(graph, self.fp_kind, self.radius, self.target.n_bits)
            return tanimoto(fp, self.target)
        if self.source == "composite":
            total = sum(w for _, w, _ in self.parts)
            return sum(w * mod(_descriptor_value(d, graph, cache))
                       for d, w, mod in self.parts) / total
        raise TaskSpecError(f"unknown source {self.source!r}")

    def score(self, graph: MolGraph, cache: dict) -> float:
        return self.modifier(self.raw(graph, cache))


@dataclass(frozen=True)
class TaskSpec:
    name: str
    components: tuple[Component, ...]
    target_smiles: str | None = None
    approximate: bool = False

    @property
    def m(self) -> int:
        return len(self.components)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(c.label for c in self.components)


def _parse_component(d: dict, target_smiles: str | None) -> Component:
    try:
        source = d["source"]
        label = d.get("label", source)
        mod = ScoreModifier.from_dict(d.get("modifier", {}))
        if source == "descriptor":
            name = d["descriptor"]
            if name not in _DESCRIPTORS and not name.startswith("count:"):
                raise TaskSpecError(f"unknown descriptor {name!r}")
            return Component(label, source, mod, descriptor=name)
        if source == "similarity":
            smi = d.get("target_smiles", target_smiles)
            if not smi:
                raise TaskSpecError(f"similarity component {label!r} has no target")
            kind, radius = d["fingerprint"], int(d.get("radius", 2))
            target = fingerprint(parse_smiles(smi), kind, radius, int(d.get("n_bits", 2048)))
            return Component(label, source, mod, fp_kind=kind, radius=radius, target=target)
        if source == "composite":
            parts = tuple((p["descriptor"], float(p.get("weight", 1.0)),
                           ScoreModifier.from_dict(p["modifier"])) for p in d["parts"])
            if not parts or sum(w for _, w, _ in parts) <= 0:
                raise TaskSpecError(f"composite {label!r} needs positive weights")
            return Component(label, source, mod, parts=parts)
        if source in ("qed", "sa_normalized"):
            return Component(label, source, mod)
        raise TaskSpecError(f"unknown component source {source!r}")
    except (KeyError, TypeError, ModifierError) as e:
        raise TaskSpecError(f"malformed component {d!r}: {e}") from None


def bundled_tasks() -> list[str]:
    return sorted(p.stem for p in Path(data_path("tasks")).glob("*.json"))


def task_from_dict(d: dict) -> TaskSpec:
    if not isinstance(d, dict) or "name" not in d or "components" not in d:
        raise TaskSpecError("task spec needs 'name' and 'components'")
    target = d.get("target_smiles")
    comps = [Component("QED", "qed"), Component("SA", "sa_normalized")]
    comps += [_parse_component(c, target) for c in d["components"]]
    return TaskSpec(d["name"], tuple(comps), target, bool(d.get("approximate", False)))


def load_task(name_or_path: str | Path) -> TaskSpec:
    """Load a bundled task by (case-insensitive) name, or a task file by path.

    QED and normalized SA are always prepended to the task's own components.
    """
    path = Path(name_or_path)
    if not path.suffix == ".json" or not path.exists():
        key = str(name_or_path).lower()
        if key not in bundled_tasks():
            raise UnknownTaskError(f"unknown task {name_or_path!r}; bundled: {bundled_tasks()}")
        path = Path(data_path("tasks")) / f"{key}.json"
    try:
        with open(path) as fh:
            d = json.load(fh)
    except json.JSONDecodeError as e:
        raise TaskSpecError(f"{path}: {e}") from None
    return task_from_dict(d)


def evaluate(graph: MolGraph, task: TaskSpec) -> ObjectiveVector:
    """Objective vector (maximization, each entry in [0, 1])."""
    graph = perceive(graph)
    cache: dict = {}
    return tuple(c.score(graph, cache) for c in task.components)
