"""Unweighted quantitative estimate of drug-likeness."""
from __future__ import annotations

import math

from .._data import load_json
from ..descriptors import DescriptorVector, compute_descriptors
from ..molgraph.graph import MolGraph
from ..molgraph.perception import perceive

_FIELDS = {"MW": "mw", "ALOGP": "logp", "HBA": "hba", "HBD": "hbd", "PSA": "tpsa",
           "ROTB": "rotatable_bonds", "AROM": "aromatic_rings", "ALERTS": "alerts"}


def ads(x: float, a: float, b: float, c: float, d: float, e: float, f: float, dmax: float) -> float:
    """Asymmetric double sigmoid desirability."""
    exp1 = 1.0 + math.exp(-(x - c + d / 2.0) / e)
    exp2 = 1.0 + math.exp(-(x - c - d / 2.0) / f)
    return (a + b / exp1 * (1.0 - 1.0 / exp2)) / dmax


def desirabilities(desc: DescriptorVector) -> dict[str, float]:
    table = load_json("qed_ads.json")
    return {name: ads(float(getattr(desc, _FIELDS[name])), *table["params"][name])
            for name in table["order"]}


def qed_from_descriptors(desc: DescriptorVector) -> float:
    ds = [min(1.0, max(1e-6, d)) for d in desirabilities(desc).values()]
    return math.exp(sum(math.log(d) for d in ds) / len(ds))


def qed(graph: MolGraph) -> float:
    graph = perceive(graph)
    if graph.is_empty:
        return 0.0
    return qed_from_descriptors(compute_descriptors(graph))
