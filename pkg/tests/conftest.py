import os
from functools import lru_cache

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings

from molevo._data import data_path

settings.register_profile("default", max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@lru_cache(maxsize=None)
def corpus_smiles() -> tuple[str, ...]:
    with open(data_path("corpus.smi")) as fh:
        return tuple(line.split()[0] for line in fh if line.strip())


@pytest.fixture(scope="session")
def corpus():
    return corpus_smiles()


def to_nx(graph) -> nx.Graph:
    """Labelled networkx view; aromatic bonds compare as 'ar' whatever their Kekule order."""
    g = nx.Graph()
    for i, a in enumerate(graph.atoms):
        g.add_node(i, label=(a.element, a.charge, a.hydrogens))
    for b in graph.bonds:
        g.add_edge(b.a, b.b, label="ar" if b.aromatic else b.order)
    return g


def isomorphic(g1, g2) -> bool:
    return nx.is_isomorphic(to_nx(g1), to_nx(g2),
                            node_match=lambda x, y: x["label"] == y["label"],
                            edge_match=lambda x, y: x["label"] == y["label"])


def record_acceptance(number: int, passed: bool, detail: str) -> None:
    ACCEPTANCE[number] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} criterion {n:2d}: {detail}")
