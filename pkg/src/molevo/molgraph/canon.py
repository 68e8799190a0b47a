"""Canonical atom ranking and canonical SMILES keys."""
from __future__ import annotations

from .elements import atomic_number
from .graph import MolGraph
from .perception import perceive
from .smiles import write_smiles


def _dense(keys: list) -> list[int]:
    order = {k: r for r, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def _refine(graph: MolGraph, rank: list[int]) -> list[int]:
    classes = len(set(rank))
    while True:
        keys = [(rank[i], tuple(sorted((graph.bonds[k].kind, rank[j])
                                       for j, k in graph.adjacency[i])))
                for i in range(len(graph))]
        new = _dense(keys)
        n_new = len(set(new))
        if n_new == classes:
            return new
        rank, classes = new, n_new


def _initial_ranks(graph: MolGraph) -> list[int]:
    inv = [(atomic_number(a.element), a.charge, a.hydrogens, a.aromatic,
            graph.degree(i), a.in_ring) for i, a in enumerate(graph.atoms)]
    return _dense(inv)


def symmetry_classes(graph: MolGraph) -> list[int]:
    """Refined atom classes without tie-breaking (equal class ~ topologically equivalent)."""
    graph = perceive(graph)
    if not len(graph):
        return []
    return _refine(graph, _initial_ranks(graph))


def canonical_ranks(graph: MolGraph) -> list[int]:
    """Rank atoms 0..n-1 independently of input order.

    Ranks start from local invariants, are refined by neighbour ranks and
    bond kinds until stable, and remaining ties are broken one at a time by
    promoting the lowest-index atom of the smallest tied class.
    """
    graph = perceive(graph)
    n = len(graph)
    if n == 0:
        return []
    rank = _refine(graph, _initial_ranks(graph))
    while len(set(rank)) < n:
        counts: dict[int, int] = {}
        for r in rank:
            counts[r] = counts.get(r, 0) + 1
        tied = min(r for r, c in counts.items() if c > 1)
        chosen = min(i for i in range(n) if rank[i] == tied)
        rank = _refine(graph, _dense([(r, 0 if i == chosen else int(r == tied))
                                      for i, r in enumerate(rank)]))
    return rank


def canonical_smiles(graph: MolGraph) -> str:
    """SMILES that is identical for every atom ordering of the same molecule.

    Disconnected components are written separately and joined in sorted order.
    """
    graph = perceive(graph)
    if graph.is_empty:
        return ""
    parts = []
    for comp in graph.components():
        sub = graph.subgraph(comp)
        parts.append(write_smiles(sub, canonical_ranks(sub)))
    return ".".join(sorted(parts))


def canonical_key(graph: MolGraph) -> str:
    """Identity key used for duplicate detection and caching."""
    return canonical_smiles(graph)
