"""Ring membership and aromaticity perception."""
from __future__ import annotations

from dataclasses import replace

from .graph import MolGraph
from .rings import sssr

_EXO_ACCEPTORS = frozenset({"O", "N", "S"})


def _pi_electrons(graph: MolGraph, i: int, ring_bond: list[bool]) -> int | None:
    """Electrons atom ``i`` donates to a ring pi system; None if it cannot take part."""
    atom = graph.atoms[i]
    doubles = []
    for j, k in graph.adjacency[i]:
        order = graph.bonds[k].order
        if order == 3:
            return None
        if order == 2:
            doubles.append((j, k))
    if len(doubles) > 1:
        return None
    if doubles:
        j, k = doubles[0]
        if ring_bond[k]:
            return 1
        # exocyclic C=O / C=N / C=S keeps the ring atom sp2 but empty
        if graph.atoms[j].element in _EXO_ACCEPTORS and atom.element in ("C", "S", "P", "N"):
            return 0
        return None
    el, q = atom.element, atom.charge
    connections = graph.degree(i) + atom.hydrogens
    if el == "C":
        if q == -1:
            return 2
        if q == 1:
            return 0
        return None
    if el == "N":
        if q == 0 and connections == 3:
            return 2
        if q == -1 and connections == 2:
            return 2
        return None
    if el in ("O", "S") and q == 0 and connections == 2:
        return 2
    if el == "P" and q == 0 and connections == 3:
        return 2
    if el == "B" and q == 0 and connections == 3:
        return 0
    return None


def perceive(graph: MolGraph) -> MolGraph:
    """Return a copy annotated with SSSR rings, ring flags and aromaticity.

    A ring of 5 to 7 atoms is aromatic when every member can join the pi
    system and the electron count is 4n+2. Counting is per atom and does not
    depend on which Kekulé structure is stored.
    """
    if graph.perceived:
        return graph
    rings = sssr(graph)
    ring_bond = [False] * len(graph.bonds)
    ring_atom = [False] * len(graph)
    ring_bond_ids = []
    for ring in rings:
        ids = []
        for pos, a in enumerate(ring):
            b = ring[(pos + 1) % len(ring)]
            k = graph.bond_index(a, b)
            ring_bond[k] = True
            ring_atom[a] = True
            ids.append(k)
        ring_bond_ids.append(ids)

    electrons = [None] * len(graph)
    for i in range(len(graph)):
        if ring_atom[i]:
            electrons[i] = _pi_electrons(graph, i, ring_bond)

    arom_atom = [False] * len(graph)
    arom_bond = [False] * len(graph.bonds)
    for ring, ids in zip(rings, ring_bond_ids):
        if not 5 <= len(ring) <= 7:
            continue
        counts = [electrons[a] for a in ring]
        if any(c is None for c in counts):
            continue
        total = sum(counts)
        if total % 4 == 2:
            for a in ring:
                arom_atom[a] = True
            for k in ids:
                arom_bond[k] = True

    atoms = [replace(a, aromatic=arom_atom[i], in_ring=ring_atom[i])
             for i, a in enumerate(graph.atoms)]
    bonds = [replace(b, aromatic=arom_bond[k], in_ring=ring_bond[k])
             for k, b in enumerate(graph.bonds)]
    return MolGraph(atoms, bonds, rings, perceived=True)
