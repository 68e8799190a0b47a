"""Circular (ECFP/FCFP) and atom-pair fingerprints with Tanimoto similarity."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .molgraph.elements import HALOGENS, atomic_number
from .molgraph.graph import MolGraph
from .molgraph.perception import perceive

_MASK = (1 << 64) - 1


def mix64(*values: int) -> int:
    """Seedless 64-bit mixing hash (splitmix64 finaliser chained over inputs)."""
    h = 0x9E3779B97F4A7C15
    for v in values:
        h = (h ^ (v & _MASK)) & _MASK
        h = (h + 0x9E3779B97F4A7C15) & _MASK
        h = ((h ^ (h >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        h = ((h ^ (h >> 27)) * 0x94D049BB133111EB) & _MASK
        h ^= h >> 31
    return h


@dataclass(frozen=True)
class Fingerprint:
    bits: frozenset[int]
    n_bits: int = 2048
    radius: int = 2
    kind: str = "ecfp"

    @property
    def popcount(self) -> int:
        return len(self.bits)

    def to_array(self) -> np.ndarray:
        arr = np.zeros(self.n_bits, dtype=np.uint8)
        if self.bits:
            arr[list(self.bits)] = 1
        return arr


class FingerprintMismatch(ValueError):
    pass


# ----------------------------------------------------------------- invariants


def _ecfp_invariants(graph: MolGraph) -> list[int]:
    return [mix64(atomic_number(a.element), graph.degree(i), a.charge & 0xFF, a.hydrogens,
                  int(a.in_ring), int(a.aromatic))
            for i, a in enumerate(graph.atoms)]


DONOR, ACCEPTOR, AROMATIC, HALOGEN, BASIC, ACIDIC = (1, 2, 4, 8, 16, 32)


def _carbonyl_like(graph: MolGraph, i: int) -> bool:
    return any(graph.bonds[k].order == 2 and not graph.bonds[k].aromatic
               and graph.atoms[j].element in ("O", "S") for j, k in graph.adjacency[i])


def pharmacophore_roles(graph: MolGraph) -> list[int]:
    """Role bitmask per atom: donor, acceptor, aromatic, halogen, basic, acidic.

    Donor: N/O carrying H. Acceptor: O, pyridine-type n, nitrile N and
    non-amide trivalent N. Basic: aliphatic amines not attached to carbonyl or
    aromatic atoms, amidines/guanidines, positive N. Acidic: OH or O- on a
    carbonyl-like C, S or P.
    """
    graph = perceive(graph)
    roles = []
    for i, a in enumerate(graph.atoms):
        r = 0
        el = a.element
        nbrs = graph.adjacency[i]
        if el in ("N", "O") and a.hydrogens:
            r |= DONOR
        if el == "O" and a.charge <= 0:
            r |= ACCEPTOR
        if el == "N" and a.charge == 0:
            if a.aromatic:
                if a.hydrogens == 0 and graph.degree(i) == 2:
                    r |= ACCEPTOR
            elif any(graph.bonds[k].order == 3 for _, k in nbrs):
                r |= ACCEPTOR
            elif graph.total_valence(i) == 3 and graph.degree(i) + a.hydrogens == 3:
                amide = any(_carbonyl_like(graph, j) for j, _ in nbrs)
                if not amide:
                    r |= ACCEPTOR
                    if not any(graph.atoms[j].aromatic for j, _ in nbrs):
                        r |= BASIC
            elif any(graph.bonds[k].order == 2 and graph.atoms[j].element == "C"
                     and sum(graph.atoms[x].element == "N" for x in graph.neighbors(j)) >= 2
                     for j, k in nbrs):
                r |= BASIC  # amidine / guanidine imino N
        if el == "N" and a.charge > 0 and a.hydrogens:
            r |= BASIC
        if el == "O" and (a.hydrogens or a.charge < 0) and len(nbrs) == 1:
            j = nbrs[0][0]
            if graph.atoms[j].element in ("S", "P") or (
                    graph.atoms[j].element == "C" and _carbonyl_like(graph, j)):
                r |= ACIDIC
        if a.aromatic:
            r |= AROMATIC
        if el in HALOGENS:
            r |= HALOGEN
        roles.append(r)
    return roles


def _fcfp_invariants(graph: MolGraph) -> list[int]:
    return [mix64(0xFC, r) for r in pharmacophore_roles(graph)]


# ----------------------------------------------------------------- Morgan iteration


def _morgan_environments(graph: MolGraph, invariants: list[int], radius: int) -> list[int]:
    """Identifiers of every distinct atom environment up to ``radius``.

    All radius-0 atom identifiers are listed; at larger radii an environment
    is listed only if its bond set is new and still growing. Repeated
    identifiers are kept so that callers can count them.
    """
    n = len(graph)
    ids = list(invariants)
    found = list(ids)
    seen: set[frozenset] = set()
    env_bonds: list[frozenset] = [frozenset() for _ in range(n)]
    for it in range(1, radius + 1):
        new_ids = []
        new_env = []
        for i in range(n):
            pairs = sorted((graph.bonds[k].kind, ids[j]) for j, k in graph.adjacency[i])
            flat = [it, ids[i]]
            for kind, nid in pairs:
                flat += [kind, nid]
            new_ids.append(mix64(*flat))
            bonds = set(env_bonds[i])
            for j, k in graph.adjacency[i]:
                bonds.add(k)
                bonds |= env_bonds[j]
            new_env.append(frozenset(bonds))
        for i in sorted(range(n), key=lambda i: (len(new_env[i]), new_ids[i])):
            env = new_env[i]
            if not env or env == env_bonds[i] or env in seen:
                continue
            seen.add(env)
            found.append(new_ids[i])
        ids, env_bonds = new_ids, new_env
    return found


def morgan_ids(graph: MolGraph, radius: int = 2) -> list[int]:
    """Unfolded ECFP environment identifiers with repeats (for counting)."""
    graph = perceive(graph)
    if not len(graph):
        return []
    return _morgan_environments(graph, _ecfp_invariants(graph), radius)


def circular_fingerprint(graph: MolGraph, kind: str = "ecfp", radius: int = 2,
                         n_bits: int = 2048) -> Fingerprint:
    """Folded ECFP-style (``kind='ecfp'``) or FCFP-style (``'fcfp'``) fingerprint."""
    graph = perceive(graph)
    if kind == "ecfp":
        inv = _ecfp_invariants(graph)
    elif kind == "fcfp":
        inv = _fcfp_invariants(graph)
    else:
        raise ValueError(f"unknown circular fingerprint kind {kind!r}")
    envs = _morgan_environments(graph, inv, radius) if len(graph) else []
    return Fingerprint(frozenset(e % n_bits for e in envs), n_bits, radius, kind)


# ----------------------------------------------------------------- atom pairs


def _distances(graph: MolGraph) -> np.ndarray:
    n = len(graph)
    dist = np.full((n, n), -1, dtype=np.int32)
    for s in range(n):
        dist[s, s] = 0
        frontier = [s]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for v in frontier:
                for w, _ in graph.adjacency[v]:
                    if dist[s, w] < 0:
                        dist[s, w] = d
                        nxt.append(w)
            frontier = nxt
    return dist


def atom_pair_fingerprint(graph: MolGraph, n_bits: int = 2048, max_distance: int = 30) -> Fingerprint:
    """Atom-pair fingerprint: (atom type, topological distance, atom type) triples."""
    graph = perceive(graph)
    n = len(graph)
    types = [mix64(atomic_number(a.element), min(graph.degree(i), 7), int(a.aromatic), a.hydrogens)
             for i, a in enumerate(graph.atoms)]
    dist = _distances(graph)
    bits = set()
    for i in range(n):
        for j in range(i + 1, n):
            d = int(dist[i, j])
            if d <= 0 or d > max_distance:
                continue
            a, b = sorted((types[i], types[j]))
            bits.add(mix64(0xA9, a, d, b) % n_bits)
    return Fingerprint(frozenset(bits), n_bits, 0, "ap")


def fingerprint(graph: MolGraph, kind: str, radius: int = 2, n_bits: int = 2048) -> Fingerprint:
    """Dispatch on kind: ``ecfp``, ``fcfp`` or ``ap``."""
    if kind == "ap":
        return atom_pair_fingerprint(graph, n_bits)
    return circular_fingerprint(graph, kind, radius, n_bits)


def tanimoto(a: Fingerprint, b: Fingerprint) -> float:
    """|a & b| / |a | b|; 1.0 when both are empty."""
    if a.n_bits != b.n_bits or a.kind != b.kind:
        raise FingerprintMismatch("fingerprints differ in kind or length")
    union = len(a.bits | b.bits)
    if union == 0:
        return 1.0
    return len(a.bits & b.bits) / union
