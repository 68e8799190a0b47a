"""Attributed molecular graph with hydrogen-suppressed atoms."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .elements import max_valence

AROMATIC = 4  # bond kind code for perceived aromatic bonds


@dataclass(frozen=True, slots=True)
class Atom:
    element: str
    charge: int = 0
    hydrogens: int = 0
    aromatic: bool = False
    in_ring: bool = False


@dataclass(frozen=True, slots=True)
class Bond:
    a: int
    b: int
    order: int = 1  # Kekulé order, always 1..3
    aromatic: bool = False
    in_ring: bool = False

    @property
    def kind(self) -> int:
        return AROMATIC if self.aromatic else self.order

    def other(self, i: int) -> int:
        return self.b if i == self.a else self.a


class MolGraph:
    """Immutable simple graph of heavy atoms.

    Bond orders are stored in Kekulé form; ``Bond.aromatic`` and
    ``Atom.aromatic`` carry the perceived aromaticity, and ``rings`` holds the
    smallest set of smallest rings once :func:`perceive` has run.
    """

    __slots__ = ("atoms", "bonds", "rings", "adjacency", "_bond_index", "perceived")

    def __init__(self, atoms: Iterable[Atom], bonds: Iterable[Bond],
                 rings: Iterable[Sequence[int]] = (), perceived: bool = False):
        self.atoms: tuple[Atom, ...] = tuple(atoms)
        self.bonds: tuple[Bond, ...] = tuple(bonds)
        self.rings: tuple[tuple[int, ...], ...] = tuple(tuple(r) for r in rings)
        self.perceived = perceived
        adj: list[list[tuple[int, int]]] = [[] for _ in self.atoms]
        index: dict[tuple[int, int], int] = {}
        n = len(self.atoms)
        for k, bond in enumerate(self.bonds):
            if bond.a == bond.b:
                raise ValueError(f"self-loop on atom {bond.a}")
            if not (0 <= bond.a < n and 0 <= bond.b < n):
                raise ValueError(f"bond {k} references a missing atom")
            key = (bond.a, bond.b) if bond.a < bond.b else (bond.b, bond.a)
            if key in index:
                raise ValueError(f"parallel bond between atoms {key}")
            index[key] = k
            adj[bond.a].append((bond.b, k))
            adj[bond.b].append((bond.a, k))
        self.adjacency: tuple[tuple[tuple[int, int], ...], ...] = tuple(tuple(x) for x in adj)
        self._bond_index = index

    def __len__(self) -> int:
        return len(self.atoms)

    def __repr__(self) -> str:
        formula = self.formula() or "empty"
        return f"MolGraph({formula}, atoms={len(self.atoms)}, bonds={len(self.bonds)})"

    @property
    def is_empty(self) -> bool:
        return not self.atoms

    def neighbors(self, i: int) -> list[int]:
        return [j for j, _ in self.adjacency[i]]

    def bond(self, i: int, j: int) -> Bond | None:
        k = self._bond_index.get((i, j) if i < j else (j, i))
        return None if k is None else self.bonds[k]

    def bond_index(self, i: int, j: int) -> int | None:
        return self._bond_index.get((i, j) if i < j else (j, i))

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    def bond_order_sum(self, i: int) -> int:
        return sum(self.bonds[k].order for _, k in self.adjacency[i])

    def total_valence(self, i: int) -> int:
        return self.bond_order_sum(i) + self.atoms[i].hydrogens

    def is_valence_valid(self) -> bool:
        return all(self.total_valence(i) <= max_valence(a.element, a.charge)
                   for i, a in enumerate(self.atoms))

    def formula(self) -> str:
        counts: dict[str, int] = {}
        for a in self.atoms:
            counts[a.element] = counts.get(a.element, 0) + 1
            if a.hydrogens:
                counts["H"] = counts.get("H", 0) + a.hydrogens
        order = sorted(counts, key=lambda e: (e != "C", e != "H", e))
        return "".join(f"{e}{counts[e] if counts[e] > 1 else ''}" for e in order)

    def components(self) -> list[list[int]]:
        seen = [False] * len(self.atoms)
        comps = []
        for start in range(len(self.atoms)):
            if seen[start]:
                continue
            stack, comp = [start], []
            seen[start] = True
            while stack:
                i = stack.pop()
                comp.append(i)
                for j, _ in self.adjacency[i]:
                    if not seen[j]:
                        seen[j] = True
                        stack.append(j)
            comps.append(sorted(comp))
        return comps

    def subgraph(self, keep: Sequence[int]) -> "MolGraph":
        """Induced subgraph on ``keep`` (atoms renumbered in that order)."""
        remap = {old: new for new, old in enumerate(keep)}
        atoms = [self.atoms[i] for i in keep]
        bonds = [replace(b, a=remap[b.a], b=remap[b.b]) for b in self.bonds
                 if b.a in remap and b.b in remap]
        rings = [tuple(remap[i] for i in r) for r in self.rings
                 if all(i in remap for i in r)]
        return MolGraph(atoms, bonds, rings, perceived=self.perceived)

    def largest_fragment(self) -> "MolGraph":
        comps = self.components()
        if len(comps) <= 1:
            return self
        # ties broken by lowest first atom index
        best = max(comps, key=lambda c: (len(c), -c[0]))
        return self.subgraph(best)

    def permuted(self, order: Sequence[int]) -> "MolGraph":
        """Copy with atoms listed in ``order`` (order[new] = old)."""
        if sorted(order) != list(range(len(self.atoms))):
            raise ValueError("order must be a permutation of atom indices")
        return self.subgraph(order)

    def with_atoms(self, atoms: Sequence[Atom]) -> "MolGraph":
        return MolGraph(atoms, self.bonds, self.rings, self.perceived)
