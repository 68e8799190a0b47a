"""Physicochemical descriptors: mass, Crippen logP, H-bond counts, TPSA, rotors, rings, alerts."""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Sequence

from ._data import read_table
from .molgraph.elements import HALOGENS, atomic_mass
from .molgraph.graph import MolGraph
from .molgraph.pattern import Pattern, compile_pattern
from .molgraph.perception import perceive

log = logging.getLogger(__name__)

_HETERO = frozenset({"N", "O", "P", "S", "F", "Cl", "Br", "I"})
_USUAL = frozenset({"C", "N", "O", "S", "F", "Cl", "Br", "I"})


@dataclass(frozen=True)
class DescriptorVector:
    mw: float
    logp: float
    hbd: int
    hba: int
    tpsa: float
    rotatable_bonds: int
    aromatic_rings: int
    rings: int
    heavy_atoms: int
    alerts: int

    def as_dict(self) -> dict:
        return asdict(self)


# ------------------------------------------------------------------ mass


def molecular_weight(graph: MolGraph) -> float:
    h = atomic_mass("H")
    return sum(atomic_mass(a.element) + a.hydrogens * h for a in graph.atoms)


# ------------------------------------------------------------------ Crippen


@lru_cache(maxsize=None)
def crippen_table() -> dict[str, float]:
    return {row[0]: float(row[1]) for row in read_table("crippen.tsv")}


class _View:
    """Neighbour summary of one atom used by the typing rules."""

    __slots__ = ("i", "el", "arom", "h", "q", "nbrs")

    def __init__(self, graph: MolGraph, i: int):
        a = graph.atoms[i]
        self.i = i
        self.el, self.arom, self.h, self.q = a.element, a.aromatic, a.hydrogens, a.charge
        # (element, aromatic, bond kind: 1/2/3 or 4 aromatic, neighbour index)
        self.nbrs = [(graph.atoms[j].element, graph.atoms[j].aromatic, graph.bonds[k].kind, j)
                     for j, k in graph.adjacency[i]]

    @property
    def degree(self) -> int:
        return len(self.nbrs)

    def count(self, pred) -> int:
        return sum(1 for n in self.nbrs if pred(n))


def _carbon_type(g: MolGraph, v: _View) -> str:
    nb = v.nbrs
    aliph = [n for n in nb if not n[1]]
    arom_n = [n for n in nb if n[1]]
    singles_only = all(n[2] == 1 for n in nb)
    sp3 = singles_only and v.degree + v.h == 4
    if not v.arom:
        aliph_c = [n for n in aliph if n[0] == "C"]
        hetero = [n for n in aliph if n[0] in _HETERO]
        if singles_only and not arom_n:
            if v.h == 4 or (v.h == 3 and len(aliph_c) == 1) or (v.h == 2 and len(aliph_c) == 2):
                return "C1"
            if (v.h == 1 and len(aliph_c) == 3) or (v.h == 0 and len(aliph_c) == 4):
                return "C2"
            if hetero:
                if v.h in (2, 3):
                    return "C3"
                if v.h in (0, 1):
                    return "C4"
        doubles = [n for n in nb if n[2] == 2]
        if any(not n[1] and n[0] != "C" for n in doubles):
            return "C5"
        dbl_c = [n for n in doubles if n[0] == "C" and not n[1]]
        if dbl_c:
            others = [n for n in nb if n is not dbl_c[0]]
            if len(doubles) == 2 and all(n[0] == "C" and not n[1] for n in doubles):
                return "C6"
            if all(not n[1] for n in others):
                return "C6"
        if v.degree + v.h == 2 and any(n[2] == 3 and not n[1] for n in nb):
            return "C7"
        if sp3 and arom_n:
            if v.h == 3:
                return "C8" if arom_n[0][0] == "C" else "C9"
            return {2: "C10", 1: "C11", 0: "C12"}[v.h]
        if dbl_c and arom_n:
            return "C26"
        if any(n[2] == 2 and n[1] and n[0] == "C" for n in nb):
            return "C26"
        if sp3 and any(n[0] not in _USUAL and n[0] != "P" for n in aliph):
            return "C27"
        return "CS"
    # aromatic carbon
    exo = [n for n in nb if n[2] != 4]
    ring = [n for n in nb if n[2] == 4]
    if v.h == 0 and any(n[2] == 1 and not n[1] and n[0] not in _USUAL for n in exo):
        return "C13"
    for n in nb:
        if n[0] in HALOGENS:
            return {"F": "C14", "Cl": "C15", "Br": "C16", "I": "C17"}[n[0]]
    if v.h >= 1:
        return "C18"
    if len(ring) >= 3:
        return "C19"
    if len(ring) == 2 and len(exo) == 1:
        el, arom, kind, _ = exo[0]
        if kind == 1:
            if arom:
                return "C20"
            return {"C": "C21", "N": "C22", "O": "C23", "S": "C24"}.get(el, "CS")
        if kind == 2 and el in ("C", "N", "O"):
            return "C25"
    return "CS"


def _hydrogen_type(g: MolGraph, v: _View) -> str:
    if v.el == "C":
        return "H1"
    if v.el == "N":
        return "H3"
    if v.el == "O":
        if not v.nbrs:
            return "HS"
        el, arom, kind, j = v.nbrs[0]
        if el == "N":
            return "H3"
        if el == "C" and not arom:
            c = g.atoms[j]
            if g.degree(j) + c.hydrogens == 4 and all(g.bonds[k].order == 1 for _, k in g.adjacency[j]):
                return "H2"
            return "H4"
        if el == "C" and arom:
            return "H2"
        if el in ("O", "S"):
            return "H4"
        return "H2"
    return "H2"


def _nitrogen_type(g: MolGraph, v: _View) -> str:
    nb = v.nbrs
    if v.arom:
        return "N11" if v.q == 0 else "N12"
    if v.q > 0:
        if v.h > 0:
            return "N10"
        if any(n[2] == 3 for n in nb):
            return "N14"
        return "N13"
    if v.q < 0:
        return "N14"
    aliph = [n for n in nb if not n[1]]
    arom = [n for n in nb if n[1]]
    single = [n for n in nb if n[2] == 1]
    double = [n for n in nb if n[2] == 2]
    triple = [n for n in nb if n[2] == 3]
    if v.h == 2 and len(nb) == 1 and single:
        return "N1" if aliph else "N3"
    if v.h == 1 and len(nb) == 2 and len(single) == 2:
        return "N2" if not arom else "N4"
    if v.h == 1 and len(nb) == 1 and double and not double[0][1]:
        return "N5"
    if v.h == 0:
        if len(nb) == 2 and len(double) == 1 and len(single) == 1 and \
                not double[0][1] and not single[0][1]:
            return "N6"
        if len(nb) == 3 and len(single) == 3:
            return "N7" if not arom else "N8"
        if len(nb) == 1 and triple and not triple[0][1]:
            return "N9"
    return "NS"


def _oxygen_type(g: MolGraph, v: _View) -> str:
    nb = v.nbrs
    if v.arom:
        return "O1"
    if v.q == 0 and v.h >= 1:
        return "O2"
    if v.q == 0 and len(nb) == 2 and all(n[2] == 1 for n in nb):
        return "O4" if any(n[1] for n in nb) else "O3"
    if v.q == 0 and len(nb) == 1 and nb[0][2] == 2:
        el, arom, _, j = nb[0]
        if el in ("N", "O", "S"):
            return "O5"
        if el == "C" and arom:
            return "O8"
        if el == "C":
            subs = [(g.atoms[x].element, g.atoms[x].aromatic) for x in g.neighbors(j) if x != v.i]
            heavy_het = [s for s in subs if s[0] != "C"]
            if len(subs) == 2 and len(heavy_het) == 2:
                return "O11"
            if any(s[1] for s in subs):
                return "O10"
            return "O9"
        return "OS"
    if v.q == -1 and len(nb) == 1:
        el, _, _, j = nb[0]
        if el == "N":
            return "O5"
        if el == "S":
            return "O6"
        if el == "C" and any(g.bonds[k].order == 2 and g.atoms[x].element == "O"
                             for x, k in g.adjacency[j]):
            return "O12"
        return "O7"
    return "OS"


def crippen_types(graph: MolGraph) -> list[tuple[str, list[str]]]:
    """Heavy-atom type and the types of its attached hydrogens, per atom."""
    graph = perceive(graph)
    out = []
    for i, atom in enumerate(graph.atoms):
        v = _View(graph, i)
        el = atom.element
        if el == "C":
            t = _carbon_type(graph, v)
        elif el == "N":
            t = _nitrogen_type(graph, v)
        elif el == "O":
            t = _oxygen_type(graph, v)
        elif el in HALOGENS:
            t = "Hal" if atom.charge < 0 else el
        elif el == "S":
            t = "S3" if atom.aromatic else ("S2" if atom.charge else "S1")
        elif el == "P":
            t = "P"
        else:
            log.debug("no Crippen type for %s; using element default", el)
            t = "B" if el == "B" else "CS"
        htype = _hydrogen_type(graph, v) if atom.hydrogens else ""
        out.append((t, [htype] * atom.hydrogens))
    return out


def crippen_logp(graph: MolGraph) -> float:
    table = crippen_table()
    total = 0.0
    for t, hs in crippen_types(graph):
        total += table[t]
        for h in hs:
            total += table[h]
    return total


# ------------------------------------------------------------------ TPSA


@lru_cache(maxsize=None)
def _tpsa_table() -> dict[tuple, tuple[float, str]]:
    table: dict[tuple, tuple[float, str]] = {}
    for row in read_table("tpsa.tsv"):
        el, q, h, s, d, t, a, r3, value = row
        key = (el, int(q), int(h), int(s), int(d), int(t), int(a))
        table.setdefault(key, {})[r3] = float(value)  # type: ignore[index]
    return table


def _in_three_ring(graph: MolGraph, i: int) -> bool:
    return any(len(r) == 3 and i in r for r in graph.rings)


def tpsa(graph: MolGraph) -> float:
    """Topological polar surface area from N and O contributions."""
    graph = perceive(graph)
    table = _tpsa_table()
    total = 0.0
    for i, atom in enumerate(graph.atoms):
        if atom.element not in ("N", "O"):
            continue
        counts = [0, 0, 0, 0]
        for _, k in graph.adjacency[i]:
            kind = graph.bonds[k].kind
            counts[kind - 1] += 1
        key = (atom.element, atom.charge, atom.hydrogens, *counts)
        entry = table.get(key)
        value = None
        if entry:
            r3 = "1" if _in_three_ring(graph, i) else "0"
            value = entry.get(r3, entry.get("*"))
        if value is None:
            heavy = graph.degree(i)
            if atom.element == "N":
                value = 30.5 - 8.2 * heavy + 1.5 * atom.hydrogens
            else:
                value = 28.5 - 8.6 * heavy + 1.5 * atom.hydrogens
            value = max(value, 0.0)
        total += value
    return total


# ------------------------------------------------------------------ H-bond counts


def hbd(graph: MolGraph) -> int:
    """Hydrogens on N and O (each H counted)."""
    return sum(a.hydrogens for a in graph.atoms if a.element in ("N", "O"))


_ACCEPTOR_PATTERNS = ("[oH0;X2]", "[OH1;X2;v2]", "[OH0;X2;v2]", "[OH0;X1;v2]", "[O-;X1]",
                      "[SH0;X2;v2]", "[SH0;X1;v2]", "[S-;X1]", "[nH0;X2]", "[NH0;X1;v3]")


@lru_cache(maxsize=None)
def _acceptor_patterns() -> tuple[Pattern, ...]:
    return tuple(compile_pattern(p) for p in _ACCEPTOR_PATTERNS)


def hba(graph: MolGraph) -> int:
    """Acceptor count: O in most forms, thioether/thione S, pyridine-type n,
    nitrile N and neutral trivalent N that is not an amide or sulfonamide N."""
    graph = perceive(graph)
    count = sum(p.count(graph) for p in _acceptor_patterns())
    for i, a in enumerate(graph.atoms):
        if a.element != "N" or a.aromatic or a.charge != 0:
            continue
        if graph.degree(i) + a.hydrogens != 3 or graph.total_valence(i) != 3:
            continue
        amide = False
        for j, _ in graph.adjacency[i]:
            if graph.atoms[j].element in ("C", "S") and any(
                    graph.bonds[k].order == 2 and graph.atoms[x].element == "O"
                    and not graph.bonds[k].aromatic for x, k in graph.adjacency[j]):
                amide = True
                break
        count += not amide
    return count


# ------------------------------------------------------------------ topology counts


def _has_triple(graph: MolGraph, i: int) -> bool:
    return any(graph.bonds[k].order == 3 for _, k in graph.adjacency[i])


def _is_amide_bond(graph: MolGraph, a: int, b: int) -> bool:
    for c, n in ((a, b), (b, a)):
        if graph.atoms[c].element == "C" and graph.atoms[n].element == "N":
            if any(graph.bonds[k].order == 2 and graph.atoms[x].element in ("O", "S")
                   for x, k in graph.adjacency[c]):
                return True
    return False


def rotatable_bonds(graph: MolGraph, exclude_amides: bool = True) -> int:
    """Acyclic single bonds between non-terminal atoms, skipping triple-bonded
    atoms and (by default) amide C-N bonds."""
    graph = perceive(graph)
    count = 0
    for bond in graph.bonds:
        if bond.order != 1 or bond.aromatic or bond.in_ring:
            continue
        a, b = bond.a, bond.b
        if graph.degree(a) < 2 or graph.degree(b) < 2:
            continue
        if _has_triple(graph, a) or _has_triple(graph, b):
            continue
        if exclude_amides and _is_amide_bond(graph, a, b):
            continue
        count += 1
    return count


def aromatic_rings(graph: MolGraph) -> int:
    graph = perceive(graph)
    return sum(all(graph.atoms[i].aromatic for i in r) for r in graph.rings)


def ring_count(graph: MolGraph) -> int:
    return len(perceive(graph).rings)


# ------------------------------------------------------------------ alerts


@lru_cache(maxsize=None)
def default_alerts() -> tuple[tuple[str, Pattern], ...]:
    return tuple((name, compile_pattern(smarts)) for name, smarts in read_table("alerts.tsv"))


def alert_names(graph: MolGraph, patterns: Sequence[tuple[str, Pattern]] | None = None) -> list[str]:
    patterns = default_alerts() if patterns is None else patterns
    graph = perceive(graph)
    return [name for name, p in patterns if p.has_match(graph)]


def alerts(graph: MolGraph, patterns: Sequence[tuple[str, Pattern]] | None = None) -> int:
    """Number of patterns with at least one match."""
    return len(alert_names(graph, patterns))


def compute_descriptors(graph: MolGraph) -> DescriptorVector:
    graph = perceive(graph)
    return DescriptorVector(
        mw=molecular_weight(graph), logp=crippen_logp(graph), hbd=hbd(graph), hba=hba(graph),
        tpsa=tpsa(graph), rotatable_bonds=rotatable_bonds(graph),
        aromatic_rings=aromatic_rings(graph), rings=len(graph.rings),
        heavy_atoms=len(graph), alerts=alerts(graph))
