"""Synthetic accessibility score from fragment contributions and complexity penalties.

Fragment contributions are ``ln(count / n80)`` over circular-fingerprint
environment ids counted in a reference corpus, where ``n80`` is the count of
the id at which cumulative coverage (ids sorted by descending count) reaches
80% of all occurrences. Frequent fragments score positive, rare ones negative.
"""
from __future__ import annotations

import math
from collections import Counter
from functools import lru_cache
from pathlib import Path
from typing import Iterable

from .._data import data_path
from ..fingerprints import morgan_ids
from ..molgraph.canon import symmetry_classes
from ..molgraph.graph import MolGraph
from ..molgraph.perception import perceive

DEFAULT_FLOOR = -4.0
TABLE_FILE = "sa_fragments.tsv"


class FragmentTable:
    def __init__(self, scores: dict[int, float], floor: float = DEFAULT_FLOOR):
        self.scores = scores
        self.floor = floor

    def __getitem__(self, key: int) -> float:
        return self.scores.get(key, self.floor)

    def __len__(self) -> int:
        return len(self.scores)

    def write(self, path: str | Path) -> None:
        with open(path, "w") as fh:
            fh.write(f"# floor\t{self.floor!r}\n# id\tcontribution\n")
            for k in sorted(self.scores):
                fh.write(f"{k}\t{self.scores[k]:.6f}\n")

    @classmethod
    def read(cls, path: str | Path) -> "FragmentTable":
        scores, floor = {}, DEFAULT_FLOOR
        with open(path) as fh:
            for line in fh:
                parts = line.rstrip("\n").split("\t")
                if parts[0] == "# floor":
                    floor = float(parts[1])
                elif line.strip() and not line.startswith("#"):
                    scores[int(parts[0])] = float(parts[1])
        return cls(scores, floor)


def build_fragment_table(graphs: Iterable[MolGraph], coverage: float = 0.8,
                         floor: float = DEFAULT_FLOOR) -> FragmentTable:
    """Count environment ids over ``graphs`` and convert counts to contributions."""
    counts: Counter[int] = Counter()
    for g in graphs:
        counts.update(morgan_ids(g, 2))
    if not counts:
        return FragmentTable({}, floor)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    total = sum(counts.values())
    acc, n80 = 0, ranked[-1][1]
    for _, c in ranked:
        acc += c
        if acc >= coverage * total:
            n80 = c
            break
    return FragmentTable({k: math.log(c / n80) for k, c in counts.items()}, floor)


@lru_cache(maxsize=None)
def default_table() -> FragmentTable:
    return FragmentTable.read(data_path(TABLE_FILE))


# ------------------------------------------------------------------ complexity terms


def stereo_centres(graph: MolGraph) -> int:
    """Potential tetrahedral centres: sp3 C/N-free carbons with four distinct neighbour classes."""
    cls = symmetry_classes(graph)
    n = 0
    for i, a in enumerate(graph.atoms):
        if a.element != "C" or a.aromatic or a.hydrogens > 1:
            continue
        if graph.degree(i) + a.hydrogens != 4 or graph.bond_order_sum(i) != graph.degree(i):
            continue
        labels = [cls[j] for j in graph.neighbors(i)] + [-1] * a.hydrogens
        if len(set(labels)) == 4:
            n += 1
    return n


def spiro_and_bridgeheads(graph: MolGraph) -> tuple[int, int]:
    rings = [set(r) for r in graph.rings]
    spiro: set[int] = set()
    bridge: set[int] = set()
    for x in range(len(rings)):
        for y in range(x + 1, len(rings)):
            shared = rings[x] & rings[y]
            if len(shared) == 1:
                spiro |= shared
            elif len(shared) >= 3:
                for i in shared:
                    if sum(j in shared for j in graph.neighbors(i)) < 2:
                        bridge.add(i)
    return len(spiro), len(bridge)


def sa_score(graph: MolGraph, table: FragmentTable | None = None) -> float:
    """Synthetic accessibility in [1, 10]; 1 is easy. Empty molecules score 10."""
    graph = perceive(graph)
    if graph.is_empty:
        return 10.0
    table = default_table() if table is None else table
    ids = Counter(morgan_ids(graph, 2))
    nf = sum(ids.values())
    score1 = sum(table[k] * v for k, v in ids.items()) / nf

    n_atoms = len(graph)
    n_stereo = stereo_centres(graph)
    n_spiro, n_bridge = spiro_and_bridgeheads(graph)
    macro = math.log10(2) if any(len(r) > 8 for r in graph.rings) else 0.0
    score2 = -(n_atoms ** 1.005 - n_atoms) - math.log10(n_stereo + 1) \
        - math.log10(n_spiro + 1) - math.log10(n_bridge + 1) - macro
    score3 = 0.5 * math.log(n_atoms / len(ids)) if n_atoms > len(ids) else 0.0

    raw = score1 + score2 + score3
    lo, hi = -4.0, 2.5
    sa = 11.0 - (raw - lo + 1.0) / (hi - lo) * 9.0
    if sa > 8.0:
        sa = 8.0 + math.log(sa + 1.0 - 9.0)
    return min(10.0, max(1.0, sa))


def sa_normalized(graph: MolGraph, table: FragmentTable | None = None) -> float:
    """(10 - sa_score) / 9, so 1 is easiest to synthesize."""
    return normalize_sa(sa_score(graph, table))


def normalize_sa(score: float) -> float:
    return (10.0 - score) / 9.0
