"""Corpus ingestion, the compound store used for novelty checks, and population sampling."""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .._data import data_path
from ..molgraph.canon import canonical_smiles
from ..molgraph.elements import UnsupportedFeatureError
from ..molgraph.smiles import parse_smiles
from ..selfies_codec import SelfiesGenome, encode
from .filters import FilterChain

log = logging.getLogger(__name__)

CORPUS_FILE = "corpus.smi"


class CorpusTooSmallError(ValueError):
    pass


def read_smiles_lines(paths: Iterable[str | Path]) -> Iterator[tuple[str, str]]:
    """(smiles, id) per non-comment line; the id defaults to file:line."""
    for p in paths:
        with open(p) as fh:
            for n, line in enumerate(fh, 1):
                parts = line.split()
                if not parts or parts[0].startswith("#"):
                    continue
                yield parts[0], parts[1] if len(parts) > 1 else f"{Path(p).name}:{n}"


@dataclass
class CompoundStore:
    """Canonical keys with source ids; exact-match lookup."""
    ids: dict[str, str] = field(default_factory=dict)

    def __contains__(self, key: str) -> bool:
        return key in self.ids

    def __len__(self) -> int:
        return len(self.ids)

    def add(self, key: str, source: str) -> bool:
        if key in self.ids:
            return False
        self.ids[key] = source
        return True

    def items(self) -> list[tuple[str, str]]:
        return list(self.ids.items())

    def write(self, path: str | Path) -> None:
        with open(path, "w") as fh:
            for key, source in self.ids.items():
                fh.write(f"{key}\t{source}\n")

    @classmethod
    def load(cls, path: str | Path | None = None) -> "CompoundStore":
        """Read an index file whose first column is already a canonical key."""
        path = data_path(CORPUS_FILE) if path is None else path
        store = cls()
        for key, source in read_smiles_lines([path]):
            store.add(key, source)
        return store


def build_subset(paths: Sequence[str | Path], chain: FilterChain | None = None,
                 out: str | Path | None = None) -> tuple[CompoundStore, Counter]:
    """Filter SMILES files into a store of canonical keys; count rejections per predicate."""
    chain = chain or FilterChain()
    store = CompoundStore()
    rejected: Counter = Counter()
    for smi, source in read_smiles_lines(paths):
        try:
            graph = parse_smiles(smi)
        except ValueError as e:
            log.warning("skipping %s (%s): %s", source, smi, e)
            rejected["parse"] += 1
            continue
        failed = chain.failures(graph)
        if failed:
            rejected.update(failed)
            continue
        if not store.add(canonical_smiles(graph), source):
            rejected["duplicate"] += 1
    if out is not None:
        store.write(out)
    return store, rejected


def sample_population(corpus: Sequence[tuple[str, str]], n: int, seed: int) -> list[SelfiesGenome]:
    """Uniform sample without replacement, encoded to SELFIES, unique by canonical key."""
    if len(corpus) < n:
        raise CorpusTooSmallError(f"corpus has {len(corpus)} entries, need {n}")
    rng = np.random.default_rng(seed)
    out: list[SelfiesGenome] = []
    seen: set[str] = set()
    for i in rng.permutation(len(corpus)):
        smi = corpus[int(i)][0]
        try:
            graph = parse_smiles(smi)
            genome = encode(graph)
        except (ValueError, UnsupportedFeatureError) as e:
            log.warning("cannot use %s: %s", smi, e)
            continue
        key = canonical_smiles(graph)
        if key in seen:
            continue
        seen.add(key)
        out.append(genome)
        if len(out) == n:
            return out
    raise CorpusTooSmallError(f"only {len(out)} usable distinct molecules, need {n}")
