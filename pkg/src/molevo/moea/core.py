"""Individuals, algorithm configuration and cached phenotype evaluation."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Sequence

import numpy as np

from ..fingerprints import Fingerprint, circular_fingerprint
from ..molgraph.canon import canonical_key
from ..molgraph.graph import MolGraph
from ..objectives.tasks import ObjectiveVector, TaskSpec, evaluate
from ..selfies_codec import SelfiesGenome, SelfiesToken, alphabet, decode

ALGORITHMS = ("nsga2", "nsga3", "moead")


@dataclass
class Individual:
    genome: SelfiesGenome
    phenotype_key: str
    objectives: ObjectiveVector
    rank: int = -1
    crowding: float = 0.0
    age: int = 0

    @property
    def smiles(self) -> str:
        return self.phenotype_key


@dataclass(frozen=True)
class AlgorithmConfig:
    algorithm: str = "nsga2"
    pop_size: int = 100
    generations: int = 200
    mutation_rate: float = 0.8
    crossover_rate: float = 0.9
    neighborhood_size: int | None = None  # MOEA/D; default max(2, ceil(N/10))
    replacement_similarity: float = 0.95  # MOEA/D gate on ECFP4 Tanimoto
    similarity_space: str = "structure"  # MOEA/D gate: "structure" or "objective"
    duplicate_retries: int = 10
    max_genome_length: int = 100
    rng_seed: int = 0
    riesz_iterations: int = 500

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")
        if not (0 <= self.mutation_rate <= 1 and 0 <= self.crossover_rate <= 1):
            raise ValueError("rates must lie in [0, 1]")
        if not 0 <= self.replacement_similarity <= 1:
            raise ValueError("replacement similarity threshold must lie in [0, 1]")
        if self.pop_size < 2:
            raise ValueError("population size must be at least 2")
        if self.neighborhood_size is not None and not 2 <= self.neighborhood_size <= self.pop_size:
            raise ValueError("neighborhood size must lie in [2, N]")
        if self.similarity_space not in ("structure", "objective"):
            raise ValueError("similarity_space must be 'structure' or 'objective'")

    @property
    def neighbors(self) -> int:
        if self.neighborhood_size is not None:
            return self.neighborhood_size
        return min(self.pop_size, max(2, math.ceil(self.pop_size / 10)))

    @classmethod
    def from_dict(cls, d: dict) -> "AlgorithmConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        return cls(**d)


@dataclass
class _Phenotype:
    key: str
    graph: MolGraph
    objectives: ObjectiveVector
    fp: Fingerprint | None = None


class Problem:
    """Decodes genomes and evaluates phenotypes, caching by genome text and canonical key."""

    def __init__(self, task: TaskSpec, alphabet_tokens: Sequence[SelfiesToken] | None = None):
        self.task = task
        self.alphabet = tuple(alphabet_tokens) if alphabet_tokens is not None else alphabet()
        self._by_genome: dict[str, str] = {}
        self._by_key: dict[str, _Phenotype] = {}
        self.evaluations = 0
        self.invalid_decodes = 0

    @property
    def m(self) -> int:
        return self.task.m

    def phenotype(self, genome: SelfiesGenome) -> _Phenotype:
        text = genome.to_string()
        key = self._by_genome.get(text)
        if key is not None:
            return self._by_key[key]
        graph = decode(genome)
        if not graph.is_valence_valid():
            self.invalid_decodes += 1
        key = canonical_key(graph)
        self._by_genome[text] = key
        ph = self._by_key.get(key)
        if ph is None:
            self.evaluations += 1
            ph = _Phenotype(key, graph, evaluate(graph, self.task))
            self._by_key[key] = ph
        return ph

    def key_of(self, genome: SelfiesGenome) -> str:
        return self.phenotype(genome).key

    def individual(self, genome: SelfiesGenome, age: int = 0) -> Individual:
        ph = self.phenotype(genome)
        return Individual(genome, ph.key, ph.objectives, age=age)

    def graph(self, ind: Individual) -> MolGraph:
        return self._by_key[ind.phenotype_key].graph

    def fingerprint(self, ind: Individual | str) -> Fingerprint:
        """ECFP4 (2048 bits) of an individual or of a phenotype key seen before."""
        ph = self._by_key[ind if isinstance(ind, str) else ind.phenotype_key]
        if ph.fp is None:
            ph.fp = circular_fingerprint(ph.graph, "ecfp", 2, 2048)
        return ph.fp


def objective_matrix(pop: Sequence[Individual]) -> np.ndarray:
    return np.array([ind.objectives for ind in pop], dtype=float)
