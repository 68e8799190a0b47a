"""Offspring creation shared by the NSGA engines, with phenotype-duplicate rejection."""
from __future__ import annotations

from typing import Callable

import numpy as np

from ..selfies_codec import SelfiesGenome
from .core import AlgorithmConfig, Individual, Problem
from .operators import mutate, one_point_crossover

SALT_MUTATIONS = 20


def admit_child(base: SelfiesGenome, problem: Problem, cfg: AlgorithmConfig,
                rng: np.random.Generator, taken: set[str], gen: int) -> Individual | None:
    """Mutate ``base`` and return a child whose phenotype is not in ``taken``.

    Up to ``cfg.duplicate_retries`` fresh mutations of ``base`` are tried; then
    forced mutations are chained onto the last candidate. Returns None if no
    unique phenotype was reached.
    """
    mut = lambda g, rate: mutate(g, rng, problem.alphabet, rate, cfg.max_genome_length)
    g = mut(base, cfg.mutation_rate)
    for _ in range(cfg.duplicate_retries):
        if problem.key_of(g) not in taken:
            break
        g = mut(base, cfg.mutation_rate)
    else:
        for _ in range(SALT_MUTATIONS):
            if problem.key_of(g) not in taken:
                break
            g = mut(g, 1.0)
    if problem.key_of(g) in taken:
        return None
    child = problem.individual(g, age=gen)
    taken.add(child.phenotype_key)
    return child


def make_offspring(pick: Callable[[], Individual], problem: Problem, cfg: AlgorithmConfig,
                   rng: np.random.Generator, taken: set[str], gen: int) -> list[Individual]:
    """Fill an offspring pool of size N; ``taken`` is updated with admitted keys."""
    n = cfg.pop_size
    out: list[Individual] = []
    budget = 4 * n
    while len(out) < n and budget > 0:
        budget -= 1
        p1, p2 = pick(), pick()
        if rng.random() < cfg.crossover_rate:
            c1, c2 = one_point_crossover(p1.genome, p2.genome, rng, cfg.max_genome_length)
        else:
            c1, c2 = p1.genome, p2.genome
        for c in (c1, c2):
            if len(out) >= n:
                break
            child = admit_child(c, problem, cfg, rng, taken, gen)
            if child is not None:
                out.append(child)
    return out
