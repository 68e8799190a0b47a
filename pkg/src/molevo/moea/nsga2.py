"""NSGA-II generation step."""
from __future__ import annotations

import numpy as np

from .core import AlgorithmConfig, Individual, Problem, objective_matrix
from .sorting import crowding_distance, fast_nondominated_sort
from .variation import make_offspring


def assign_rank_and_crowding(pop: list[Individual]) -> list[list[int]]:
    fronts = fast_nondominated_sort(objective_matrix(pop))
    for r, front in enumerate(fronts):
        cd = crowding_distance(objective_matrix([pop[i] for i in front]))
        for i, d in zip(front, cd):
            pop[i].rank = r
            pop[i].crowding = float(d)
    return fronts


def binary_tournament(pop: list[Individual], rng: np.random.Generator, use_crowding: bool = True):
    def pick() -> Individual:
        a, b = rng.integers(0, len(pop), size=2)
        x, y = pop[a], pop[b]
        if x.rank != y.rank:
            return x if x.rank < y.rank else y
        if use_crowding and x.crowding != y.crowding:
            return x if x.crowding > y.crowding else y
        return x
    return pick


def crowding_survival(pool: list[Individual], n: int) -> list[Individual]:
    fronts = assign_rank_and_crowding(pool)
    survivors: list[Individual] = []
    for front in fronts:
        if len(survivors) + len(front) <= n:
            survivors += [pool[i] for i in front]
            continue
        rest = sorted(front, key=lambda i: (-pool[i].crowding, i))
        survivors += [pool[i] for i in rest[:n - len(survivors)]]
        break
    return survivors


def nsga2_generation(pop: list[Individual], problem: Problem, cfg: AlgorithmConfig,
                     rng: np.random.Generator, gen: int = 0) -> list[Individual]:
    assign_rank_and_crowding(pop)
    taken = {ind.phenotype_key for ind in pop}
    offspring = make_offspring(binary_tournament(pop, rng), problem, cfg, rng, taken, gen)
    survivors = crowding_survival(pop + offspring, cfg.pop_size)
    assign_rank_and_crowding(survivors)
    return survivors
