"""MOEA/D with Tchebycheff decomposition and a similarity-gated single replacement."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..fingerprints import tanimoto
from .core import AlgorithmConfig, Individual, Problem, objective_matrix
from .operators import mutate, one_point_crossover
from .sorting import crowding_distance, dominates


def neighborhoods(dirs: np.ndarray, t: int) -> np.ndarray:
    """Indices of the ``t`` nearest directions (self first) for each direction."""
    d = np.linalg.norm(dirs[:, None, :] - dirs[None, :, :], axis=2)
    return np.argsort(d, axis=1, kind="stable")[:, :t]


def tchebycheff(objs: np.ndarray, weights: np.ndarray, ideal: np.ndarray) -> np.ndarray:
    """max_j w_j |z_j - f_j| (smaller is better); weights floored at 1e-6."""
    w = np.maximum(weights, 1e-6)
    return np.max(w * np.abs(ideal - objs), axis=-1)


@dataclass
class MoeadState:
    dirs: np.ndarray
    neighbors: np.ndarray
    ideal: np.ndarray
    archive: list[Individual] = field(default_factory=list)
    replacements: int = 0
    blocked: int = 0


def init_state(pop: list[Individual], dirs: np.ndarray, cfg: AlgorithmConfig) -> MoeadState:
    if len(dirs) != len(pop):
        raise ValueError("MOEA/D needs one direction per sub-problem")
    state = MoeadState(dirs, neighborhoods(dirs, cfg.neighbors), objective_matrix(pop).max(axis=0))
    for ind in pop:
        state.archive = archive_insert(state.archive, ind, cfg.pop_size)
    return state


def archive_insert(archive: list[Individual], ind: Individual, cap: int) -> list[Individual]:
    """Non-dominated insertion, bounded by repeatedly dropping the most crowded member."""
    if any(a.phenotype_key == ind.phenotype_key or dominates(a.objectives, ind.objectives)
           for a in archive):
        return archive
    out = [a for a in archive if not dominates(ind.objectives, a.objectives)] + [ind]
    while len(out) > cap:
        cd = crowding_distance(objective_matrix(out))
        del out[int(np.argmin(cd))]
    return out


def _similarity(child: Individual, others: list[Individual], problem: Problem,
                space: str) -> float:
    if space == "objective":
        c = np.asarray(child.objectives)
        d = min(np.linalg.norm(c - np.asarray(o.objectives)) for o in others)
        return 1.0 - d / np.sqrt(len(c))
    fp = problem.fingerprint(child)
    return max(tanimoto(fp, problem.fingerprint(o)) for o in others)


def moead_generation(pop: list[Individual], problem: Problem, cfg: AlgorithmConfig,
                     state: MoeadState, rng: np.random.Generator, gen: int = 0) -> list[Individual]:
    """One pass over all sub-problems in a seeded random order; ``pop`` is updated in place."""
    for i in rng.permutation(len(pop)):
        hood = state.neighbors[i]
        a, b = rng.choice(hood, size=2, replace=False)
        if rng.random() < cfg.crossover_rate:
            g, _ = one_point_crossover(pop[a].genome, pop[b].genome, rng, cfg.max_genome_length)
        else:
            g = pop[a].genome
        g = mutate(g, rng, problem.alphabet, cfg.mutation_rate, cfg.max_genome_length)
        child = problem.individual(g, age=gen)
        f = np.asarray(child.objectives)
        state.ideal = np.maximum(state.ideal, f)
        w = state.dirs[hood]
        g_child = tchebycheff(f[None, :], w, state.ideal)
        g_cur = tchebycheff(objective_matrix([pop[j] for j in hood]), w, state.ideal)
        improved = np.flatnonzero(g_child < g_cur)
        if len(improved):
            k = improved[np.argmax(g_cur[improved])]  # worst neighbour that the child beats
            sim = _similarity(child, [pop[j] for j in hood], problem, cfg.similarity_space)
            if sim <= cfg.replacement_similarity:
                pop[hood[k]] = child
                state.replacements += 1
            else:
                state.blocked += 1
        state.archive = archive_insert(state.archive, child, cfg.pop_size)
    return pop
