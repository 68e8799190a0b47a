"""Run loop for the three engines with per-generation history."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..selfies_codec import SelfiesGenome
from .core import AlgorithmConfig, Individual, Problem, objective_matrix
from .moead import MoeadState, init_state, moead_generation
from .nsga2 import assign_rank_and_crowding, nsga2_generation
from .nsga3 import niche_representatives, nsga3_generation
from .refdirs import riesz_reference_directions
from .sorting import fast_nondominated_sort

log = logging.getLogger(__name__)


def pareto_set(pop: Sequence[Individual]) -> list[Individual]:
    """Front 0, deduplicated by phenotype key (first occurrence kept)."""
    if not pop:
        return []
    front = fast_nondominated_sort(objective_matrix(pop))[0]
    seen, out = set(), []
    for i in front:
        if pop[i].phenotype_key not in seen:
            seen.add(pop[i].phenotype_key)
            out.append(pop[i])
    return out


@dataclass
class RunResult:
    config: AlgorithmConfig
    population: list[Individual]
    pareto: list[Individual]
    fronts: list[np.ndarray] = field(default_factory=list)  # Pareto objectives per generation
    pareto_keys: list[list[str]] = field(default_factory=list)
    archive: list[Individual] = field(default_factory=list)
    evaluations: int = 0
    invalid_decodes: int = 0


def reported_pareto(pop: list[Individual], cfg: AlgorithmConfig, dirs: np.ndarray | None):
    if cfg.algorithm == "nsga3":
        return niche_representatives(pop, dirs)
    return pareto_set(pop)


def _unique(pop: list[Individual], cfg: AlgorithmConfig) -> list[Individual]:
    seen, out = set(), []
    for ind in pop:
        if ind.phenotype_key not in seen:
            seen.add(ind.phenotype_key)
            out.append(ind)
    if len(out) < len(pop):
        log.info("dropped %d phenotype duplicates from the initial sample", len(pop) - len(out))
    return out


def run(problem: Problem, initial: Sequence[SelfiesGenome], cfg: AlgorithmConfig,
        callback=None) -> RunResult:
    """Evolve ``initial`` for ``cfg.generations`` generations."""
    rng = np.random.default_rng(cfg.rng_seed)
    pop = [problem.individual(g, age=0) for g in initial]
    if cfg.algorithm != "moead":
        pop = _unique(pop, cfg)
    if len(pop) != cfg.pop_size:
        raise ValueError(f"initial population has {len(pop)} distinct members, need {cfg.pop_size}")
    dirs = riesz_reference_directions(problem.m, cfg.pop_size, cfg.rng_seed, cfg.riesz_iterations)
    state: MoeadState | None = init_state(pop, dirs, cfg) if cfg.algorithm == "moead" else None
    if cfg.algorithm != "moead":
        assign_rank_and_crowding(pop)
    result = RunResult(cfg, pop, [])

    def record():
        par = reported_pareto(pop, cfg, dirs)
        result.fronts.append(objective_matrix(par))
        result.pareto_keys.append([ind.phenotype_key for ind in par])
        return par

    record()
    for gen in range(1, cfg.generations + 1):
        if cfg.algorithm == "nsga2":
            pop = nsga2_generation(pop, problem, cfg, rng, gen)
        elif cfg.algorithm == "nsga3":
            pop = nsga3_generation(pop, problem, cfg, dirs, rng, gen)
        else:
            pop = moead_generation(pop, problem, cfg, state, rng, gen)
        par = record()
        if callback is not None:
            callback(gen, pop, par)
    result.population = pop
    result.pareto = reported_pareto(pop, cfg, dirs)
    result.archive = state.archive if state else []
    result.evaluations = problem.evaluations
    result.invalid_decodes = problem.invalid_decodes
    return result
