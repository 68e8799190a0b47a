"""NSGA-III generation step: reference-direction niching for the last admitted front."""
from __future__ import annotations

import numpy as np

from .core import AlgorithmConfig, Individual, Problem, objective_matrix
from .nsga2 import assign_rank_and_crowding, binary_tournament
from .sorting import fast_nondominated_sort
from .variation import make_offspring


def normalize(objs: np.ndarray) -> np.ndarray:
    """Map maximization objectives to a minimization space scaled by ideal and nadir.

    The nadir comes from the hyperplane through the per-axis extreme points,
    falling back to the pool's worst values when that plane is degenerate.
    Zero spans are replaced by 1.
    """
    f = -objs
    ideal = f.min(axis=0)
    t = f - ideal
    m = f.shape[1]
    worst = t.max(axis=0)
    intercepts = worst
    if len(t) >= m:
        w = np.full((m, m), 1e-6)
        np.fill_diagonal(w, 1.0)
        asf = np.max(t[:, None, :] / w[None, :, :], axis=2)  # (n, m)
        extremes = asf.argmin(axis=0)
        try:
            plane = np.linalg.solve(t[extremes], np.ones(m))
            cand = 1.0 / plane
            if np.all(np.isfinite(cand)) and np.all(cand > 1e-6) and len(set(extremes)) == m:
                intercepts = cand
        except np.linalg.LinAlgError:
            pass
    intercepts = np.where(intercepts <= 1e-12, 1.0, intercepts)
    return t / intercepts


def associate(points: np.ndarray, dirs: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Nearest direction (perpendicular distance) per point, its distance, full matrix."""
    u = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
    proj = points @ u.T
    d2 = np.sum(points ** 2, axis=1)[:, None] - proj ** 2
    dist = np.sqrt(np.maximum(d2, 0.0))
    niche = dist.argmin(axis=1)
    return niche, dist[np.arange(len(points)), niche], dist


def _extreme_holders(objs: np.ndarray, cand: list[int]) -> list[int]:
    """For each objective, the first candidate holding its maximum."""
    held = []
    for j in range(objs.shape[1]):
        best = max(cand, key=lambda i: (objs[i, j], -i))
        if best not in held:
            held.append(best)
    return held


def niching_survival(pool: list[Individual], n: int, dirs: np.ndarray,
                     rng: np.random.Generator) -> list[Individual]:
    objs = objective_matrix(pool)
    fronts = fast_nondominated_sort(objs)
    chosen: list[int] = []
    last: list[int] = []
    for front in fronts:
        if len(chosen) + len(front) <= n:
            chosen += front
            if len(chosen) == n:
                break
            continue
        last = front
        break
    if not last:
        return [pool[i] for i in chosen]
    considered = chosen + last
    points = normalize(objs[considered])
    niche, dist, _ = associate(points, dirs)
    pos = {idx: k for k, idx in enumerate(considered)}
    counts = np.zeros(len(dirs), dtype=int)
    for i in chosen:
        counts[niche[pos[i]]] += 1
    remaining = list(last)
    if not chosen:
        # the whole non-dominated front is being truncated: keep each objective's best
        for i in _extreme_holders(objs, last)[:n]:
            chosen.append(i)
            remaining.remove(i)
            counts[niche[pos[i]]] += 1
    while len(chosen) < n:
        by_niche: dict[int, list[int]] = {}
        for i in remaining:
            by_niche.setdefault(int(niche[pos[i]]), []).append(i)
        open_dirs = sorted(by_niche)
        lowest = min(counts[j] for j in open_dirs)
        ties = [j for j in open_dirs if counts[j] == lowest]
        j = ties[int(rng.integers(0, len(ties)))]
        members = by_niche[j]
        if counts[j] == 0:
            pick = min(members, key=lambda i: (dist[pos[i]], i))
        else:
            pick = members[int(rng.integers(0, len(members)))]
        chosen.append(pick)
        remaining.remove(pick)
        counts[j] += 1
    return [pool[i] for i in chosen]


def niche_representatives(pop: list[Individual], dirs: np.ndarray) -> list[Individual]:
    """Non-dominated members that are the closest point to some occupied direction."""
    if not pop:
        return []
    objs = objective_matrix(pop)
    front0 = set(fast_nondominated_sort(objs)[0])
    niche, _, dist = associate(normalize(objs), dirs)
    closest = {int(dist[:, j].argmin()) for j in np.unique(niche)}
    return [pop[i] for i in sorted(front0 & closest)]


def nsga3_generation(pop: list[Individual], problem: Problem, cfg: AlgorithmConfig,
                     dirs: np.ndarray, rng: np.random.Generator, gen: int = 0) -> list[Individual]:
    assign_rank_and_crowding(pop)
    taken = {ind.phenotype_key for ind in pop}
    pick = binary_tournament(pop, rng, use_crowding=False)
    offspring = make_offspring(pick, problem, cfg, rng, taken, gen)
    survivors = niching_survival(pop + offspring, cfg.pop_size, dirs, rng)
    assign_rank_and_crowding(survivors)
    return survivors
