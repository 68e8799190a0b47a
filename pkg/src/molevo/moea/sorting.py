"""Non-dominated sorting and crowding distance (maximization convention)."""
from __future__ import annotations

from typing import Sequence

import numpy as np


class DimensionMismatch(ValueError):
    pass


def _as_matrix(objs: Sequence[Sequence[float]]) -> np.ndarray:
    if len(objs) == 0:
        return np.zeros((0, 0))
    lengths = {len(o) for o in objs}
    if len(lengths) != 1:
        raise DimensionMismatch(f"objective vectors have lengths {sorted(lengths)}")
    return np.asarray(objs, dtype=float)


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """True when ``a`` is no worse everywhere and better somewhere."""
    a, b = np.asarray(a), np.asarray(b)
    return bool(np.all(a >= b) and np.any(a > b))


def fast_nondominated_sort(objs: Sequence[Sequence[float]]) -> list[list[int]]:
    """Partition indices into fronts; front 0 is the non-dominated set."""
    f = _as_matrix(objs)
    n = len(f)
    if n == 0:
        return []
    ge = np.all(f[:, None, :] >= f[None, :, :], axis=2)
    gt = np.any(f[:, None, :] > f[None, :, :], axis=2)
    dom = ge & gt  # dom[i, j]: i dominates j
    counts = dom.sum(axis=0)
    fronts = []
    current = [int(i) for i in np.flatnonzero(counts == 0)]
    while current:
        fronts.append(current)
        nxt = []
        for i in current:
            for j in np.flatnonzero(dom[i]):
                counts[j] -= 1
                if counts[j] == 0:
                    nxt.append(int(j))
        current = sorted(nxt)
    return fronts


def nondominated_indices(objs: Sequence[Sequence[float]]) -> list[int]:
    fronts = fast_nondominated_sort(objs)
    return fronts[0] if fronts else []


def crowding_distance(objs: Sequence[Sequence[float]]) -> np.ndarray:
    """Boundary points get inf; interior points sum normalized neighbour gaps."""
    f = _as_matrix(objs)
    n = len(f)
    dist = np.zeros(n)
    if n <= 2:
        dist[:] = np.inf
        return dist
    for j in range(f.shape[1]):
        order = np.argsort(f[:, j], kind="stable")
        col = f[order, j]
        dist[order[0]] = dist[order[-1]] = np.inf
        span = col[-1] - col[0]
        if span <= 0:
            continue
        gaps = (col[2:] - col[:-2]) / span
        dist[order[1:-1]] += gaps
    return dist
