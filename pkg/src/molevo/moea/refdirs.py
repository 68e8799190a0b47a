"""Reference directions on the unit simplex by Riesz s-energy minimization."""
from __future__ import annotations

import numpy as np


def project_to_simplex(x: np.ndarray) -> np.ndarray:
    """Euclidean projection of each row onto {x >= 0, sum x = 1}."""
    n, m = x.shape
    u = -np.sort(-x, axis=1)
    css = np.cumsum(u, axis=1) - 1.0
    idx = np.arange(1, m + 1)
    cond = u - css / idx > 0
    rho = m - 1 - np.argmax(cond[:, ::-1], axis=1)
    theta = css[np.arange(n), rho] / (rho + 1)
    return np.maximum(x - theta[:, None], 0.0)


def riesz_energy(x: np.ndarray, s: float) -> float:
    d = np.linalg.norm(x[:, None, :] - x[None, :, :], axis=2)
    iu = np.triu_indices(len(x), 1)
    return float(np.sum(d[iu] ** -s))


def riesz_reference_directions(m: int, n: int, seed: int = 0, iterations: int = 500,
                               s: float | None = None) -> np.ndarray:
    """``n`` well-spread points on the (m-1)-simplex, the m corners included.

    Projected gradient descent on log Riesz s-energy (s = 2m by default) from
    a seeded random start; corner points stay fixed. Deterministic per seed.
    """
    if m < 2 or n < m:
        raise ValueError("need m >= 2 and n >= m")
    s = 2.0 * m if s is None else s
    rng = np.random.default_rng(seed)
    x = rng.random((n, m))
    x /= x.sum(axis=1, keepdims=True)
    x[:m] = np.eye(m)
    free = np.arange(m, n)
    spacing = n ** (-1.0 / (m - 1))
    for it in range(iterations):
        if len(free) == 0:
            break
        diff = x[:, None, :] - x[None, :, :]
        d2 = np.sum(diff ** 2, axis=2)
        np.fill_diagonal(d2, np.inf)
        d2 = np.maximum(d2, 1e-24)
        w = d2 ** (-(s + 2) / 2)
        energy = np.sum(d2 ** (-s / 2)) / 2
        # negative gradient of log energy: repulsion from every other point
        force = s * np.einsum("ij,ijk->ik", w, diff) / energy
        force -= force.mean(axis=1, keepdims=True)  # stay in the simplex plane
        norms = np.linalg.norm(force, axis=1)
        scale = norms[free].max()
        if scale <= 0:
            break
        step = 0.1 * spacing * (1.0 - it / iterations)
        x[free] = project_to_simplex(x[free] + step * force[free] / scale)
    x = np.maximum(x, 0.0)
    x /= x.sum(axis=1, keepdims=True)
    return x
