"""Convergence (running metric over IGD) and n-ary internal similarity of fronts."""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .fingerprints import Fingerprint, FingerprintMismatch
from .moea.sorting import DimensionMismatch, nondominated_indices

log = logging.getLogger(__name__)

FrontHistory = Sequence[np.ndarray]  # per-generation (n_i, m) objective matrices, maximization


class EmptyHistoryError(ValueError):
    pass


# ------------------------------------------------------------------ IGD


def _merge_nondominated(fronts: Sequence[np.ndarray]) -> np.ndarray:
    pts = np.unique(np.vstack([f for f in fronts if len(f)]), axis=0)
    return pts[nondominated_indices(pts)]


def _scaler(ref: np.ndarray):
    ideal, nadir = ref.max(axis=0), ref.min(axis=0)
    span = ideal - nadir
    span = np.where(span <= 1e-12, 1.0, span)
    return lambda f: (ideal - np.asarray(f, dtype=float)) / span


def igd(reference: np.ndarray, front: np.ndarray) -> float:
    """Mean over reference points of the distance to the nearest front point."""
    if len(front) == 0:
        return math.inf
    d = np.linalg.norm(reference[:, None, :] - front[None, :, :], axis=2)
    return float(d.min(axis=1).mean())


@dataclass
class RunningMetricSeries:
    window: int
    checkpoints: list[int] = field(default_factory=list)
    generations: list[list[int]] = field(default_factory=list)
    curves: list[list[float]] = field(default_factory=list)
    deltas: list[float] = field(default_factory=list)

    def rows(self):
        for t, gens, curve in zip(self.checkpoints, self.generations, self.curves):
            for g, v in zip(gens, curve):
                yield t, g, v


def running_metric(history: FrontHistory, window: int = 20) -> RunningMetricSeries:
    """Sliding-window IGD of each snapshot against the merged front up to the checkpoint.

    Checkpoints fall every ``window`` snapshots (plus the last snapshot); at
    checkpoint t the reference is the non-dominated merge of snapshots 0..t,
    normalized by its own ideal and nadir. Each checkpoint's delta is the IGD
    change across its window.
    """
    if len(history) < 2:
        raise EmptyHistoryError("running metric needs at least two snapshots")
    if window < 2:
        raise ValueError("window must be at least 2")
    n = len(history)
    checkpoints = list(range(window - 1, n, window))
    if not checkpoints or checkpoints[-1] != n - 1:
        checkpoints.append(n - 1)
    out = RunningMetricSeries(window)
    for t in checkpoints:
        ref = _merge_nondominated(history[:t + 1])
        scale = _scaler(ref)
        r = scale(ref)
        gens = list(range(max(0, t - window + 1), t + 1))
        curve = [igd(r, scale(history[g])) for g in gens]
        out.checkpoints.append(t)
        out.generations.append(gens)
        out.curves.append(curve)
        out.deltas.append(abs(curve[0] - curve[-1]))
    return out


def cross_algorithm_running_metric(histories: Mapping[str, FrontHistory]) -> dict[str, list[float]]:
    """IGD per generation of every algorithm against the merge of all final fronts."""
    dims = {h[-1].shape[1] for h in histories.values() if len(h) and len(h[-1])}
    if len(dims) > 1:
        raise DimensionMismatch(f"histories have objective counts {sorted(dims)}")
    ref = _merge_nondominated([h[-1] for h in histories.values()])
    scale = _scaler(ref)
    r = scale(ref)
    return {name: [igd(r, scale(f)) for f in h] for name, h in histories.items()}


# ------------------------------------------------------------------ extended BUB

BUB_VARIANTS = ("unweighted", "weighted", "fraction")


def bub_counters(fps: Sequence[Fingerprint], gamma: int | None = None) -> dict[str, float]:
    """Per-column coincidence counters over N fingerprints.

    Unweighted counts a, d, dis and the weighted sums w_a, w_d, w_dis with
    similarity weight delta/N and dissimilarity weight 1 - (delta - N mod 2)/N,
    where delta = |2k - N| for a column with k bits on.
    """
    n = len(fps)
    if n < 2:
        raise ValueError("extended similarity needs at least two fingerprints")
    if len({(f.n_bits, f.kind) for f in fps}) != 1:
        raise FingerprintMismatch("fingerprints differ in kind or length")
    gamma = n % 2 if gamma is None else gamma
    k = np.zeros(fps[0].n_bits, dtype=np.int64)
    for f in fps:
        if f.bits:
            k[list(f.bits)] += 1
    delta = np.abs(2 * k - n)
    one = (2 * k - n) > gamma
    zero = (n - 2 * k) > gamma
    dis = ~(one | zero)
    ws = delta / n
    wd = 1.0 - (delta - n % 2) / n
    return {"a": float(one.sum()), "d": float(zero.sum()), "dis": float(dis.sum()),
            "w_a": float(ws[one].sum()), "w_d": float(ws[zero].sum()), "w_dis": float(wd[dis].sum())}


def extended_bub_similarity(fps: Sequence[Fingerprint], gamma: int | None = None,
                            variant: str = "fraction") -> float:
    """n-ary Baroni-Urbani-Buser similarity (sqrt(a d) + a) / (sqrt(a d) + a + b + c).

    ``variant``: ``unweighted`` counts each classified column once;
    ``weighted`` uses weighted counters throughout; ``fraction`` weights the
    numerator only. All three equal pairwise BUB when N = 2 and gamma = 0.
    """
    if variant not in BUB_VARIANTS:
        raise ValueError(f"variant must be one of {BUB_VARIANTS}")
    c = bub_counters(fps, gamma)
    if variant == "unweighted":
        num = math.sqrt(c["a"] * c["d"]) + c["a"]
        den = num + c["dis"]
    elif variant == "weighted":
        num = math.sqrt(c["w_a"] * c["w_d"]) + c["w_a"]
        den = num + c["w_dis"]
    else:
        num = math.sqrt(c["w_a"] * c["w_d"]) + c["w_a"]
        den = math.sqrt(c["a"] * c["d"]) + c["a"] + c["dis"]
    if den == 0:
        return 1.0
    return min(1.0, max(0.0, num / den))


def internal_similarity_series(snapshots: Sequence[Sequence[Fingerprint]], variant: str = "fraction",
                               gamma: int | None = None) -> list[float]:
    """Extended BUB of each snapshot's fingerprints; a singleton snapshot scores 1.0."""
    out = []
    for g, fps in enumerate(snapshots):
        if len(fps) < 2:
            log.debug("snapshot %d has %d member(s); similarity set to 1.0", g, len(fps))
            out.append(1.0)
        else:
            out.append(extended_bub_similarity(fps, gamma, variant))
    return out


# ------------------------------------------------------------------ CSV


def write_running_metric_csv(path, series: RunningMetricSeries) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["checkpoint", "generation", "igd"])
        for t, g, v in series.rows():
            w.writerow([t, g, f"{v:.10f}"])


def write_similarity_csv(path, values: Sequence[float]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["generation", "similarity"])
        for g, v in enumerate(values):
            w.writerow([g, f"{v:.10f}"])
