"""Experiment plans: sampling, runs, per-run artifacts, cross-algorithm comparison and tables."""
from __future__ import annotations

import csv
import hashlib
import json
import logging
import traceback
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from ..metrics import (cross_algorithm_running_metric, internal_similarity_series, running_metric,
                       write_running_metric_csv, write_similarity_csv)
from ..moea import ALGORITHMS, AlgorithmConfig, Problem, RunResult, run
from ..objectives import load_task
from ..selfies_codec import SelfiesGenome
from .appraise import LipinskiRules, appraise_graph, novelty_check
from .store import CompoundStore, read_smiles_lines, sample_population

log = logging.getLogger(__name__)

FLOAT = "{:.6f}"


def stable_hash(*parts) -> int:
    """32-bit hash of the parts' text, identical across processes and platforms."""
    digest = hashlib.sha256("|".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(digest[:4], "big")


def run_seed(base: int, task: str, algorithm: str, pop_size: int, repeat: int) -> int:
    return base ^ stable_hash(task, algorithm, pop_size, repeat)


def sample_seed(base: int, task: str, pop_size: int, repeat: int) -> int:
    return base ^ stable_hash(task, "initial-sample", pop_size, repeat)


@dataclass(frozen=True)
class ExperimentPlan:
    tasks: tuple[str, ...] = ("cobimetinib",)
    algorithms: tuple[str, ...] = ALGORITHMS
    pop_sizes: tuple[int, ...] = (100,)
    generations: int = 200
    repeats: int = 1
    base_seed: int = 0
    shared_initial_sample: bool = True
    window: int = 20
    similarity_variant: str = "fraction"
    corpus: str | None = None
    algorithm_options: dict = field(default_factory=dict)

    @property
    def total_runs(self) -> int:
        return len(self.tasks) * len(self.algorithms) * len(self.pop_sizes) * self.repeats

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentPlan":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown plan keys {sorted(unknown)}")
        kw = dict(d)
        for k in ("tasks", "algorithms", "pop_sizes"):
            if k in kw:
                kw[k] = tuple(kw[k])
        return cls(**kw)


@dataclass
class RunRecord:
    """What the aggregation needs from a finished (or resumed) run."""
    directory: Path
    labels: tuple[str, ...]
    pareto: np.ndarray
    history: list[np.ndarray]
    pareto_smiles: list[str]
    novel: list[bool]
    lipinski: list[bool]


def _fmt(x: float) -> str:
    return FLOAT.format(x)


def _header(meta: dict) -> str:
    return "# " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n"


def write_run(directory: Path, result: RunResult, problem: Problem, meta: dict,
              store: CompoundStore, initial_keys: Sequence[str], window: int,
              variant: str) -> RunRecord:
    directory.mkdir(parents=True, exist_ok=True)
    labels = problem.task.labels
    keys = [ind.phenotype_key for ind in result.pareto]
    novel = novelty_check(keys, store, initial_keys)
    rules = LipinskiRules()
    apps = [appraise_graph(k, problem.graph(ind), rules) for k, ind in zip(keys, result.pareto)]

    with open(directory / "config.json", "w") as fh:
        json.dump({**meta, "config": asdict(result.config)}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(directory / "pareto.csv", "w", newline="") as fh:
        fh.write(_header(meta))
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["smiles", "selfies", *labels, "novel", "lipinski_pass", "alerts"])
        for ind, nv, ap in zip(result.pareto, novel, apps):
            w.writerow([ind.phenotype_key, ind.genome.to_string(), *map(_fmt, ind.objectives),
                        int(nv), int(ap.lipinski_pass), ";".join(ap.alerts)])
    with open(directory / "population.jsonl", "w") as fh:
        for ind in result.population:
            fh.write(json.dumps({"smiles": ind.phenotype_key, "selfies": ind.genome.to_string(),
                                 "objectives": [float(_fmt(v)) for v in ind.objectives],
                                 "age": ind.age}, sort_keys=True) + "\n")
    with open(directory / "fronts.csv", "w", newline="") as fh:
        fh.write(_header(meta))
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["generation", "smiles", *labels])
        for g, (front, ks) in enumerate(zip(result.fronts, result.pareto_keys)):
            for k, row in zip(ks, front):
                w.writerow([g, k, *map(_fmt, row)])

    history = [np.round(f, 6) for f in result.fronts]
    series = running_metric(history, window)
    write_running_metric_csv(directory / "running_metric.csv", series)
    fps = [[problem.fingerprint(k) for k in ks] for ks in result.pareto_keys]
    write_similarity_csv(directory / "similarity.csv", internal_similarity_series(fps, variant))
    with open(directory / "stats.json", "w") as fh:
        json.dump({"evaluations": result.evaluations, "invalid_decodes": result.invalid_decodes,
                   "pareto_size": len(result.pareto)}, fh, sort_keys=True)
        fh.write("\n")
    (directory / "DONE").write_text("ok\n")
    return RunRecord(directory, labels, np.array([f for f in history[-1]]), history, keys, novel,
                     [a.lipinski_pass for a in apps])


def load_run(directory: Path) -> RunRecord:
    """Rebuild a RunRecord from files written by ``write_run``."""
    def rows(name):
        with open(directory / name) as fh:
            return list(csv.reader(line for line in fh if not line.startswith("#")))

    par = rows("pareto.csv")
    header = par[0]
    labels = tuple(header[2:-3])
    m = len(labels)
    body = par[1:]
    pareto = np.array([[float(x) for x in r[2:2 + m]] for r in body]).reshape(-1, m)
    fr = rows("fronts.csv")[1:]
    by_gen: dict[int, list] = {}
    for r in fr:
        by_gen.setdefault(int(r[0]), []).append([float(x) for x in r[2:2 + m]])
    history = [np.array(by_gen[g]).reshape(-1, m) for g in sorted(by_gen)]
    return RunRecord(directory, labels, pareto, history, [r[0] for r in body],
                     [r[2 + m] == "1" for r in body], [r[3 + m] == "1" for r in body])


def _corpus(plan: ExperimentPlan) -> list[tuple[str, str]]:
    from .._data import data_path
    return list(read_smiles_lines([plan.corpus or data_path("corpus.smi")]))


def run_experiment(plan: ExperimentPlan, out_dir: str | Path,
                   store: CompoundStore | None = None) -> dict[tuple, RunRecord]:
    """Execute every run of ``plan`` and write per-run, per-cell and per-plan outputs.

    Runs whose directory already holds a DONE marker are loaded, not repeated.
    A failing run is logged (error.txt) and skipped.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    corpus = _corpus(plan)
    store = store if store is not None else CompoundStore.load(plan.corpus)
    records: dict[tuple, RunRecord] = {}
    for task_name in plan.tasks:
        task = load_task(task_name)
        for n in plan.pop_sizes:
            for rep in range(plan.repeats):
                cell = out / task.name.lower() / f"N{n}" / f"r{rep}"
                shared = None
                if plan.shared_initial_sample:
                    shared = sample_population(corpus, n, sample_seed(plan.base_seed, task.name, n, rep))
                histories = {}
                for alg in plan.algorithms:
                    seed = run_seed(plan.base_seed, task.name, alg, n, rep)
                    rdir = cell / alg
                    if (rdir / "DONE").exists():
                        rec = load_run(rdir)
                    else:
                        initial = shared if shared is not None else sample_population(
                            corpus, n, run_seed(plan.base_seed, task.name, alg + "-sample", n, rep))
                        cfg = AlgorithmConfig(**{**plan.algorithm_options, "algorithm": alg,
                                                 "pop_size": n, "generations": plan.generations,
                                                 "rng_seed": seed})
                        meta = {"task": task.name, "algorithm": alg, "pop_size": n, "repeat": rep,
                                "seed": seed}
                        try:
                            rec = execute_run(task, initial, cfg, rdir, meta, store, plan)
                        except Exception:  # keep the rest of the plan going
                            rdir.mkdir(parents=True, exist_ok=True)
                            (rdir / "error.txt").write_text(traceback.format_exc())
                            log.exception("run %s failed", rdir)
                            continue
                    records[(task.name, alg, n, rep)] = rec
                    histories[alg] = rec.history
                if histories:
                    write_comparison(cell / "comparison.csv", cross_algorithm_running_metric(histories))
    write_summary(out / "summary.csv", records, plan)
    return records


def execute_run(task, initial: list[SelfiesGenome], cfg: AlgorithmConfig, rdir: Path, meta: dict,
                store: CompoundStore, plan: ExperimentPlan) -> RunRecord:
    problem = Problem(task)
    result = run(problem, initial, cfg)
    initial_keys = [problem.key_of(g) for g in initial]
    log.info("%s: %d Pareto members, %d evaluations", rdir, len(result.pareto), result.evaluations)
    return write_run(rdir, result, problem, meta, store, initial_keys, plan.window,
                     plan.similarity_variant)


def write_comparison(path: Path, series: dict[str, list[float]]) -> None:
    names = list(series)
    n = max(len(v) for v in series.values())
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["generation", *names])
        for g in range(n):
            w.writerow([g, *(_fmt(series[a][g]) if g < len(series[a]) else "" for a in names)])


def _pm(values: Sequence[float]) -> str:
    v = np.asarray(values, dtype=float)
    return f"{v.mean():.2f} ± {v.std():.2f}"


def write_summary(path: Path, records: dict[tuple, RunRecord], plan: ExperimentPlan) -> None:
    """Per (task, N, algorithm): MIN/MAX/AVG of each objective and #Pareto, mean ± std over repeats."""
    groups: dict[tuple, list[RunRecord]] = {}
    for (task, alg, n, _), rec in sorted(records.items()):
        groups.setdefault((task, n, alg), []).append(rec)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["task", "pop_size", "algorithm", "objective", "MIN", "MAX", "AVG"])
        for (task, n, alg), recs in groups.items():
            labels = recs[0].labels
            for j, label in enumerate(labels):
                cols = [[f(r.pareto[:, j]) for r in recs if len(r.pareto)] for f in (np.min, np.max, np.mean)]
                w.writerow([task, n, alg, label, *(_pm(c) if c else "" for c in cols)])
            w.writerow([task, n, alg, "#Pareto", "", "", _pm([len(r.pareto) for r in recs])])
