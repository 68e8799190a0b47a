"""Command-line interface: subset, sample, run, metrics, appraise, satable."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from .._data import data_path
from ..metrics import (internal_similarity_series, running_metric, write_running_metric_csv,
                       write_similarity_csv)
from ..fingerprints import circular_fingerprint
from ..molgraph.smiles import parse_smiles
from ..moea import ALGORITHMS
from .appraise import appraise
from .experiment import ExperimentPlan, load_run, run_experiment
from .filters import FilterChain
from .store import CompoundStore, build_subset, read_smiles_lines, sample_population

log = logging.getLogger("molevo")


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path) as fh:
        return json.load(fh)


def cmd_subset(args) -> int:
    cfg = _load_config(args.config)
    chain = FilterChain.from_dict(cfg.get("filters", {}))
    store, rejected = build_subset(args.corpus, chain, args.out)
    print(f"kept {len(store)} molecules -> {args.out}")
    for name, count in sorted(rejected.items()):
        print(f"rejected[{name}]\t{count}")
    return 0


def cmd_sample(args) -> int:
    corpus = list(read_smiles_lines([args.corpus or data_path("corpus.smi")]))
    genomes = sample_population(corpus, args.n, args.seed)
    out = open(args.out, "w") if args.out else sys.stdout
    for g in genomes:
        out.write(g.to_string() + "\n")
    if args.out:
        out.close()
    return 0


def cmd_run(args) -> int:
    cfg = _load_config(args.config)
    plan_kw = dict(cfg.get("plan", {}))
    for key, value in (("tasks", args.task), ("algorithms", args.algorithm),
                       ("pop_sizes", args.pop_size), ("generations", args.generations),
                       ("repeats", args.repeats), ("base_seed", args.seed), ("corpus", args.corpus)):
        if value is not None:
            plan_kw[key] = value
    if "algorithm" in cfg:
        plan_kw["algorithm_options"] = cfg["algorithm"]
    plan = ExperimentPlan.from_dict(plan_kw)
    log.info("running %d experiments", plan.total_runs)
    records = run_experiment(plan, args.out)
    print(f"{len(records)} of {plan.total_runs} runs finished; summary in {Path(args.out) / 'summary.csv'}")
    return 0 if len(records) == plan.total_runs else 1


def cmd_metrics(args) -> int:
    rdir = Path(args.run_dir)
    rec = load_run(rdir)
    write_running_metric_csv(rdir / "running_metric.csv", running_metric(rec.history, args.window))
    fps = []
    with open(rdir / "fronts.csv") as fh:
        rows = list(csv.reader(line for line in fh if not line.startswith("#")))[1:]
    by_gen: dict[int, list] = {}
    for r in rows:
        by_gen.setdefault(int(r[0]), []).append(circular_fingerprint(parse_smiles(r[1]), "ecfp", 2))
    fps = [by_gen[g] for g in sorted(by_gen)]
    write_similarity_csv(rdir / "similarity.csv", internal_similarity_series(fps, args.variant))
    print(f"metrics rewritten in {rdir}")
    return 0


def cmd_appraise(args) -> int:
    with open(args.pareto) as fh:
        rows = list(csv.DictReader(line for line in fh if not line.startswith("#")))
    report = appraise([r["smiles"] for r in rows])
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["smiles", "mw", "logp", "hbd", "hba", "violations", "lipinski_pass", "alerts"])
    for a in report.rows:
        w.writerow([a.smiles, f"{a.mw:.3f}", f"{a.logp:.3f}", a.hbd, a.hba, ";".join(a.violations),
                    int(a.lipinski_pass), ";".join(a.alerts)])
    print(json.dumps(report.summary, sort_keys=True), file=sys.stderr)
    return 0


def cmd_satable(args) -> int:
    from ..objectives.sascore import build_fragment_table
    graphs = (parse_smiles(s) for s, _ in read_smiles_lines(args.corpus))
    table = build_fragment_table(graphs, args.coverage)
    table.write(args.out)
    print(f"wrote {len(table)} fragment contributions to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="molevo", description="Multi-objective molecular evolution")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("subset", help="filter a SMILES corpus into a compound store")
    p.add_argument("action", choices=["build"])
    p.add_argument("corpus", nargs="+")
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.set_defaults(func=cmd_subset)

    p = sub.add_parser("sample", help="sample an initial population as SELFIES")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--corpus")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("run", help="run an experiment plan")
    p.add_argument("--task", nargs="+")
    p.add_argument("--algorithm", nargs="+", choices=ALGORITHMS)
    p.add_argument("--pop-size", nargs="+", type=int)
    p.add_argument("--generations", type=int)
    p.add_argument("--repeats", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--corpus")
    p.add_argument("--config", help="JSON file with 'plan' and 'algorithm' sections")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("metrics", help="recompute running metric and similarity for a run directory")
    p.add_argument("run_dir")
    p.add_argument("--window", type=int, default=20)
    p.add_argument("--variant", default="fraction", choices=["unweighted", "weighted", "fraction"])
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("appraise", help="Lipinski and alert appraisal of a Pareto CSV")
    p.add_argument("pareto")
    p.set_defaults(func=cmd_appraise)

    p = sub.add_parser("satable", help="build an SA fragment table from SMILES files")
    p.add_argument("corpus", nargs="+")
    p.add_argument("--out", required=True)
    p.add_argument("--coverage", type=float, default=0.8)
    p.set_defaults(func=cmd_satable)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
