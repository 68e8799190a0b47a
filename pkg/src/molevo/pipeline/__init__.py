"""End-to-end orchestration: corpus filtering, sampling, experiments, novelty and appraisal."""
from .appraise import Appraisal, AppraisalReport, LipinskiRules, appraise, novelty_check
from .experiment import (ExperimentPlan, RunRecord, load_run, run_experiment, run_seed, sample_seed,
                         stable_hash)
from .filters import FilterChain
from .store import CompoundStore, CorpusTooSmallError, build_subset, read_smiles_lines, sample_population

__all__ = [
    "Appraisal", "AppraisalReport", "CompoundStore", "CorpusTooSmallError", "ExperimentPlan",
    "FilterChain", "LipinskiRules", "RunRecord", "appraise", "build_subset", "load_run",
    "novelty_check", "read_smiles_lines", "run_experiment", "run_seed", "sample_population",
    "sample_seed", "stable_hash",
]
