"""Evolutionary engines (NSGA-II, NSGA-III, MOEA/D) over SELFIES genomes."""
from .core import ALGORITHMS, AlgorithmConfig, Individual, Problem, objective_matrix
from .engine import RunResult, pareto_set, run
from .moead import MoeadState, archive_insert, init_state, moead_generation, neighborhoods, tchebycheff
from .nsga2 import assign_rank_and_crowding, binary_tournament, crowding_survival, nsga2_generation
from .nsga3 import associate, niche_representatives, niching_survival, normalize, nsga3_generation
from .operators import mutate, one_point_crossover
from .refdirs import project_to_simplex, riesz_energy, riesz_reference_directions
from .sorting import DimensionMismatch, crowding_distance, dominates, fast_nondominated_sort

__all__ = [
    "ALGORITHMS", "AlgorithmConfig", "DimensionMismatch", "Individual", "MoeadState", "Problem",
    "RunResult", "archive_insert", "assign_rank_and_crowding", "associate", "binary_tournament",
    "crowding_distance", "crowding_survival", "dominates", "fast_nondominated_sort",
    "init_state", "moead_generation", "mutate", "neighborhoods", "niche_representatives",
    "niching_survival", "normalize", "nsga2_generation", "nsga3_generation", "objective_matrix",
    "one_point_crossover", "pareto_set", "project_to_simplex", "riesz_energy",
    "riesz_reference_directions", "run", "tchebycheff",
]
