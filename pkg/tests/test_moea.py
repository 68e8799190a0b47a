import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from molevo.moea import (AlgorithmConfig, DimensionMismatch, MoeadState, Problem, archive_insert,
                         associate, crowding_distance, dominates, fast_nondominated_sort,
                         moead_generation, mutate, neighborhoods, niching_survival,
                         nsga2_generation, objective_matrix, one_point_crossover, pareto_set,
                         riesz_reference_directions, run, tchebycheff)
from molevo.moea.core import Individual
from molevo.objectives import load_task
from molevo.selfies_codec import SelfiesGenome, alphabet, decode, tokenize
from toyproblem import SphereProblem, plain_igd, random_genomes, sphere_front

ALPHABET = alphabet()


def brute_fronts(objs):
    """Peel non-dominated layers by exhaustive pairwise comparison."""
    left = list(range(len(objs)))
    fronts = []
    while left:
        front = [i for i in left if not any(
            all(objs[j][k] >= objs[i][k] for k in range(len(objs[i])))
            and any(objs[j][k] > objs[i][k] for k in range(len(objs[i]))) for j in left)]
        fronts.append(sorted(front))
        left = [i for i in left if i not in front]
    return fronts


def ind(objs, key=None):
    return Individual(SelfiesGenome(), key or repr(objs), tuple(objs))


# ------------------------------------------------------------------ sorting


def test_sort_example():
    assert fast_nondominated_sort([(2, 2), (1, 2), (2, 1)]) == [[0], [1, 2]]
    assert fast_nondominated_sort([(1, 1)]) == [[0]]
    with pytest.raises(DimensionMismatch):
        fast_nondominated_sort([(1, 2), (1,)])


def test_sort_random_oracle():
    rng = np.random.default_rng(0)
    objs = rng.random((50, 3)).round(2).tolist()
    assert [sorted(f) for f in fast_nondominated_sort(objs)] == brute_fronts(objs)


@given(st.lists(st.tuples(*[st.integers(0, 4)] * 3), min_size=1, max_size=25))
def test_sort_partition_property(objs):
    fronts = fast_nondominated_sort(objs)
    assert sorted(itertools.chain.from_iterable(fronts)) == list(range(len(objs)))
    assert [sorted(f) for f in fronts] == brute_fronts(objs)
    for k in range(1, len(fronts)):
        for i in fronts[k]:
            assert any(dominates(objs[j], objs[i]) for j in fronts[k - 1])


def test_crowding_examples():
    assert np.all(np.isinf(crowding_distance([(0, 1), (1, 0)])))
    cd = crowding_distance([(0, 1), (0.5, 0.5), (1, 0)])
    assert cd[1] == pytest.approx(2.0) and np.isinf(cd[0]) and np.isinf(cd[2])
    cd = crowding_distance([(0, 1), (0.5, 0.5), (0.5, 0.5), (1, 0)])
    assert min(cd[1], cd[2]) == pytest.approx(1.0)  # duplicates add zero gap to each other


def test_pareto_set():
    pop = [ind((1, 0)), ind((0, 1)), ind((0.5, 0.5))]
    assert len(pareto_set(pop)) == 3
    assert pareto_set(pop[:1]) == pop[:1]
    rng = np.random.default_rng(5)
    objs = rng.random((100, 3)).tolist()
    pop = [ind(o, str(i)) for i, o in enumerate(objs)]
    assert sorted(int(o.phenotype_key) for o in pareto_set(pop)) == brute_fronts(objs)[0]
    dup = [ind((1, 0), "a"), ind((1, 0), "a")]
    assert len(pareto_set(dup)) == 1


# ------------------------------------------------------------------ reference directions


def test_riesz_two_objectives():
    d = riesz_reference_directions(2, 3, seed=0)
    d = d[np.argsort(d[:, 0])]
    assert np.allclose(d, [[0, 1], [0.5, 0.5], [1, 0]], atol=0.02)


@given(st.integers(2, 5), st.integers(0, 30), st.integers(0, 100))
def test_riesz_simplex(m, extra, seed):
    d = riesz_reference_directions(m, m + extra, seed=seed, iterations=50)
    assert np.all(d >= 0)
    assert np.allclose(d.sum(axis=1), 1.0, atol=1e-9)
    assert len({tuple(r) for r in d.round(12)}) == len(d)


def test_riesz_deterministic():
    a = riesz_reference_directions(7, 100, seed=4)
    assert np.array_equal(a, riesz_reference_directions(7, 100, seed=4))


# ------------------------------------------------------------------ operators


def test_crossover_definition():
    a, b = tokenize("[C][N][O]"), tokenize("[F][Cl][Br]")
    rng = np.random.default_rng(0)
    c1, c2 = one_point_crossover(a, b, rng, cuts=(1, 1))
    assert c1.to_string() == "[C][Cl][Br]" and c2.to_string() == "[F][N][O]"
    c1, c2 = one_point_crossover(a, b, rng, cuts=(3, 3))
    assert c1 == a and c2 == b
    c1, c2 = one_point_crossover(a, b, rng, cuts=(0, 0))
    assert c1 == b and c2 == a
    c1, _ = one_point_crossover(a, b, rng, max_length=2, cuts=(3, 0))
    assert len(c1) == 2


def test_mutation_definition():
    g = tokenize("[C][O]")
    rng = np.random.default_rng(0)
    assert mutate(g, rng, ALPHABET, rate=0.0) == g
    n = tokenize("[N]")
    seen = {mutate(g, np.random.default_rng(s), n.tokens, rate=1.0).to_string() for s in range(50)}
    assert "[N][O]" in seen  # substitute at position 0
    assert seen <= {"[N][O]", "[C][N]", "[N][C][O]", "[C][N][O]", "[C][O][N]", "[O]", "[C]"}
    single = tokenize("[C]")
    for s in range(30):
        assert len(mutate(single, np.random.default_rng(s), n.tokens, rate=1.0)) >= 1


def test_operator_closure_sweep():
    rng = np.random.default_rng(11)
    genomes = [SelfiesGenome(tuple(ALPHABET[i] for i in rng.integers(0, len(ALPHABET), 20)))
               for _ in range(50)]
    for _ in range(1000):
        a, b = genomes[rng.integers(0, 50)], genomes[rng.integers(0, 50)]
        c1, c2 = one_point_crossover(a, b, rng)
        for c in (c1, mutate(c2, rng, ALPHABET)):
            assert decode(c).is_valence_valid()


# ------------------------------------------------------------------ config


def test_config_validation():
    with pytest.raises(ValueError):
        AlgorithmConfig("spea2")
    with pytest.raises(ValueError):
        AlgorithmConfig(mutation_rate=1.5)
    with pytest.raises(ValueError):
        AlgorithmConfig(pop_size=10, neighborhood_size=20)
    assert AlgorithmConfig(pop_size=100).neighbors == 10
    assert AlgorithmConfig(pop_size=15).neighbors == 2
    with pytest.raises(ValueError):
        AlgorithmConfig.from_dict({"colour": 1})


# ------------------------------------------------------------------ NSGA-II / III


def test_nsga2_elitism_keeps_parents():
    """All-non-dominated parents against dominated offspring survive unchanged."""
    p = SphereProblem()
    cfg = AlgorithmConfig("nsga2", pop_size=10, mutation_rate=1.0, rng_seed=0)
    # parents on the front: distance tokens (positions 2 mod 3) all index 0
    rng = np.random.default_rng(0)
    parents = []
    for k in range(10):
        toks = [ALPHABET[3 * k % len(ALPHABET)], ALPHABET[(7 * k + 1) % len(ALPHABET)], ALPHABET[0]]
        parents.append(p.individual(SelfiesGenome(tuple(toks))))
    assert len(fast_nondominated_sort(objective_matrix(parents))) == 1
    f0 = {x.phenotype_key for x in parents}
    out = nsga2_generation(parents, p, cfg, rng)
    dominated_children = [x for x in out if x.phenotype_key not in f0]
    for c in dominated_children:
        assert not any(dominates(q.objectives, c.objectives) for q in parents)


@pytest.mark.parametrize("alg", ["nsga2", "nsga3", "moead"])
def test_toy_front_convergence(alg):
    p = SphereProblem()
    cfg = AlgorithmConfig(alg, pop_size=40, generations=30, rng_seed=2, similarity_space="objective")
    r = run(p, random_genomes(p, 40, 12, 1), cfg)
    ref = sphere_front()
    start, end = plain_igd(ref, r.fronts[0]), plain_igd(ref, objective_matrix(r.population))
    assert end <= 0.5 * start


@pytest.mark.parametrize("alg", ["nsga2", "nsga3"])
def test_elitism_and_uniqueness(alg):
    p = SphereProblem()
    cfg = AlgorithmConfig(alg, pop_size=30, generations=15, rng_seed=3)
    best = []
    counts = []

    def cb(gen, pop, par):
        best.append(objective_matrix(pareto_set(pop)).max(axis=0))
        counts.append(len({x.phenotype_key for x in pop}) == len(pop))

    run(p, random_genomes(p, 30, 9, 4), cfg, callback=cb)
    assert all(counts)
    assert all(np.all(b >= a - 1e-12) for a, b in zip(best, best[1:]))


def test_duplicate_offspring_resampled():
    from molevo.moea.variation import admit_child
    p = Problem(load_task("cobimetinib"))
    g = tokenize("[C][C][O]")
    cfg = AlgorithmConfig(mutation_rate=0.0, duplicate_retries=3)
    taken = {p.key_of(g)}
    child = admit_child(g, p, cfg, np.random.default_rng(0), taken, 1)
    assert child is not None and child.phenotype_key != p.key_of(g)
    assert child.phenotype_key in taken


def test_niching_single_direction():
    pool = [ind((1.0, 0.0), "a"), ind((0.0, 1.0), "b"), ind((0.55, 0.5), "c"), ind((0.5, 0.55), "d")]
    dirs = np.array([[0.5, 0.5]])
    kept = niching_survival(pool, 3, dirs, np.random.default_rng(0))
    keys = {x.phenotype_key for x in kept}
    # both extremes are kept by the elitism rule, then the closest to the ray
    assert keys >= {"a", "b"} and len(keys) == 3 and keys & {"c", "d"}


def test_niching_all_duplicates():
    pool = [ind((0.3, 0.3), str(i)) for i in range(8)]
    dirs = riesz_reference_directions(2, 4)
    a = niching_survival(pool, 4, dirs, np.random.default_rng(1))
    b = niching_survival(pool, 4, dirs, np.random.default_rng(1))
    assert len(a) == 4 and [x.phenotype_key for x in a] == [x.phenotype_key for x in b]


def test_associate_perpendicular():
    niche, dist, _ = associate(np.array([[1.0, 0.1]]), np.array([[1.0, 0.0], [0.0, 1.0]]))
    assert niche[0] == 0 and dist[0] == pytest.approx(0.1)


# ------------------------------------------------------------------ MOEA/D


def test_tchebycheff_and_neighborhoods():
    t = tchebycheff(np.array([[0.5, 0.2]]), np.array([[0.5, 0.5]]), np.array([1.0, 1.0]))
    assert t[0] == pytest.approx(0.4)
    nb = neighborhoods(np.array([[0, 1], [0.5, 0.5], [1, 0]], dtype=float), 2)
    assert list(nb[0]) == [0, 1] and nb[1][0] == 1


def _moead_fixture(objs, tau):
    p = SphereProblem()
    pop = [ind(o, f"k{i}") for i, o in enumerate(objs)]
    dirs = np.array([[1.0, 0, 0], [0, 1.0, 0], [0, 0, 1.0]])
    cfg = AlgorithmConfig("moead", pop_size=3, neighborhood_size=3, replacement_similarity=tau,
                          similarity_space="objective", crossover_rate=0.0, mutation_rate=1.0)
    state = MoeadState(dirs, neighborhoods(dirs, 3), objective_matrix(pop).max(axis=0))
    return p, pop, cfg, state


def test_moead_replaces_at_most_one_slot():
    p, pop, cfg, state = _moead_fixture([(0.1, 0.1, 0.1)] * 3, 1.0)
    for k, x in enumerate(pop):
        x.genome = random_genomes(p, 3, 6, 9)[k]
    rng = np.random.default_rng(0)
    before = [x.phenotype_key for x in pop]
    moead_generation(pop, p, cfg, state, rng)
    # three sub-problems visited, each may replace at most one slot
    assert sum(a != b.phenotype_key for a, b in zip(before, pop)) <= 3
    assert state.replacements <= 3


def test_moead_gate_blocks_identical_child():
    p, pop, cfg, state = _moead_fixture([(0.0, 0.0, 0.0)] * 3, 0.95)
    from molevo.moea import moead as moead_mod
    child = ind((0.0, 0.0, 0.0), "clone")
    assert moead_mod._similarity(child, pop, p, "objective") == 1.0 > cfg.replacement_similarity


def test_moead_ideal_monotone():
    p = SphereProblem()
    cfg = AlgorithmConfig("moead", pop_size=20, generations=1, similarity_space="objective")
    pop = [p.individual(g) for g in random_genomes(p, 20, 9, 5)]
    from molevo.moea import init_state
    state = init_state(pop, riesz_reference_directions(3, 20), cfg)
    rng = np.random.default_rng(0)
    prev = state.ideal.copy()
    for gen in range(5):
        pop = moead_generation(pop, p, cfg, state, rng, gen)
        assert np.all(state.ideal >= prev)
        prev = state.ideal.copy()


def test_archive_insert():
    a = archive_insert([], ind((1, 0), "a"), 3)
    a = archive_insert(a, ind((0, 1), "b"), 3)
    assert len(archive_insert(a, ind((0.5, -1), "c"), 3)) == 2  # dominated
    a = archive_insert(a, ind((1, 1), "d"), 3)
    assert [x.phenotype_key for x in a] == ["d"]


# ------------------------------------------------------------------ molecular runs


def test_molecular_run_deterministic():
    task = load_task("cobimetinib")
    from molevo.pipeline import read_smiles_lines, sample_population
    from molevo._data import data_path
    init = sample_population(list(read_smiles_lines([data_path("corpus.smi")])), 12, seed=0)
    out = []
    for _ in range(2):
        r = run(Problem(task), init, AlgorithmConfig("nsga2", pop_size=12, generations=3, rng_seed=9))
        out.append([x.phenotype_key for x in r.population])
        assert r.invalid_decodes == 0
    assert out[0] == out[1]
