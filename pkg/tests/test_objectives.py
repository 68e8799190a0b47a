import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import corpus_smiles
from molevo.descriptors import DescriptorVector, compute_descriptors
from molevo.molgraph import MolGraph, parse_smiles
from molevo.objectives import (FragmentTable, ModifierError, ScoreModifier, TaskSpecError,
                               UnknownTaskError, build_fragment_table, bundled_tasks, evaluate,
                               load_task, normalize_sa, qed, sa_normalized, sa_score,
                               task_from_dict)
from molevo.objectives.qed import qed_from_descriptors
from molevo.selfies_codec import SelfiesGenome, alphabet, decode

# Published asymmetric double sigmoid parameters (a, b, c, d, e, f, dmax).
ADS = {
    "mw": (2.817065973, 392.5754953, 290.7489764, 2.419764353, 49.22325677, 65.37051707, 104.9805561),
    "logp": (3.172690585, 137.8624751, 2.534937431, 4.581497897, 0.822739154, 0.576295591, 131.3186604),
    "hba": (2.948620388, 160.4605972, 3.615294657, 4.435986202, 0.290141953, 1.300669958, 148.7763046),
    "hbd": (1.618662227, 1010.051101, 0.985094388, 0.000000001, 0.713820843, 0.920922555, 258.1632616),
    "tpsa": (1.876861559, 125.2232657, 62.90773554, 87.83366614, 12.01999824, 28.51324732, 104.5686167),
    "rotatable_bonds": (0.010000000, 272.4121427, 2.558379970, 1.565547684, 1.271567166, 2.758063707, 105.4420403),
    "aromatic_rings": (3.217788970, 957.7374108, 2.274627939, 0.000000001, 1.317690384, 0.375760881, 312.3372610),
    "alerts": (0.010000000, 1199.094025, -0.09002883, 0.000000001, 0.185904477, 0.875193782, 417.7253140),
}


def hand_ads(x, a, b, c, d, e, f, dmax):
    left = 1 / (1 + np.exp(-(x - c + d / 2) / e))
    right = 1 - 1 / (1 + np.exp(-(x - c - d / 2) / f))
    return (a + b * left * right) / dmax


def hand_qed(desc: DescriptorVector) -> float:
    ds = [min(1.0, max(1e-6, hand_ads(getattr(desc, k), *p))) for k, p in ADS.items()]
    return float(np.exp(np.mean(np.log(ds))))


# ------------------------------------------------------------------ QED


def test_qed_benzene_matches_hand_evaluation():
    g = parse_smiles("c1ccccc1")
    assert qed(g) == pytest.approx(hand_qed(compute_descriptors(g)), abs=1e-3)


@pytest.mark.parametrize("smi", ["CC(=O)Oc1ccccc1C(=O)O", "CC(=O)Nc1ccc(O)cc1", "CCCCCCCCCC"])
def test_qed_matches_hand_evaluation(smi):
    g = parse_smiles(smi)
    assert qed(g) == pytest.approx(hand_qed(compute_descriptors(g)), abs=1e-9)


def test_qed_empty_and_identity():
    assert qed(MolGraph([], [])) == 0.0
    assert math.exp(np.mean(np.log([1.0] * 8))) == 1.0


@given(st.integers(0, 6))
def test_qed_monotone_in_alerts(extra):
    base = compute_descriptors(parse_smiles("CC(=O)Nc1ccc(O)cc1"))
    a = DescriptorVector(**{**base.as_dict(), "alerts": extra})
    b = DescriptorVector(**{**base.as_dict(), "alerts": extra + 1})
    assert qed_from_descriptors(b) <= qed_from_descriptors(a)


# ------------------------------------------------------------------ SA


def test_sa_empty():
    assert sa_score(MolGraph([], [])) == 10.0


@pytest.mark.xfail(strict=True, reason="ethane scores about 3.6 with a floor-valued environment; see ledger")
def test_sa_ethane_near_floor():
    assert 1.0 <= sa_score(parse_smiles("CC")) <= 2.5


def test_sa_spiro_tetracycle_above_ethane():
    tetra = parse_smiles("C1CCC2(C1)CCC1CC3CCC3C12")
    assert len(tetra) == 14
    assert sa_score(tetra) > sa_score(parse_smiles("CC"))


def test_sa_orders_simple_below_complex():
    assert sa_score(parse_smiles("c1ccccc1")) < sa_score(parse_smiles("CC(=O)Oc1ccccc1C(=O)O"))
    cobi = load_task("cobimetinib").target_smiles
    assert sa_score(parse_smiles("CC(=O)Nc1ccc(O)cc1")) < sa_score(parse_smiles(cobi))


def test_sa_normalization():
    assert normalize_sa(1.0) == 1.0
    assert normalize_sa(10.0) == 0.0
    assert normalize_sa(5.5) == pytest.approx(0.5)


@given(st.integers(0, 10**6))
def test_sa_range(idx):
    c = corpus_smiles()
    g = parse_smiles(c[idx % len(c)])
    s = sa_score(g)
    assert 1.0 <= s <= 10.0
    assert sa_normalized(g) == pytest.approx((10 - s) / 9)


def test_fragment_table_round_trip(tmp_path):
    graphs = [parse_smiles(s) for s in corpus_smiles()[:200]]
    table = build_fragment_table(graphs)
    path = tmp_path / "t.tsv"
    table.write(path)
    back = FragmentTable.read(path)
    assert len(back) == len(table) and back.floor == table.floor
    k = next(iter(table.scores))
    assert back[k] == pytest.approx(table[k], abs=1e-6)
    assert back[-1] == table.floor


# ------------------------------------------------------------------ modifiers


def test_modifiers():
    assert ScoreModifier("gaussian", (3.0, 1.0))(3.0) == 1.0
    assert ScoreModifier("min_gaussian", (3.0, 1.0))(1.0) == 1.0
    assert ScoreModifier("min_gaussian", (3.0, 1.0))(4.0) == pytest.approx(math.exp(-0.5))
    assert ScoreModifier("max_gaussian", (3.0, 1.0))(5.0) == 1.0
    assert ScoreModifier("thresholded_linear", (0.5,))(0.25) == 0.5
    assert ScoreModifier("thresholded_linear", (0.5,))(0.9) == 1.0
    assert ScoreModifier("ramp", (3.0, 5.0))(4.0) == 0.5
    assert ScoreModifier("trapezoid", (0, 1, 2, 3))(2.5) == 0.5
    assert ScoreModifier()(float("nan")) == 0.0
    with pytest.raises(ModifierError):
        ScoreModifier("gaussian", (1.0, 0.0))
    with pytest.raises(ModifierError):
        ScoreModifier.from_dict({"kind": "nope"})
    m = ScoreModifier("trapezoid", (0, 1, 2, 3))
    assert ScoreModifier.from_dict(m.to_dict()) == m


@given(st.sampled_from([("gaussian", (2.0, 0.5)), ("min_gaussian", (1.0, 2.0)),
                        ("max_gaussian", (3.0, 1.0)), ("thresholded_linear", (0.7,)),
                        ("ramp", (5.0, 1.0)), ("trapezoid", (1, 2, 3, 4)), ("identity", ())]),
       st.floats(-1e6, 1e6, allow_nan=False))
def test_modifier_range(spec, x):
    assert 0.0 <= ScoreModifier(*spec)(x) <= 1.0


# ------------------------------------------------------------------ tasks


def test_task_dimensions():
    assert len(bundled_tasks()) == 5
    cobi = load_task("Cobimetinib")
    assert cobi.m == 7
    assert cobi.labels == ("QED", "SA", "FCFP4", "ECFP6", "RTB", "AR", "CNS")
    pio = load_task("pioglitazone")
    assert pio.m == 5 and pio.labels[:3] == ("QED", "SA", "FCFP4")
    with pytest.raises(UnknownTaskError):
        load_task("NoSuchDrug")


def test_malformed_task():
    with pytest.raises(TaskSpecError):
        task_from_dict({"name": "x", "components": [{"source": "magic"}]})


@pytest.mark.parametrize("name", ["cobimetinib", "pioglitazone", "fexofenadine", "osimertinib", "ranolazine"])
def test_target_self_similarity(name):
    task = load_task(name)
    g = parse_smiles(task.target_smiles)
    cache = {}
    for c in task.components:
        if c.source == "similarity":
            assert c.raw(g, cache) == 1.0


def test_evaluate_empty_and_isomorphic():
    task = load_task("cobimetinib")
    v = evaluate(MolGraph([], []), task)
    assert len(v) == task.m and v[0] == 0.0
    a = evaluate(parse_smiles("CC(=O)Nc1ccc(O)cc1"), task)
    b = evaluate(parse_smiles("c1cc(O)ccc1NC(C)=O"), task)
    assert a == b


def test_evaluate_range_on_random_molecules():
    tokens = alphabet()
    rng = np.random.default_rng(3)
    tasks = [load_task(n) for n in bundled_tasks()]
    seen = 0
    while seen < 10_000:
        n = int(rng.integers(1, 40))
        g = decode(SelfiesGenome(tuple(tokens[i] for i in rng.integers(0, len(tokens), n))))
        if not len(g):
            continue
        v = evaluate(g, tasks[seen % len(tasks)])
        assert all(0.0 <= x <= 1.0 and math.isfinite(x) for x in v)
        seen += 1


def test_evaluate_pure():
    task = load_task("ranolazine")
    g = parse_smiles(corpus_smiles()[5])
    assert evaluate(g, task) == evaluate(g, task)
