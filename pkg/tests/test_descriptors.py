import pytest

from molevo.descriptors import (alert_names, compute_descriptors, crippen_logp, hba, hbd,
                                molecular_weight, rotatable_bonds, tpsa)
from molevo.molgraph import parse_smiles

# Reference values from the RDKit implementations of the same published
# methods (Descriptors.MolWt, Crippen.MolLogP, TPSA, strict rotatable bonds,
# aromatic ring count).
GOLDEN = [
    # smiles, MW, logP, TPSA, RTB, AR
    ("C", 16.043, 0.6361, 0.0, 0, 0),
    ("c1ccccc1", 78.114, 1.6866, 0.0, 0, 1),
    ("CCO", 46.069, -0.0014, 20.23, 0, 0),
    ("COC", 46.069, 0.2626, 9.23, 0, 0),
    ("CC(=O)O", 60.052, 0.0909, 37.3, 0, 0),
    ("CC(=O)Oc1ccccc1C(=O)O", 180.159, 1.3101, 63.6, 3, 1),
    ("CC(=O)Nc1ccc(O)cc1", 151.165, 1.3506, 49.33, 1, 1),
    ("c1ccc2ccccc2c1", 128.174, 2.8398, 0.0, 0, 2),
    ("CCCC", 58.124, 1.8064, 0.0, 1, 0),
    ("CN(C)C", 59.112, 0.1778, 3.24, 0, 0),
]


@pytest.mark.parametrize("smi,mw,logp,psa,rtb,ar", GOLDEN)
def test_golden_descriptors(smi, mw, logp, psa, rtb, ar):
    d = compute_descriptors(parse_smiles(smi))
    assert d.mw == pytest.approx(mw, abs=0.01)
    assert d.logp == pytest.approx(logp, abs=0.01)
    assert d.tpsa == pytest.approx(psa, abs=0.01)
    assert d.rotatable_bonds == rtb
    assert d.aromatic_rings == ar


def test_donors_and_acceptors():
    assert hbd(parse_smiles("CCO")) == 1
    assert hbd(parse_smiles("CN")) == 2  # each H on N counts
    assert hba(parse_smiles("CCO")) == 1
    assert hba(parse_smiles("CC(=O)Nc1ccc(O)cc1")) == 2
    assert hba(parse_smiles("c1ccncc1")) == 1


def test_rotatable_amide_excluded():
    g = parse_smiles("CCNC(=O)CC")
    assert rotatable_bonds(g) == 2
    assert rotatable_bonds(g, exclude_amides=False) == 3


def test_weight_additivity():
    assert molecular_weight(parse_smiles("CC")) == pytest.approx(2 * 12.011 + 6 * 1.008, abs=1e-6)


def test_logp_monotone_in_chain_length():
    vals = [crippen_logp(parse_smiles("C" * n)) for n in range(2, 10)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_alerts():
    assert alert_names(parse_smiles("CCCC")) == []
    assert alert_names(parse_smiles("CC(=O)Oc1ccccc1C(=O)O"))
    assert tpsa(parse_smiles("CCCC")) == 0.0


def test_empty_graph():
    from molevo.molgraph import MolGraph
    d = compute_descriptors(MolGraph([], []))
    assert d.mw == 0 and d.heavy_atoms == 0 and d.rings == 0
