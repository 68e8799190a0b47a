import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import corpus_smiles
from molevo.fingerprints import (FingerprintMismatch, atom_pair_fingerprint, circular_fingerprint,
                                 fingerprint, morgan_ids, tanimoto)
from molevo.molgraph import parse_smiles


def np_tanimoto(a, b):
    x, y = a.to_array().astype(bool), b.to_array().astype(bool)
    u = np.logical_or(x, y).sum()
    return 1.0 if u == 0 else np.logical_and(x, y).sum() / u


def test_environment_counts_match_morgan():
    # Morgan radius-2 environments: benzene 3, ethanol 6, methane 1
    assert circular_fingerprint(parse_smiles("c1ccccc1")).popcount == 3
    assert circular_fingerprint(parse_smiles("CCO")).popcount == 6
    assert circular_fingerprint(parse_smiles("C")).popcount == 1


def test_radius_grows_bits():
    g = parse_smiles("CC(=O)Oc1ccccc1C(=O)O")
    sizes = [circular_fingerprint(g, radius=r).popcount for r in range(4)]
    assert sizes == sorted(sizes)
    assert len(morgan_ids(g, 2)) >= sizes[2]


def test_fcfp_coarser_than_ecfp():
    a, b = parse_smiles("c1ccccc1Cl"), parse_smiles("c1ccccc1Br")
    assert tanimoto(fingerprint(a, "fcfp"), fingerprint(b, "fcfp")) == 1.0
    assert tanimoto(fingerprint(a, "ecfp"), fingerprint(b, "ecfp")) < 1.0


def test_mismatch():
    g = parse_smiles("CCO")
    with pytest.raises(FingerprintMismatch):
        tanimoto(fingerprint(g, "ecfp"), fingerprint(g, "fcfp"))
    with pytest.raises(ValueError):
        circular_fingerprint(g, kind="xyz")


def test_atom_pair():
    ap = atom_pair_fingerprint(parse_smiles("CCO"))
    assert ap.popcount == 3  # three distinct (type, distance, type) pairs
    assert atom_pair_fingerprint(parse_smiles("C")).popcount == 0


def test_empty_pair_is_one():
    e = atom_pair_fingerprint(parse_smiles("C"))
    assert tanimoto(e, e) == 1.0


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.sampled_from(["ecfp", "fcfp", "ap"]))
def test_tanimoto_properties(i, j, kind):
    c = corpus_smiles()
    a = fingerprint(parse_smiles(c[i % len(c)]), kind)
    b = fingerprint(parse_smiles(c[j % len(c)]), kind)
    t = tanimoto(a, b)
    assert 0.0 <= t <= 1.0
    assert t == tanimoto(b, a)
    assert tanimoto(a, a) == 1.0
    assert t == pytest.approx(np_tanimoto(a, b), abs=1e-12)


def test_deterministic():
    g = parse_smiles("CC(=O)Nc1ccc(O)cc1")
    assert circular_fingerprint(g).bits == circular_fingerprint(parse_smiles("c1cc(O)ccc1NC(C)=O")).bits
