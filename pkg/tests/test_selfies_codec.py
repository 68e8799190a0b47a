import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import isomorphic
from molevo.molgraph import parse_smiles, perceive
from molevo.molgraph.elements import UnsupportedFeatureError
from molevo.selfies_codec import (AlphabetConfig, SelfiesError, SelfiesGenome, UnknownSymbolError,
                                  alphabet, decode, encode, tokenize)

ALPHABET = alphabet()
genomes = st.lists(st.sampled_from(ALPHABET), max_size=60).map(lambda t: SelfiesGenome(tuple(t)))


def test_tokenize_partitions():
    g = tokenize("[C][O]")
    assert len(g) == 2 and [t.text for t in g] == ["[C]", "[O]"]
    assert len(tokenize("")) == 0


def test_tokenize_errors():
    with pytest.raises(SelfiesError):
        tokenize("[C][=C")
    with pytest.raises(UnknownSymbolError):
        tokenize("[C][Xx]")


def test_decode_ethane():
    g = decode("[C][C]")
    assert [a.element for a in g.atoms] == ["C", "C"]
    assert [(b.a, b.b, b.order) for b in g.bonds] == [(0, 1, 1)]
    assert sum(a.hydrogens for a in g.atoms) == 6


def test_decode_empty():
    assert len(decode(SelfiesGenome())) == 0


def test_decode_clamps_oxygen():
    g = decode("[O][=O][=O]")
    assert len(g) == 2 and g.bonds[0].order == 2
    assert all(a.hydrogens == 0 for a in g.atoms)


def test_encode_round_trip_small():
    for smi in ["CC", "c1ccccc1", "CC(=O)Oc1ccccc1C(=O)O", "C1CC2CCC1CC2", "C[N+](C)(C)[O-]",
                "NS(=O)(=O)c1ccccc1", "C12C3C4C1C5C2C3C45"]:
        m = parse_smiles(smi)
        assert isomorphic(decode(encode(m)), m), smi


def test_benzene_genome_has_ring_token():
    genome = encode(parse_smiles("c1ccccc1"))
    assert any(t.kind == "ring" for t in genome)
    back = decode(genome)
    assert len(back.rings) == 1 and all(a.aromatic for a in back.atoms)


def test_encode_unsupported_element():
    with pytest.raises(UnsupportedFeatureError):
        encode(parse_smiles("C[Si](C)(C)C"))


def test_encode_largest_fragment():
    g = decode(encode(parse_smiles("CCO.[Cl-]")))
    assert sorted(a.element for a in g.atoms) == ["C", "C", "O"]


def test_alphabet_examples():
    small = alphabet(AlphabetConfig(elements=("C",), bond_orders=(1, 2, 3)))
    assert {"[C]", "[=C]", "[#C]"} <= {t.text for t in small}
    kinds = {t.kind for t in ALPHABET}
    assert {"branch", "ring", "atom"} <= kinds
    assert alphabet() == alphabet()


@given(genomes)
def test_decode_total_and_valence_valid(genome):
    g = decode(genome)
    assert g.is_valence_valid()


@given(genomes, st.integers(min_value=0, max_value=60))
def test_prefix_decodes(genome, cut):
    assert decode(genome[:cut]).is_valence_valid()


def test_random_genome_sweep():
    rng = np.random.default_rng(1)
    for _ in range(2000):
        n = int(rng.integers(0, 61))
        g = SelfiesGenome(tuple(ALPHABET[i] for i in rng.integers(0, len(ALPHABET), n)))
        assert decode(g).is_valence_valid()


@pytest.mark.parametrize("n", range(0, 200, 7))
def test_corpus_sample_round_trip(corpus, n):
    m = parse_smiles(corpus[n * 37 % len(corpus)])
    assert isomorphic(perceive(decode(encode(m))), m)
