"""Genetic operators on SELFIES genomes."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from ..selfies_codec import SelfiesGenome, SelfiesToken

MUTATION_KINDS = ("insert", "delete", "substitute")


def one_point_crossover(a: SelfiesGenome, b: SelfiesGenome, rng: np.random.Generator,
                        max_length: int = 100, cuts: tuple[int, int] | None = None
                        ) -> tuple[SelfiesGenome, SelfiesGenome]:
    """Children prefix(a)+suffix(b) and prefix(b)+suffix(a), cut points independent."""
    ta, tb = a.tokens, b.tokens
    if cuts is None:
        cuts = (int(rng.integers(0, len(ta) + 1)), int(rng.integers(0, len(tb) + 1)))
    ca, cb = cuts
    c1 = (ta[:ca] + tb[cb:])[:max_length]
    c2 = (tb[:cb] + ta[ca:])[:max_length]
    return SelfiesGenome(c1), SelfiesGenome(c2)


def mutate(g: SelfiesGenome, rng: np.random.Generator, alphabet: Sequence[SelfiesToken],
           rate: float = 0.8, max_length: int = 100) -> SelfiesGenome:
    """With probability ``rate`` insert, delete or substitute one token at a uniform position."""
    if not alphabet:
        raise ValueError("mutation alphabet is empty")
    if rate <= 0 or rng.random() >= rate:
        return g
    tokens = list(g.tokens)
    kind = MUTATION_KINDS[int(rng.integers(0, 3))]
    if not tokens:
        kind = "insert"
    elif kind == "delete" and len(tokens) == 1:
        kind = "substitute"
    if kind == "insert":
        pos = int(rng.integers(0, len(tokens) + 1))
        tokens.insert(pos, alphabet[int(rng.integers(0, len(alphabet)))])
    elif kind == "delete":
        del tokens[int(rng.integers(0, len(tokens)))]
    else:
        pos = int(rng.integers(0, len(tokens)))
        tokens[pos] = alphabet[int(rng.integers(0, len(alphabet)))]
    return SelfiesGenome(tuple(tokens[:max_length]))
