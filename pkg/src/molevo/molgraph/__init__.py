"""Molecular graphs: SMILES I/O, rings, aromaticity, canonical keys and patterns."""
from .canon import canonical_key, canonical_ranks, canonical_smiles, symmetry_classes
from .elements import UnsupportedFeatureError
from .graph import AROMATIC, Atom, Bond, MolGraph
from .pattern import Pattern, PatternError, compile_pattern, match_pattern
from .perception import perceive
from .rings import sssr
from .smiles import SmilesError, ValenceError, parse_smiles, write_smiles

__all__ = [
    "AROMATIC", "Atom", "Bond", "MolGraph", "Pattern", "PatternError", "SmilesError",
    "UnsupportedFeatureError", "ValenceError", "canonical_key", "canonical_ranks",
    "canonical_smiles", "compile_pattern", "match_pattern", "parse_smiles", "perceive",
    "symmetry_classes",
    "sssr", "write_smiles",
]
