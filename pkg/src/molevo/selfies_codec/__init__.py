"""SELFIES tokenization, total decoding and encoding."""
from .codec import decode, encode
from .tokens import (AlphabetConfig, SelfiesError, SelfiesGenome, SelfiesToken,
                     UnknownSymbolError, alphabet, parse_symbol, tokenize)

__all__ = ["AlphabetConfig", "SelfiesError", "SelfiesGenome", "SelfiesToken",
           "UnknownSymbolError", "alphabet", "decode", "encode", "parse_symbol", "tokenize"]
