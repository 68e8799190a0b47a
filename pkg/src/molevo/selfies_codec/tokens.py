"""SELFIES symbols, tokenization and the closed alphabet used by the variation operators."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .._data import load_json
from ..molgraph.elements import SUPPORTED_ELEMENTS, UnsupportedFeatureError, capacity

BOND_PREFIX = {1: "", 2: "=", 3: "#"}
_PREFIX_ORDER = {"": 1, "=": 2, "#": 3, "/": 1, "\\": 1}

_SYMBOL = re.compile(r"\[[^\[\]]*\]|\.")
_ATOM = re.compile(
    r"^\[(?P<bond>[=#/\\]?)(?P<el>[A-Z][a-z]?)(?P<chiral>@@?)?(?P<h>H\d+)?"
    r"(?P<charge>[+-]\d*)?\]$")
_BRANCH = re.compile(r"^\[(?P<bond>[=#]?)Branch(?P<n>[123])\]$")
_RING = re.compile(r"^\[(?P<bond>[=#]?)Ring(?P<n>[123])\]$")


class SelfiesError(ValueError):
    """Malformed SELFIES text."""


class UnknownSymbolError(SelfiesError):
    pass


@dataclass(frozen=True, slots=True)
class SelfiesToken:
    """One parsed SELFIES symbol.

    ``kind`` is one of ``atom``, ``branch``, ``ring``, ``dot`` or ``nop``.
    Every token may also serve as an index symbol when it follows a branch or
    ring token; its digit value is given by :func:`index_value`.
    """
    text: str
    kind: str
    order: int = 1          # bond order requested (atom / branch / ring)
    element: str = ""
    charge: int = 0
    hydrogens: int | None = None
    size: int = 0           # number of index symbols read by branch / ring

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class SelfiesGenome:
    """Immutable token sequence; the genotype evolved by the engines."""
    tokens: tuple[SelfiesToken, ...] = ()

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return SelfiesGenome(self.tokens[item])
        return self.tokens[item]

    def __add__(self, other: "SelfiesGenome") -> "SelfiesGenome":
        return SelfiesGenome(self.tokens + other.tokens)

    @property
    def length(self) -> int:
        return len(self.tokens)

    def to_string(self) -> str:
        return "".join(t.text for t in self.tokens)

    __str__ = to_string

    @classmethod
    def from_string(cls, text: str) -> "SelfiesGenome":
        return tokenize(text)


def _parse_charge(text: str | None) -> int:
    if not text:
        return 0
    sign = 1 if text[0] == "+" else -1
    return sign * (int(text[1:]) if len(text) > 1 else 1)


_CACHE: dict[str, SelfiesToken] = {}


def parse_symbol(text: str) -> SelfiesToken:
    """Parse one bracketed symbol (or ``.``) into a token."""
    tok = _CACHE.get(text)
    if tok is not None:
        return tok
    if text == ".":
        tok = SelfiesToken(text, "dot")
    elif text in ("[nop]", "[epsilon]"):
        tok = SelfiesToken(text, "nop")
    elif m := _BRANCH.match(text):
        tok = SelfiesToken(text, "branch", order=_PREFIX_ORDER[m["bond"]], size=int(m["n"]))
    elif m := _RING.match(text):
        tok = SelfiesToken(text, "ring", order=_PREFIX_ORDER[m["bond"]], size=int(m["n"]))
    elif m := _ATOM.match(text):
        el = m["el"]
        q = _parse_charge(m["charge"])
        if el not in SUPPORTED_ELEMENTS or el == "H" or not -1 <= q <= 1:
            raise UnknownSymbolError(f"unknown SELFIES symbol {text}")
        try:
            capacity(el, q)
        except UnsupportedFeatureError:
            raise UnknownSymbolError(f"unknown SELFIES symbol {text}") from None
        h = int(m["h"][1:]) if m["h"] else None
        tok = SelfiesToken(text, "atom", order=_PREFIX_ORDER[m["bond"]], element=el,
                           charge=q, hydrogens=h)
    else:
        raise UnknownSymbolError(f"unknown SELFIES symbol {text}")
    _CACHE[text] = tok
    return tok


def tokenize(text: str) -> SelfiesGenome:
    """Split SELFIES text into tokens; rejects malformed brackets and unknown symbols."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _SYMBOL.match(text, pos)
        if not m:
            raise SelfiesError(f"malformed bracket at position {pos} in {text!r}")
        tokens.append(parse_symbol(m.group()))
        pos = m.end()
    return SelfiesGenome(tuple(tokens))


def atom_symbol(element: str, charge: int = 0, order: int = 1,
                hydrogens: int | None = None) -> str:
    htext = f"H{hydrogens}" if hydrogens is not None else ""
    qtext = "" if charge == 0 else f"{charge:+d}"
    return f"[{BOND_PREFIX[order]}{element}{htext}{qtext}]"


def _index_table() -> dict[str, int]:
    symbols = load_json("selfies_index.json")["index_symbols"]
    return {sym: i for i, sym in enumerate(symbols)}


INDEX_BASE = 16


def index_value(tokens: Sequence[SelfiesToken | None]) -> int:
    """Read a base-16 number from index symbols, most significant first."""
    table = _index_table()
    value = 0
    for tok in tokens:
        value = value * INDEX_BASE + (table.get(tok.text, 0) if tok is not None else 0)
    return value


def index_symbols(value: int, n: int) -> list[SelfiesToken]:
    """Inverse of :func:`index_value` using exactly ``n`` symbols."""
    if not 0 <= value < INDEX_BASE ** n:
        raise ValueError(f"{value} does not fit in {n} index symbols")
    symbols = load_json("selfies_index.json")["index_symbols"]
    digits = []
    for _ in range(n):
        value, d = divmod(value, INDEX_BASE)
        digits.append(parse_symbol(symbols[d]))
    return digits[::-1]


@dataclass(frozen=True)
class AlphabetConfig:
    """Which symbols the variation operators may insert or substitute."""
    elements: tuple[str, ...] = ("C", "N", "O", "S", "F", "Cl", "Br")
    charged: tuple[tuple[str, int], ...] = ()
    bond_orders: tuple[int, ...] = (1, 2, 3)
    branch_sizes: tuple[int, ...] = (1, 2, 3)
    ring_sizes: tuple[int, ...] = (1, 2, 3)

    @classmethod
    def default(cls) -> "AlphabetConfig":
        d = load_json("selfies_index.json")["default_alphabet"]
        return cls(tuple(d["elements"]), tuple((e, int(q)) for e, q in d["charged"]),
                   tuple(d["bond_orders"]), tuple(d["branch_sizes"]), tuple(d["ring_sizes"]))


def alphabet(config: AlphabetConfig | None = None) -> tuple[SelfiesToken, ...]:
    """Closed, sorted symbol set for mutation and insertion.

    Atom symbols are generated for every requested bond order the atom can
    actually carry; branch and ring symbols for every size and order.
    """
    config = config or AlphabetConfig.default()
    texts: set[str] = set()
    atoms: list[tuple[str, int]] = [(e, 0) for e in config.elements] + list(config.charged)
    for el, q in atoms:
        cap = capacity(el, q)
        for order in config.bond_orders:
            if order <= cap:
                texts.add(atom_symbol(el, q, order))
    for n in config.branch_sizes:
        for order in config.bond_orders:
            texts.add(f"[{BOND_PREFIX[order]}Branch{n}]")
    for n in config.ring_sizes:
        for order in config.bond_orders:
            texts.add(f"[{BOND_PREFIX[order]}Ring{n}]")
    return tuple(parse_symbol(t) for t in sorted(texts))
