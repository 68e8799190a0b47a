"""SELFIES derivation (decode) and DFS-based encoding."""
from __future__ import annotations

import logging
import sys
from typing import Iterator

from ..molgraph.canon import canonical_ranks
from ..molgraph.elements import (UnsupportedFeatureError, capacity, implicit_hydrogens,
                                 max_valence)
from ..molgraph.graph import Atom, Bond, MolGraph
from ..molgraph.perception import perceive
from .tokens import (BOND_PREFIX, INDEX_BASE, SelfiesGenome, SelfiesToken, atom_symbol,
                     index_symbols, index_value, parse_symbol, tokenize)

log = logging.getLogger(__name__)


def _atom_capacity(tok: SelfiesToken) -> int:
    cap = min(capacity(tok.element, tok.charge), max_valence(tok.element, tok.charge))
    return max(cap - (tok.hydrogens or 0), 0)


class _Derivation:
    """Mutable state of one decode call."""

    def __init__(self):
        self.atoms: list[SelfiesToken] = []
        self.caps: list[int] = []
        self.bond_sum: list[int] = []
        self.bonds: dict[tuple[int, int], int] = {}
        self.rings: list[tuple[int, int, int]] = []

    def add_atom(self, tok: SelfiesToken) -> int:
        self.atoms.append(tok)
        self.caps.append(_atom_capacity(tok))
        self.bond_sum.append(0)
        return len(self.atoms) - 1

    def add_bond(self, a: int, b: int, order: int) -> None:
        key = (a, b) if a < b else (b, a)
        self.bonds[key] = self.bonds.get(key, 0) + order
        self.bond_sum[a] += order
        self.bond_sum[b] += order

    def derive(self, it: Iterator[SelfiesToken], max_derive: float,
               state: int | None, prev: int | None) -> int:
        """Consume up to ``max_derive`` symbols; ``state`` is the free capacity of ``prev``.

        ``state`` None means no atom has been placed yet in this fragment.
        Returns the number of symbols consumed.
        """
        n = 0
        while n < max_derive and state != 0:
            tok = next(it, None)
            if tok is None:
                break
            n += 1
            if tok.kind == "branch":
                if state is None or state <= 1:
                    continue
                binit = min(state - 1, tok.order)
                q = index_value([next(it, None) for _ in range(tok.size)])
                n += tok.size + self.derive(it, q + 1, binit, prev)
                state -= binit
            elif tok.kind == "ring":
                if state is None:
                    continue
                order = min(tok.order, state)
                q = index_value([next(it, None) for _ in range(tok.size)])
                n += tok.size
                self.rings.append((max(0, prev - (q + 1)), prev, order))
                state -= order
            elif tok.kind == "atom":
                cap = _atom_capacity(tok)
                if state is None:
                    prev = self.add_atom(tok)
                    state = cap
                    continue
                order = min(tok.order, state, cap)
                if order == 0:
                    continue
                new = self.add_atom(tok)
                self.add_bond(prev, new, order)
                prev, state = new, cap - order
            # nop / stray dot tokens are skipped
        while n < max_derive:
            if next(it, None) is None:
                break
            n += 1
        return n

    def close_rings(self) -> None:
        for left, right, order in self.rings:
            if left == right:
                continue
            free = min(self.caps[left] - self.bond_sum[left],
                       self.caps[right] - self.bond_sum[right])
            if free <= 0:
                continue
            order = min(order, free)
            key = (left, right) if left < right else (right, left)
            old = self.bonds.get(key, 0)
            if old:
                order = min(old + order, 3) - old
                if order <= 0:
                    continue
            self.add_bond(left, right, order)

    def graph(self) -> MolGraph:
        atoms = []
        for tok, s in zip(self.atoms, self.bond_sum):
            h = tok.hydrogens if tok.hydrogens is not None else \
                implicit_hydrogens(tok.element, tok.charge, s)
            atoms.append(Atom(tok.element, tok.charge, h))
        bonds = [Bond(a, b, order) for (a, b), order in sorted(self.bonds.items())]
        return perceive(MolGraph(atoms, bonds))


def decode(genome: SelfiesGenome | str) -> MolGraph:
    """Derive a valence-valid graph from any token sequence (total function)."""
    if isinstance(genome, str):
        genome = tokenize(genome)
    tokens = genome.tokens
    if sys.getrecursionlimit() < 3 * len(tokens) + 200:
        sys.setrecursionlimit(3 * len(tokens) + 200)
    d = _Derivation()
    fragment: list[SelfiesToken] = []
    for tok in list(tokens) + [None]:
        if tok is None or tok.kind == "dot":
            if fragment:
                d.derive(iter(fragment), float("inf"), None, None)
            fragment = []
        else:
            fragment.append(tok)
    d.close_rings()
    return d.graph()


def _index_size(value: int) -> int:
    for n in (1, 2, 3):
        if value < INDEX_BASE ** n:
            return n
    raise UnsupportedFeatureError(f"index {value} too large for three index symbols")


def encode(graph: MolGraph) -> SelfiesGenome:
    """Encode the largest fragment of ``graph`` so that decoding reproduces it."""
    if graph.is_empty:
        return SelfiesGenome()
    if len(graph.components()) > 1:
        log.info("encoding largest fragment only")
        graph = graph.largest_fragment()
    n = len(graph)
    atom_text = []
    for i, atom in enumerate(graph.atoms):
        el, q = atom.element, atom.charge
        if el == "H" or not -1 <= q <= 1:
            raise UnsupportedFeatureError(f"cannot encode atom {el}{q:+d}")
        s = graph.bond_order_sum(i)
        explicit = None if atom.hydrogens == implicit_hydrogens(el, q, s) else atom.hydrogens
        cap = min(capacity(el, q), max_valence(el, q)) - (explicit or 0)
        if s > cap:
            raise UnsupportedFeatureError(
                f"atom {i} ({el}{'' if q == 0 else f'{q:+d}'}) exceeds its SELFIES bonding capacity")
        atom_text.append((el, q, explicit))

    rank = canonical_ranks(graph)
    if sys.getrecursionlimit() < 4 * n + 200:
        sys.setrecursionlimit(4 * n + 200)

    children: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    closures: list[list[tuple[int, int]]] = [[] for _ in range(n)]  # (ancestor, bond)
    visited = [False] * n
    on_path: set[int] = set()
    done: set[int] = set()

    def discover(v: int, via: int | None) -> None:
        visited[v] = True
        on_path.add(v)
        for w, k in sorted(graph.adjacency[v], key=lambda wk: rank[wk[0]]):
            if k == via or k in done:
                continue
            done.add(k)
            if visited[w]:
                if w in on_path:
                    closures[v].append((w, k))
                continue
            children[v].append((w, k))
            discover(w, k)
        on_path.discard(v)

    start = min(range(n), key=lambda i: rank[i])
    discover(start, None)

    position = [-1] * n
    counter = [0]

    def emit(v: int, order: int) -> list[SelfiesToken]:
        position[v] = counter[0]
        counter[0] += 1
        el, q, h = atom_text[v]
        out = [parse_symbol(atom_symbol(el, q, order, h))]
        for u, k in sorted(closures[v], key=lambda uk: position[uk[0]]):
            gap = position[v] - position[u] - 1
            size = _index_size(gap)
            out.append(parse_symbol(f"[{BOND_PREFIX[graph.bonds[k].order]}Ring{size}]"))
            out.extend(index_symbols(gap, size))
        kids = children[v]
        for w, k in kids[:-1]:
            bond_order = graph.bonds[k].order
            sub = emit(w, bond_order)
            size = _index_size(len(sub) - 1)
            out.append(parse_symbol(f"[{BOND_PREFIX[bond_order]}Branch{size}]"))
            out.extend(index_symbols(len(sub) - 1, size))
            out.extend(sub)
        if kids:
            w, k = kids[-1]
            out.extend(emit(w, graph.bonds[k].order))
        return out

    return SelfiesGenome(tuple(emit(start, 1)))
