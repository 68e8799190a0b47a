"""Substructure patterns written in a SMARTS subset, and a backtracking matcher.

Atom primitives: element symbols (aliphatic upper case, aromatic lower case),
``*``, ``a``, ``A``, ``#n``, ``Hn`` (total H), ``Dn`` (heavy degree),
``Xn`` (total connections), ``R``/``R0``/``Rn`` (ring count), ``rn`` (in a
ring of size n), ``xn`` (ring bonds), ``vn`` (total valence) and charges.
Logic: ``!``, ``&`` (implicit), ``,`` and low-precedence ``;``.
Bond primitives: ``- = # : ~ @`` with the same logic operators; an omitted
bond means single or aromatic. Recursive SMARTS is not supported.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from .elements import atomic_number
from .graph import MolGraph
from .perception import perceive

AtomTest = Callable[[MolGraph, int], bool]
BondTest = Callable[[MolGraph, int], bool]


class PatternError(ValueError):
    pass


_ATOM_PRIM = re.compile(
    r"#\d+|Cl|Br|[CNOSPFIB]|[cnospb]|a|A|\*|H\d*|D\d*|X\d*|R\d*|r\d*|x\d*|v\d*"
    r"|\+\d+|-\d+|\++|-+|!|&|,|;")
_ELEMENTS = {"C", "N", "O", "S", "P", "F", "I", "B", "Cl", "Br"}


def _num(tok: str, default: int) -> int:
    digits = tok.lstrip("#HDXRrxv")
    return int(digits) if digits else default


def _atom_primitive(tok: str) -> AtomTest:
    if tok == "*":
        return lambda g, i: True
    if tok == "a":
        return lambda g, i: g.atoms[i].aromatic
    if tok == "A":
        return lambda g, i: not g.atoms[i].aromatic
    if tok in _ELEMENTS:
        return lambda g, i: g.atoms[i].element == tok and not g.atoms[i].aromatic
    if tok in {"c", "n", "o", "s", "p", "b"}:
        el = tok.upper()
        return lambda g, i: g.atoms[i].element == el and g.atoms[i].aromatic
    if tok[0] == "#":
        z = int(tok[1:])
        return lambda g, i: atomic_number(g.atoms[i].element) == z
    if tok[0] in "+-":
        sign = 1 if tok[0] == "+" else -1
        q = sign * (int(tok[1:]) if tok[1:].isdigit() else len(tok))
        return lambda g, i: g.atoms[i].charge == q
    head = tok[0]
    if head == "H":
        n = _num(tok, 1)
        return lambda g, i: g.atoms[i].hydrogens == n
    if head == "D":
        n = _num(tok, 1)
        return lambda g, i: g.degree(i) == n
    if head == "X":
        n = _num(tok, 1)
        return lambda g, i: g.degree(i) + g.atoms[i].hydrogens == n
    if head == "R":
        if len(tok) == 1:
            return lambda g, i: g.atoms[i].in_ring
        n = int(tok[1:])
        return lambda g, i: sum(i in r for r in g.rings) == n
    if head == "r":
        if len(tok) == 1:
            return lambda g, i: g.atoms[i].in_ring
        n = int(tok[1:])
        return lambda g, i: any(len(r) == n and i in r for r in g.rings)
    if head == "x":
        n = _num(tok, 1)
        return lambda g, i: sum(g.bonds[k].in_ring for _, k in g.adjacency[i]) == n
    if head == "v":
        n = _num(tok, 1)
        return lambda g, i: g.total_valence(i) == n
    raise PatternError(f"unknown atom primitive {tok!r}")


def _combine(tokens: list[str], prim: Callable[[str], Callable]) -> Callable:
    """Build a predicate from tokens honouring ! > & > , > ; precedence."""

    def split(seq, sep):
        parts, cur = [], []
        for t in seq:
            if t == sep:
                parts.append(cur)
                cur = []
            else:
                cur.append(t)
        parts.append(cur)
        return parts

    def and_low(seq):
        tests = [or_(p) for p in split(seq, ";")]
        if len(tests) == 1:
            return tests[0]
        return lambda g, i: all(t(g, i) for t in tests)

    def or_(seq):
        tests = [and_high(p) for p in split(seq, ",")]
        if len(tests) == 1:
            return tests[0]
        return lambda g, i: any(t(g, i) for t in tests)

    def and_high(seq):
        tests = []
        neg = False
        for t in seq:
            if t == "&":
                continue
            if t == "!":
                neg = not neg
                continue
            p = prim(t)
            tests.append((lambda p: (lambda g, i: not p(g, i)))(p) if neg else p)
            neg = False
        if neg or not tests:
            raise PatternError("empty or dangling expression")
        if len(tests) == 1:
            return tests[0]
        return lambda g, i: all(t(g, i) for t in tests)

    return and_low(tokens)


def _atom_expr(text: str) -> AtomTest:
    tokens, pos = [], 0
    while pos < len(text):
        m = _ATOM_PRIM.match(text, pos)
        if not m:
            raise PatternError(f"cannot parse atom expression {text!r}")
        tokens.append(m.group())
        pos = m.end()
    return _combine(tokens, _atom_primitive)


def _bond_primitive(tok: str) -> BondTest:
    tests = {
        "-": lambda g, k: g.bonds[k].order == 1 and not g.bonds[k].aromatic,
        "=": lambda g, k: g.bonds[k].order == 2 and not g.bonds[k].aromatic,
        "#": lambda g, k: g.bonds[k].order == 3,
        ":": lambda g, k: g.bonds[k].aromatic,
        "~": lambda g, k: True,
        "@": lambda g, k: g.bonds[k].in_ring,
    }
    if tok not in tests:
        raise PatternError(f"unknown bond primitive {tok!r}")
    return tests[tok]


def _default_bond(g: MolGraph, k: int) -> bool:
    b = g.bonds[k]
    return b.aromatic or b.order == 1


@dataclass(frozen=True)
class Pattern:
    smarts: str
    atoms: tuple[AtomTest, ...]
    edges: tuple[tuple[int, int, BondTest], ...]
    required: tuple[tuple[str, int], ...] = ()  # (element, minimum count) prefilter

    def __post_init__(self):
        object.__setattr__(self, "_cached_plan", self._build_plan())

    def _plan(self):
        return self._cached_plan

    def _build_plan(self):
        """Query visiting order: each atom after the first is tied to an earlier one."""
        n = len(self.atoms)
        adj: dict[int, list[tuple[int, BondTest]]] = {i: [] for i in range(n)}
        for a, b, t in self.edges:
            adj[a].append((b, t))
            adj[b].append((a, t))
        order, seen = [], set()
        for root in range(n):
            if root in seen:
                continue
            stack = [root]
            seen.add(root)
            while stack:
                v = stack.pop()
                order.append(v)
                for w, _ in reversed(adj[v]):
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
        return order, adj

    def matches(self, graph: MolGraph, unique: bool = True, limit: int | None = None) -> list[tuple[int, ...]]:
        """Embeddings as tuples of target atoms indexed by query atom.

        With ``unique`` only one embedding per distinct target atom set is kept.
        """
        graph = perceive(graph)
        if self.required:
            have: dict[str, int] = {}
            for a in graph.atoms:
                have[a.element] = have.get(a.element, 0) + 1
            if any(have.get(el, 0) < c for el, c in self.required):
                return []
        order, qadj = self._plan()
        pos = {q: p for p, q in enumerate(order)}
        n = len(order)
        mapping: dict[int, int] = {}
        used: set[int] = set()
        found: list[tuple[int, ...]] = []
        seen_sets: set[frozenset] = set()

        def consistent(q: int, t: int) -> bool:
            if t in used or not self.atoms[q](graph, t):
                return False
            for w, bt in qadj[q]:
                if w in mapping:
                    k = graph.bond_index(t, mapping[w])
                    if k is None or not bt(graph, k):
                        return False
            return True

        def extend(p: int) -> bool:
            if p == n:
                emb = tuple(mapping[q] for q in range(n))
                key = frozenset(emb)
                if not unique or key not in seen_sets:
                    seen_sets.add(key)
                    found.append(emb)
                return limit is not None and len(found) >= limit
            q = order[p]
            anchors = [mapping[w] for w, _ in qadj[q] if w in mapping and pos[w] < p]
            if anchors:
                cands = [j for j in graph.neighbors(anchors[0])]
            else:
                cands = range(len(graph))
            for t in cands:
                if consistent(q, t):
                    mapping[q] = t
                    used.add(t)
                    stop = extend(p + 1)
                    del mapping[q]
                    used.discard(t)
                    if stop:
                        return True
            return False

        if n:
            extend(0)
        return found

    def has_match(self, graph: MolGraph) -> bool:
        return bool(self.matches(graph, limit=1))

    def count(self, graph: MolGraph) -> int:
        """Number of distinct target atom sets matched."""
        return len(self.matches(graph))


_SMARTS_TOKEN = re.compile(
    r"(?P<bracket>\[[^\]]+\])|(?P<organic>Cl|Br|[CNOSPFIB*]|[cnospb]|a|A)"
    r"|(?P<bond>[-=#:~@!&,;]+)|(?P<open>\()|(?P<close>\))|(?P<ring>%\d\d|\d)|(?P<dot>\.)")


def _required_element(expr: str) -> str | None:
    """Element an atom expression insists on, if it is a plain conjunction led by one."""
    if any(c in expr for c in ",!;"):
        return None
    m = _ATOM_PRIM.match(expr)
    if not m:
        return None
    tok = m.group()
    if tok in _ELEMENTS:
        return tok
    if tok in {"c", "n", "o", "s", "p", "b"}:
        return tok.upper()
    return None


def compile_pattern(smarts: str) -> Pattern:
    """Compile a SMARTS-subset string."""
    atoms: list[AtomTest] = []
    edges: list[tuple[int, int, BondTest]] = []
    prev: int | None = None
    pending: BondTest | None = None
    stack: list[int] = []
    rings: dict[str, tuple[int, BondTest | None]] = {}
    required: dict[str, int] = {}
    pos = 0
    while pos < len(smarts):
        m = _SMARTS_TOKEN.match(smarts, pos)
        if not m:
            raise PatternError(f"unexpected character at {pos} in {smarts!r}")
        kind, tok = m.lastgroup, m.group()
        if kind in ("bracket", "organic"):
            el = _required_element(tok[1:-1] if kind == "bracket" else tok)
            if el:
                required[el] = required.get(el, 0) + 1
            atoms.append(_atom_expr(tok[1:-1] if kind == "bracket" else tok))
            idx = len(atoms) - 1
            if prev is not None:
                edges.append((prev, idx, pending or _default_bond))
            pending = None
            prev = idx
        elif kind == "bond":
            if prev is None:
                raise PatternError(f"bond without atom in {smarts!r}")
            pending = _combine(list(re.findall(r"[-=#:~@!&,;]", tok)), _bond_primitive)
        elif kind == "open":
            stack.append(prev)
        elif kind == "close":
            if not stack:
                raise PatternError(f"unbalanced ')' in {smarts!r}")
            prev = stack.pop()
        elif kind == "ring":
            label = tok.lstrip("%")
            if label in rings:
                other, bt = rings.pop(label)
                edges.append((other, prev, pending or bt or _default_bond))
            else:
                rings[label] = (prev, pending)
            pending = None
        else:
            prev = None
        pos = m.end()
    if rings or stack:
        raise PatternError(f"unclosed ring or branch in {smarts!r}")
    return Pattern(smarts, tuple(atoms), tuple(edges), tuple(sorted(required.items())))


def match_pattern(graph: MolGraph, pattern: Pattern | str) -> int:
    """Count distinct atom sets of ``graph`` matched by ``pattern``."""
    if isinstance(pattern, str):
        pattern = compile_pattern(pattern)
    return pattern.count(graph)
