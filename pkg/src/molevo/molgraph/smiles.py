"""SMILES reading and writing for the supported feature subset.

Supported: organic-subset and bracket atoms for H, B, C, N, O, F, P, S, Cl,
Br, I with integer charges; explicit H counts; bonds ``- = # :``; branches;
ring closures (including ``%nn`` and closures across ``.``). Stereo marks
(``@``, ``/``, ``\\``) are read and discarded. Isotopes, wildcards and
quadruple bonds raise :class:`UnsupportedFeatureError`.
"""
from __future__ import annotations

import logging
import re
import sys
from typing import Sequence

from .elements import (SUPPORTED_ELEMENTS, UnsupportedFeatureError, allowed_valences,
                       implicit_hydrogens, max_valence)
from .graph import Atom, Bond, MolGraph
from .perception import perceive

log = logging.getLogger(__name__)

ORGANIC = frozenset({"B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"})
AROMATIC_ORGANIC = frozenset({"b", "c", "n", "o", "p", "s"})

_TOKEN = re.compile(
    r"(?P<bracket>\[[^\]]*\])|(?P<organic>Cl|Br|[BCNOPSFI])|(?P<arom>[bcnops])"
    r"|(?P<bond>[-=#$:/\\])|(?P<open>\()|(?P<close>\))|(?P<ring>%\d\d|\d)|(?P<dot>\.)")
_BRACKET = re.compile(
    r"^\[(?P<iso>\d+)?(?P<el>[A-Z][a-z]?|[a-z]{1,2})(?P<chiral>@[A-Z]{2}\d+|@@?)?"
    r"(?P<h>H\d*)?(?P<charge>[+-]+\d*)?(?::\d+)?\]$")


class SmilesError(ValueError):
    """Malformed SMILES; ``position`` is the 0-based character offset."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class ValenceError(ValueError):
    """An atom exceeds every allowed valence, or aromatic bonds cannot be kekulized."""


def _parse_charge(text: str | None) -> int:
    if not text:
        return 0
    sign = 1 if text[0] == "+" else -1
    rest = text[1:]
    if not rest:
        return sign
    if rest.isdigit():
        return sign * int(rest)
    if set(rest) == {text[0]}:
        return sign * (len(rest) + 1)
    raise SmilesError(f"bad charge {text!r}")


def _parse_bracket(text: str, pos: int) -> dict:
    m = _BRACKET.match(text)
    if not m:
        raise SmilesError(f"malformed bracket atom {text}", pos)
    if m.group("iso"):
        raise UnsupportedFeatureError(f"isotopes are not supported: {text}")
    el = m.group("el")
    aromatic = el[0].islower()
    if aromatic:
        if el not in AROMATIC_ORGANIC:
            raise UnsupportedFeatureError(f"unsupported aromatic atom {text}")
        el = el.upper()
    elif el not in SUPPORTED_ELEMENTS:
        # "[Ho]" style two-letter symbols only; "[Hg]" etc. rejected here
        raise UnsupportedFeatureError(f"unsupported element {el} in {text}")
    if m.group("chiral"):
        log.warning("stereo mark ignored in %s", text)
    h = m.group("h")
    hcount = 0 if not h else (int(h[1:]) if len(h) > 1 else 1)
    return {"element": el, "charge": _parse_charge(m.group("charge")),
            "aromatic": aromatic, "hcount": hcount}


def _kekule_matching(needy: list[int], links: dict[int, list[tuple[int, int]]]) -> list[int] | None:
    """Perfect matching on the needy atoms along aromatic bonds (backtracking)."""
    unmatched = set(needy)
    chosen: list[int] = []

    def solve() -> bool:
        if not unmatched:
            return True
        best, best_opts = -1, None
        for a in sorted(unmatched):
            opts = [(j, k) for j, k in links.get(a, ()) if j in unmatched]
            if not opts:
                return False
            if best_opts is None or len(opts) < len(best_opts):
                best, best_opts = a, opts
        unmatched.discard(best)
        for j, k in best_opts:
            unmatched.discard(j)
            chosen.append(k)
            if solve():
                return True
            chosen.pop()
            unmatched.add(j)
        unmatched.add(best)
        return False

    return chosen if solve() else None


def parse_smiles(text: str) -> MolGraph:
    """Parse SMILES into a perceived, valence-checked :class:`MolGraph`."""
    text = text.strip()
    atoms: list[dict] = []
    bonds: list[list] = []  # [a, b, symbol]
    bonded: set[tuple[int, int]] = set()
    prev: int | None = None
    pending: str | None = None
    branch_stack: list[int] = []
    rings: dict[str, tuple[int, str, int]] = {}

    def add_bond(a: int, b: int, sym: str, pos: int) -> None:
        key = (min(a, b), max(a, b))
        if a == b or key in bonded:
            raise SmilesError("duplicate or self bond", pos)
        if sym == "$":
            raise UnsupportedFeatureError("quadruple bonds are not supported")
        bonded.add(key)
        bonds.append([a, b, sym])

    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SmilesError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        tok = m.group()
        if kind in ("bracket", "organic", "arom"):
            if kind == "bracket":
                spec = _parse_bracket(tok, pos)
            else:
                spec = {"element": tok.capitalize() if kind == "arom" else tok,
                        "charge": 0, "aromatic": kind == "arom", "hcount": None}
            atoms.append(spec)
            idx = len(atoms) - 1
            if prev is not None:
                add_bond(prev, idx, pending or "", pos)
            elif pending is not None:
                raise SmilesError("bond without a preceding atom", pos)
            pending = None
            prev = idx
        elif kind == "bond":
            if pending is not None or prev is None:
                raise SmilesError(f"misplaced bond {tok!r}", pos)
            if tok in "/\\":
                log.warning("directional bond %r treated as single", tok)
            pending = tok
        elif kind == "open":
            if prev is None or pending is not None:
                raise SmilesError("branch without a preceding atom", pos)
            branch_stack.append(prev)
        elif kind == "close":
            if not branch_stack or pending is not None:
                raise SmilesError("unbalanced ')'", pos)
            prev = branch_stack.pop()
        elif kind == "ring":
            if prev is None:
                raise SmilesError("ring closure without an atom", pos)
            label = tok.lstrip("%")
            if label in rings:
                other, sym0, _ = rings.pop(label)
                sym1 = pending or ""
                if sym0 and sym1 and sym0 != sym1:
                    raise SmilesError(f"conflicting bond symbols on ring bond {label}", pos)
                add_bond(other, prev, sym0 or sym1, pos)
            else:
                rings[label] = (prev, pending or "", pos)
            pending = None
        else:  # dot
            if pending is not None or branch_stack:
                raise SmilesError("misplaced '.'", pos)
            prev = None
        pos = m.end()

    if rings:
        label, (_, _, rpos) = min(rings.items(), key=lambda kv: kv[1][2])
        raise SmilesError(f"unclosed ring bond {label}", rpos)
    if branch_stack:
        raise SmilesError("unclosed branch '('", len(text))
    if pending is not None:
        raise SmilesError("dangling bond at end", len(text))
    return _assemble(atoms, bonds)


def _fold_explicit_hydrogens(atoms: list[dict], bonds: list[list]) -> tuple[list[dict], list[list]]:
    is_h = [a["element"] == "H" for a in atoms]
    if not any(is_h):
        return atoms, bonds
    nbrs: dict[int, list[int]] = {}
    for a, b, _ in bonds:
        nbrs.setdefault(a, []).append(b)
        nbrs.setdefault(b, []).append(a)
    for i, a in enumerate(atoms):
        if not is_h[i]:
            continue
        partners = nbrs.get(i, [])
        if a["charge"] != 0 or a["hcount"] or len(partners) != 1 or is_h[partners[0]]:
            raise UnsupportedFeatureError("explicit hydrogen atoms must be bonded to one heavy atom")
        heavy = atoms[partners[0]]
        heavy["hx"] = heavy.get("hx", 0) + 1
    remap, kept = {}, []
    for i, a in enumerate(atoms):
        if not is_h[i]:
            remap[i] = len(kept)
            kept.append(a)
    new_bonds = [[remap[a], remap[b], s] for a, b, s in bonds if a in remap and b in remap]
    return kept, new_bonds


def _assemble(atoms: list[dict], bonds: list[list]) -> MolGraph:
    atoms, bonds = _fold_explicit_hydrogens(atoms, bonds)
    n = len(atoms)
    resolved = []  # (a, b, order or None for aromatic)
    for a, b, sym in bonds:
        if sym == ":" or (sym == "" and atoms[a]["aromatic"] and atoms[b]["aromatic"]):
            resolved.append((a, b, None))
        else:
            resolved.append((a, b, {"": 1, "-": 1, "/": 1, "\\": 1, "=": 2, "#": 3}[sym]))

    fixed = [0] * n
    n_arom = [0] * n
    links: dict[int, list[tuple[int, int]]] = {}
    for k, (a, b, order) in enumerate(resolved):
        if order is None:
            n_arom[a] += 1
            n_arom[b] += 1
            links.setdefault(a, []).append((b, k))
            links.setdefault(b, []).append((a, k))
        else:
            fixed[a] += order
            fixed[b] += order

    needy = []
    for i, spec in enumerate(atoms):
        if not n_arom[i]:
            continue
        hx = (spec["hcount"] or 0) + spec.get("hx", 0)
        s = fixed[i] + n_arom[i] + hx
        vals = [v for v in allowed_valences(spec["element"], spec["charge"]) if v >= s]
        if not vals:
            raise ValenceError(f"atom {i} ({spec['element']}) exceeds its valence")
        if vals[0] - s >= 1:
            needy.append(i)
    arom_links = {i: [(j, k) for j, k in links.get(i, ()) if j in set(needy)] for i in needy}
    doubles = _kekule_matching(needy, arom_links) if needy else []
    if doubles is None:
        raise ValenceError("aromatic system cannot be kekulized")
    double_set = set(doubles)

    out_bonds = []
    bond_sum = list(fixed)
    for k, (a, b, order) in enumerate(resolved):
        if order is None:
            order = 2 if k in double_set else 1
            bond_sum[a] += order
            bond_sum[b] += order
        out_bonds.append(Bond(a, b, order))

    out_atoms = []
    for i, spec in enumerate(atoms):
        el, q = spec["element"], spec["charge"]
        hx = spec.get("hx", 0)
        if spec["hcount"] is None:
            if el not in ORGANIC:
                raise UnsupportedFeatureError(f"{el} must be written in brackets")
            if bond_sum[i] + hx > max_valence(el, q):
                raise ValenceError(f"atom {i} ({el}) exceeds its valence")
            h = hx + implicit_hydrogens(el, q, bond_sum[i] + hx)
        else:
            h = spec["hcount"] + hx
            if bond_sum[i] + h > max_valence(el, q):
                raise ValenceError(f"atom {i} ({el}) exceeds its valence")
        out_atoms.append(Atom(el, q, h))
    return perceive(MolGraph(out_atoms, out_bonds))


# --------------------------------------------------------------------------
# writing


def _charge_text(q: int) -> str:
    if q == 0:
        return ""
    sign = "+" if q > 0 else "-"
    return sign if abs(q) == 1 else f"{sign}{abs(q)}"


def _atom_text(graph: MolGraph, i: int) -> str:
    atom = graph.atoms[i]
    el, q, h = atom.element, atom.charge, atom.hydrogens
    sym = el.lower() if atom.aromatic else el
    bare = False
    if q == 0:
        if atom.aromatic and sym in AROMATIC_ORGANIC:
            fixed = n_arom = 0
            actual_needy = False
            for _, k in graph.adjacency[i]:
                b = graph.bonds[k]
                if b.aromatic:
                    n_arom += 1
                    actual_needy |= b.order == 2
                else:
                    fixed += b.order
            s = fixed + n_arom
            vals = [v for v in allowed_valences(el, q) if v >= s]
            needy = bool(vals) and n_arom > 0 and vals[0] - s >= 1
            bare = (needy == actual_needy
                    and implicit_hydrogens(el, q, s + int(needy)) == h)
        elif not atom.aromatic and el in ORGANIC:
            bare = implicit_hydrogens(el, q, graph.bond_order_sum(i)) == h
    if bare:
        return sym
    htext = "" if h == 0 else ("H" if h == 1 else f"H{h}")
    return f"[{sym}{htext}{_charge_text(q)}]"


def _bond_text(graph: MolGraph, k: int) -> str:
    bond = graph.bonds[k]
    if bond.aromatic:
        return ""
    if bond.order == 2:
        return "="
    if bond.order == 3:
        return "#"
    if graph.atoms[bond.a].aromatic and graph.atoms[bond.b].aromatic:
        return "-"
    return ""


def _ring_label(d: int) -> str:
    return str(d) if d < 10 else f"%{d}"


def _write_component(graph: MolGraph, start: int, rank: Sequence[int], visited: list[bool]) -> str:
    children: dict[int, list[tuple[int, int]]] = {}
    closures: dict[int, list[tuple[int, int, bool]]] = {}  # atom -> (bond, other, opens)
    on_path = set()
    done_edges = set()

    def discover(v: int, via: int | None) -> None:
        visited[v] = True
        on_path.add(v)
        children[v] = []
        for w, k in sorted(graph.adjacency[v], key=lambda wk: rank[wk[0]]):
            if k == via or k in done_edges:
                continue
            if visited[w]:
                if w in on_path:
                    # back edge to an ancestor: ring closure
                    done_edges.add(k)
                    closures.setdefault(w, []).append((k, v, True))
                    closures.setdefault(v, []).append((k, w, False))
                continue
            done_edges.add(k)
            children[v].append((w, k))
            discover(w, k)
        on_path.discard(v)

    discover(start, None)

    out: list[str] = []
    open_digits: dict[int, int] = {}
    in_use: set[int] = set()

    def emit(v: int, via: int | None) -> None:
        if via is not None:
            out.append(_bond_text(graph, via))
        out.append(_atom_text(graph, v))
        marks = closures.get(v, [])
        closing = [m for m in marks if not m[2]]
        opening = sorted((m for m in marks if m[2]), key=lambda m: rank[m[1]])
        freed = []
        for k, _, _ in closing:
            d = open_digits.pop(k)
            out.append(_ring_label(d))
            freed.append(d)
        for k, _, _ in opening:
            d = 1
            while d in in_use:
                d += 1
            in_use.add(d)
            open_digits[k] = d
            out.append(_bond_text(graph, k) + _ring_label(d))
        for d in freed:
            in_use.discard(d)
        kids = children[v]
        for w, k in kids[:-1]:
            out.append("(")
            emit(w, k)
            out.append(")")
        if kids:
            emit(kids[-1][0], kids[-1][1])

    emit(start, None)
    return "".join(out)


def write_smiles(graph: MolGraph, rank: Sequence[int] | None = None) -> str:
    """Write SMILES; ``rank`` orders traversal (atom index order by default).

    An empty graph gives ``""``.
    """
    if graph.is_empty:
        return ""
    graph = perceive(graph)
    if rank is None:
        rank = list(range(len(graph)))
    visited = [False] * len(graph)
    parts = []
    limit = sys.getrecursionlimit()
    if limit < 4 * len(graph) + 100:
        sys.setrecursionlimit(4 * len(graph) + 100)
    for comp in sorted(graph.components(), key=lambda c: min(rank[i] for i in c)):
        start = min(comp, key=lambda i: rank[i])
        parts.append(_write_component(graph, start, rank, visited))
    return ".".join(parts)
