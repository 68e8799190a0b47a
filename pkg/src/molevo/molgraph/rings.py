"""Smallest set of smallest rings via a minimum cycle basis over GF(2)."""
from __future__ import annotations

from collections import deque

from .graph import MolGraph


def bridges(graph: MolGraph) -> set[int]:
    """Indices of bonds that lie on no cycle (iterative Tarjan)."""
    n = len(graph)
    disc = [-1] * n
    low = [0] * n
    out: set[int] = set()
    timer = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(graph.adjacency[root]))]
        while stack:
            v, parent_bond, it = stack[-1]
            advanced = False
            for w, k in it:
                if k == parent_bond:
                    continue
                if disc[w] == -1:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, k, iter(graph.adjacency[w])))
                    advanced = True
                    break
                low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if stack:
                u = stack[-1][0]
                low[u] = min(low[u], low[v])
                if low[v] > disc[u]:
                    out.add(parent_bond)
    return out


def cyclomatic_number(graph: MolGraph) -> int:
    return len(graph.bonds) - len(graph) + len(graph.components())


def _bfs_parents(adj, start, skip_bond=None):
    parent = {start: (None, None)}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w, k in adj[v]:
            if k == skip_bond or w in parent:
                continue
            parent[w] = (v, k)
            queue.append(w)
    return parent


def _path_bonds(parent, node):
    bonds = []
    nodes = [node]
    while parent[node][0] is not None:
        prev, k = parent[node]
        bonds.append(k)
        nodes.append(prev)
        node = prev
    return bonds, nodes


def _cycle_atoms(graph: MolGraph, bond_ids: list[int]) -> tuple[int, ...]:
    """Order the atoms of a simple cycle given its bonds."""
    links: dict[int, list[int]] = {}
    for k in bond_ids:
        b = graph.bonds[k]
        links.setdefault(b.a, []).append(b.b)
        links.setdefault(b.b, []).append(b.a)
    start = min(links)
    ring = [start]
    prev, cur = start, min(links[start])
    while cur != start:
        ring.append(cur)
        a, b = links[cur]
        prev, cur = cur, (b if a == prev else a)
    return tuple(ring)


def _reduce(vec: int, basis: dict[int, int]) -> int:
    while vec:
        pivot = vec.bit_length() - 1
        if pivot not in basis:
            return vec
        vec ^= basis[pivot]
    return 0


def sssr(graph: MolGraph) -> list[tuple[int, ...]]:
    """Minimum cycle basis, rings sorted by size then atom tuple."""
    need = cyclomatic_number(graph)
    if need == 0:
        return []
    bridge_set = bridges(graph)
    ring_bonds = [k for k in range(len(graph.bonds)) if k not in bridge_set]
    ring_atoms = sorted({a for k in ring_bonds for a in (graph.bonds[k].a, graph.bonds[k].b)})
    adj = {v: [(w, k) for w, k in graph.adjacency[v] if k not in bridge_set] for v in ring_atoms}

    candidates: dict[int, list[int]] = {}
    # shortest cycle through every ring bond
    for k in ring_bonds:
        b = graph.bonds[k]
        parent = _bfs_parents(adj, b.a, skip_bond=k)
        if b.b in parent:
            path, _ = _path_bonds(parent, b.b)
            ids = path + [k]
            mask = 0
            for x in ids:
                mask |= 1 << x
            candidates.setdefault(mask, ids)

    basis: dict[int, int] = {}
    chosen: list[list[int]] = []

    def absorb(cands):
        for mask, ids in sorted(cands.items(), key=lambda kv: (len(kv[1]), sorted(kv[1]))):
            if len(chosen) == need:
                return
            red = _reduce(mask, basis)
            if red:
                basis[red.bit_length() - 1] = red
                chosen.append(ids)

    absorb(candidates)
    if len(chosen) < need:
        # Horton candidate set is guaranteed to contain a minimum basis
        horton: dict[int, list[int]] = dict(candidates)
        for v in ring_atoms:
            parent = _bfs_parents(adj, v)
            for k in ring_bonds:
                b = graph.bonds[k]
                if b.a not in parent or b.b not in parent:
                    continue
                pa, na = _path_bonds(parent, b.a)
                pb, nb = _path_bonds(parent, b.b)
                if k in pa or k in pb or set(na) & set(nb) != {v}:
                    continue
                ids = pa + pb + [k]
                mask = 0
                for x in ids:
                    mask |= 1 << x
                horton.setdefault(mask, ids)
        basis.clear()
        chosen.clear()
        absorb(horton)

    rings = [_cycle_atoms(graph, ids) for ids in chosen]
    rings.sort(key=lambda r: (len(r), sorted(r)))
    return rings
