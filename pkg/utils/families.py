# utils/families.py

import re
from typing import FrozenSet, List, Set, Tuple

from app.schemas import FamilyKind, FamilySpec, PathKind, PathWitness, Theorem2Report
from core.exceptions import InvalidSpec, NotATree
from utils.graph_core import Edge, Graph, from_edge_list, is_tree

_SPEC_PATTERN = re.compile(r'^\s*([a-z0-9]+)\s*:\s*(\d+)\s*(?:,\s*(\d+)\s*)?$')

TPLUS_CHAINS = 4


def parse_family_spec(text: str) -> FamilySpec:
    """'star:7', 'path:10', 'cycle:5', 'g0:9,3', 'tplus:12'"""
    match = _SPEC_PATTERN.match((text or '').lower())
    if not match:
        raise InvalidSpec(f'cannot parse family spec {text!r}')
    name, n, k = match.group(1), int(match.group(2)), match.group(3)
    try:
        kind = FamilyKind(name)
    except ValueError:
        raise InvalidSpec(f'unknown family {name!r}; known: {[f.value for f in FamilyKind]}') from None
    if k is not None and kind is not FamilyKind.G0:
        raise InvalidSpec(f'family {name!r} takes no cycle count')
    if kind is FamilyKind.G0 and k is None:
        raise InvalidSpec('g0 needs a cycle count, e.g. g0:9,3')
    return FamilySpec(kind=kind, n=n, k=int(k or 0))


def _check_spec(spec: FamilySpec) -> None:
    n, k = spec.n, spec.k
    if spec.kind is not FamilyKind.G0 and k != 0:
        raise InvalidSpec(f'{spec.kind.value} takes no cycle count, got k={k}')
    minimum = {
        FamilyKind.STAR: 1,
        FamilyKind.PATH: 1,
        FamilyKind.CYCLE: 3,
        FamilyKind.G0: 3,
        FamilyKind.TPLUS: 10,
    }[spec.kind]
    if n < minimum:
        raise InvalidSpec(f'{spec.kind.value} needs n >= {minimum}, got n={n}')
    if spec.kind is FamilyKind.G0 and not 0 <= k <= (n - 1) // 2:
        raise InvalidSpec(f'g0 needs 0 <= k <= {(n - 1) // 2} for n={n}, got k={k}')


def _tplus_edges(n: int) -> List[Edge]:
    q, r = divmod(n - 2, TPLUS_CHAINS)
    lengths = [q + 1] * r + [q] * (TPLUS_CHAINS - r)
    edges = [(0, 1)]
    label = 2
    for i, length in enumerate(lengths):
        prev = 0 if i < TPLUS_CHAINS // 2 else 1
        for _ in range(length):
            edges.append((prev, label))
            prev = label
            label += 1
    return edges


def construct(spec: FamilySpec) -> Graph:
    _check_spec(spec)
    n = spec.n
    if spec.kind is FamilyKind.STAR:
        return from_edge_list(n, ((0, v) for v in range(1, n)))
    if spec.kind is FamilyKind.PATH:
        return from_edge_list(n, ((v, v + 1) for v in range(n - 1)))
    if spec.kind is FamilyKind.CYCLE:
        return from_edge_list(n, ((v, (v + 1) % n) for v in range(n)))
    if spec.kind is FamilyKind.G0:
        star = [(0, v) for v in range(1, n)]
        matching = [(2 * i - 1, 2 * i) for i in range(1, spec.k + 1)]
        return from_edge_list(n, star + matching)
    return from_edge_list(n, _tplus_edges(n))


def star(n: int) -> Graph:
    return construct(FamilySpec(kind=FamilyKind.STAR, n=n))


def path(n: int) -> Graph:
    return construct(FamilySpec(kind=FamilyKind.PATH, n=n))


def cycle(n: int) -> Graph:
    return construct(FamilySpec(kind=FamilyKind.CYCLE, n=n))


def g0(n: int, k: int) -> Graph:
    return construct(FamilySpec(kind=FamilyKind.G0, n=n, k=k))


def tplus(n: int) -> Graph:
    return construct(FamilySpec(kind=FamilyKind.TPLUS, n=n))


def pendent_and_internal_paths(g: Graph) -> List[PathWitness]:
    """
    Maximal chains of degree-2 vertices hanging off a vertex of degree > 2,
    ending at a leaf (pendent) or at another vertex of degree > 2 (internal).
    Pendent witnesses start at the leaf.
    """
    degrees = g.degrees()
    witnesses: List[PathWitness] = []
    seen_internal: Set[Tuple[int, ...]] = set()
    for start in range(g.n):
        if degrees[start] <= 2:
            continue
        for first in g.adjacency[start]:
            walk = [start, first]
            prev, cur = start, first
            while degrees[cur] == 2:
                nxt = g.adjacency[cur][0] if g.adjacency[cur][0] != prev else g.adjacency[cur][1]
                walk.append(nxt)
                prev, cur = cur, nxt
            end = walk[-1]
            if end == start:
                continue
            if degrees[end] == 1:
                witnesses.append(PathWitness(vertices=walk[::-1], length=len(walk) - 1, kind=PathKind.PENDENT))
                continue
            key = min(tuple(walk), tuple(reversed(walk)))
            if key in seen_internal:
                continue
            seen_internal.add(key)
            witnesses.append(PathWitness(vertices=list(key), length=len(key) - 1, kind=PathKind.INTERNAL))
    witnesses.sort(key=lambda w: (w.kind.value, w.vertices))
    return witnesses


def star_type_pendent_vertices(g: Graph) -> FrozenSet[int]:
    degrees = g.degrees()
    return frozenset(
        v for v in range(g.n) if degrees[v] == 1 and degrees[g.adjacency[v][0]] > 2
    )


def theorem2_report(t: Graph) -> Theorem2Report:
    if not is_tree(t):
        raise NotATree(f'structure report needs a tree (n={t.n}, m={t.m})')
    witnesses = pendent_and_internal_paths(t)
    return Theorem2Report(
        has_internal_path_ge2=any(w.kind is PathKind.INTERNAL and w.length >= 2 for w in witnesses),
        has_pendent_path_ge4=any(w.kind is PathKind.PENDENT and w.length >= 4 for w in witnesses),
        pendent_paths_len3=sum(1 for w in witnesses if w.kind is PathKind.PENDENT and w.length == 3),
    )


def every_edge_deg2_incident(g: Graph) -> bool:
    degrees = g.degrees()
    return all(degrees[u] == 2 or degrees[v] == 2 for u, v in g.edges())
