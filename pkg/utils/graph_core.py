# utils/graph_core.py

from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from core.exceptions import InvalidEdge, NotConnected, ParseError


Edge = Tuple[int, int]

GRAPH6_HEADER = '>>graph6<<'


@dataclass(frozen=True)
class Graph:
    """
    Simple undirected graph on vertices 0..n-1. Immutable: rewrites and
    generators always build new instances, so values can be shared freely
    between workers.
    """

    n: int
    adjacency: Tuple[Tuple[int, ...], ...]
    m: int

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    def degrees(self) -> Tuple[int, ...]:
        return tuple(len(nbrs) for nbrs in self.adjacency)

    def edges(self) -> Iterator[Edge]:
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    yield (u, v)

    def edge_list(self) -> List[Edge]:
        return list(self.edges())

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._neighbor_sets[u]

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    @cached_property
    def _neighbor_sets(self) -> Tuple[FrozenSet[int], ...]:
        return tuple(frozenset(nbrs) for nbrs in self.adjacency)

    @cached_property
    def nx_view(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(self.n))
        G.add_edges_from(self.edges())
        return nx.freeze(G)

    def __repr__(self) -> str:
        return f'Graph(n={self.n}, m={self.m}, edges={self.edge_list()})'


@dataclass(frozen=True)
class BlockDecomposition:
    blocks: Tuple[FrozenSet[int], ...]
    cut_vertices: FrozenSet[int]

    def cycle_blocks(self, g: Graph) -> List[FrozenSet[int]]:
        return [b for b in self.blocks if len(b) >= 3 and _edges_inside(g, b) == len(b)]


@dataclass(frozen=True, order=True)
class CanonicalCode:
    value: bytes

    def text(self) -> str:
        return self.value.decode('ascii')


def from_edge_list(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    if n < 0:
        raise InvalidEdge(f'negative vertex count {n}')
    nbrs: List[set] = [set() for _ in range(n)]
    for pair in edges:
        u, v = int(pair[0]), int(pair[1])
        if u == v:
            raise InvalidEdge(f'self-loop at vertex {u}')
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidEdge(f'edge ({u}, {v}) out of range for n={n}')
        nbrs[u].add(v)
        nbrs[v].add(u)
    adjacency = tuple(tuple(sorted(s)) for s in nbrs)
    m = sum(len(s) for s in nbrs) // 2
    return Graph(n=n, adjacency=adjacency, m=m)


def from_networkx(G: nx.Graph) -> Graph:
    index = {v: i for i, v in enumerate(G.nodes())}
    return from_edge_list(len(index), ((index[u], index[v]) for u, v in G.edges()))


def to_networkx(g: Graph) -> nx.Graph:
    return nx.Graph(g.nx_view)


def relabel(g: Graph, permutation: Sequence[int]) -> Graph:
    """permutation[v] is the new label of vertex v."""
    return from_edge_list(g.n, ((permutation[u], permutation[v]) for u, v in g.edges()))


def degree_sequence(g: Graph) -> Tuple[int, ...]:
    return tuple(sorted(g.degrees(), reverse=True))


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return False
    return nx.is_connected(g.nx_view)


def is_tree(g: Graph) -> bool:
    return g.m == g.n - 1 and is_connected(g)


def cycle_count(g: Graph) -> int:
    if not is_connected(g):
        raise NotConnected(f'cycle count needs a connected graph, got n={g.n}, m={g.m}')
    return g.m - g.n + 1


def _edges_inside(g: Graph, vertices: FrozenSet[int]) -> int:
    return sum(1 for v in vertices for w in g.adjacency[v] if v < w and w in vertices)


def block_decomposition(g: Graph) -> BlockDecomposition:
    G = g.nx_view
    blocks = sorted((frozenset(b) for b in nx.biconnected_components(G)), key=lambda b: sorted(b))
    cut_vertices = frozenset(nx.articulation_points(G))
    return BlockDecomposition(blocks=tuple(blocks), cut_vertices=cut_vertices)


def is_cactus(g: Graph) -> bool:
    if not is_connected(g):
        return False
    decomposition = block_decomposition(g)
    return all(len(b) < 3 or _edges_inside(g, b) == len(b) for b in decomposition.blocks)


def common_cycle_block(g: Graph, vertices: Iterable[int]) -> Optional[FrozenSet[int]]:
    """The cycle block containing all given vertices, if there is one."""
    wanted = set(vertices)
    for block in block_decomposition(g).cycle_blocks(g):
        if wanted <= block:
            return block
    return None


# ---- canonical form ----------------------------------------------------------

def canonical_form(g: Graph) -> CanonicalCode:
    """
    Exact isomorphism-class code. Trees use a center-rooted tree encoding,
    everything else degree refinement with full backtracking (twins pruned,
    since swapping two twins is an automorphism).
    """
    if is_tree(g):
        return CanonicalCode(b'T%d:' % g.n + _tree_code(g).encode('ascii'))
    certificate = _search_certificate(g)
    body = ','.join(f'{u}-{v}' for u, v in certificate)
    return CanonicalCode(b'G%d:' % g.n + body.encode('ascii'))


def _tree_centers(g: Graph) -> List[int]:
    if g.n <= 2:
        return list(range(g.n))
    degree = list(g.degrees())
    layer = [v for v in range(g.n) if degree[v] == 1]
    remaining = g.n
    while remaining > 2:
        remaining -= len(layer)
        next_layer = []
        for leaf in layer:
            for w in g.adjacency[leaf]:
                degree[w] -= 1
                if degree[w] == 1:
                    next_layer.append(w)
        layer = next_layer
    return sorted(layer)


def _rooted_code(g: Graph, root: int) -> str:
    parent = {root: -1}
    order = [root]
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in g.adjacency[v]:
            if w not in parent:
                parent[w] = v
                order.append(w)
                queue.append(w)
    children: Dict[int, List[str]] = defaultdict(list)
    code = {}
    for v in reversed(order):
        code[v] = '(' + ''.join(sorted(children[v])) + ')'
        if parent[v] >= 0:
            children[parent[v]].append(code[v])
    return code[root]


def _tree_code(g: Graph) -> str:
    return min(_rooted_code(g, c) for c in _tree_centers(g))


def _refine(g: Graph, cells: List[List[int]]) -> List[List[int]]:
    while True:
        cell_of = {}
        for i, cell in enumerate(cells):
            for v in cell:
                cell_of[v] = i
        refined = []
        for cell in cells:
            if len(cell) == 1:
                refined.append(cell)
                continue
            groups: Dict[Tuple[int, ...], List[int]] = defaultdict(list)
            for v in cell:
                groups[tuple(sorted(cell_of[w] for w in g.adjacency[v]))].append(v)
            for key in sorted(groups):
                refined.append(groups[key])
        if len(refined) == len(cells):
            return refined
        cells = refined


def _are_twins(g: Graph, u: int, v: int) -> bool:
    return g._neighbor_sets[u] - {v} == g._neighbor_sets[v] - {u}


def _twin_representatives(g: Graph, cell: List[int]) -> List[int]:
    kept: List[int] = []
    for v in sorted(cell):
        if not any(_are_twins(g, u, v) for u in kept):
            kept.append(v)
    return kept


def _search_certificate(g: Graph) -> Tuple[Edge, ...]:
    by_degree: Dict[int, List[int]] = defaultdict(list)
    for v in range(g.n):
        by_degree[g.degree(v)].append(v)
    initial = [by_degree[d] for d in sorted(by_degree)]
    edges = g.edge_list()
    best: List[Optional[Tuple[Edge, ...]]] = [None]

    def descend(cells: List[List[int]]) -> None:
        cells = _refine(g, cells)
        target = next((i for i, cell in enumerate(cells) if len(cell) > 1), None)
        if target is None:
            label = {cell[0]: i for i, cell in enumerate(cells)}
            certificate = tuple(sorted(
                (min(label[u], label[v]), max(label[u], label[v])) for u, v in edges
            ))
            if best[0] is None or certificate < best[0]:
                best[0] = certificate
            return
        cell = cells[target]
        for v in _twin_representatives(g, cell):
            rest = [w for w in cell if w != v]
            descend(cells[:target] + [[v], rest] + cells[target + 1:])

    descend(initial)
    return best[0] or ()


# ---- graph6 ------------------------------------------------------------------

def graph6_decode(text: str) -> Graph:
    line = (text or '').strip()
    if line.startswith(GRAPH6_HEADER):
        line = line[len(GRAPH6_HEADER):]
    if not line:
        raise ParseError('empty graph6 record')
    if any(not 63 <= ord(ch) <= 126 for ch in line):
        raise ParseError(f'graph6 record has characters outside 63..126: {line!r}')
    try:
        G = nx.from_graph6_bytes(line.encode('ascii'))
    except (nx.NetworkXError, ValueError, IndexError) as e:
        raise ParseError(f'malformed graph6 record {line!r}: {e}') from e
    return from_networkx(G)


def graph6_encode(g: Graph) -> str:
    return nx.to_graph6_bytes(g.nx_view, header=False).decode('ascii').strip()


def read_graph6_lines(lines: Iterable[str]) -> Iterator[Graph]:
    for line in lines:
        if line.strip():
            yield graph6_decode(line)
