# utils/enumeration.py

import itertools
import logging
from functools import lru_cache
from typing import Callable, Dict, Iterator, List, Optional, Tuple

import networkx as nx

from app.schemas import EnumSpec
from core.config import get_settings
from core.exceptions import RefusedTooLarge
from utils.graph_core import (
    CanonicalCode,
    Graph,
    canonical_form,
    from_edge_list,
    from_networkx,
    is_cactus,
)

logger = logging.getLogger(__name__)

# enough for every (n, k) parent class of the default cacti_n_max; older classes are rebuilt on demand
CLASS_CACHE_SIZE = 32


class GraphStream:
    """
    Pull-based, reproducible sequence of pairwise non-isomorphic graphs.
    Each iteration restarts the underlying generator; a stream flagged
    `empty` (infeasible parameters) yields nothing.
    """

    def __init__(self, factory: Callable[[], Iterator[Graph]], label: str,
                 empty: bool = False, max_results: Optional[int] = None):
        self._factory = factory
        self.label = label
        self.empty = empty
        self.max_results = max_results

    def __iter__(self) -> Iterator[Graph]:
        if self.empty:
            return iter(())
        it = self._factory()
        if self.max_results is not None:
            return itertools.islice(it, self.max_results)
        return it

    def partition(self, index: int, parts: int) -> 'GraphStream':
        """Round-robin sub-stream `index` of `parts`; the parts cover the stream exactly once."""
        if not 0 <= index < parts:
            raise ValueError(f'partition index {index} out of range for {parts} parts')
        return GraphStream(lambda: itertools.islice(iter(self), index, None, parts),
                           label=f'{self.label}[{index}/{parts}]', empty=self.empty)

    def take(self, count: Optional[int]) -> 'GraphStream':
        return GraphStream(lambda: iter(self), label=self.label, empty=self.empty, max_results=count)

    def to_list(self) -> List[Graph]:
        return list(self)


# ---- trees -------------------------------------------------------------------

def _free_trees(n: int) -> Iterator[Graph]:
    # networkx only generates trees of order >= 2
    if n == 1:
        yield from_edge_list(1, [])
        return
    for tree in nx.nonisomorphic_trees(n):
        yield from_networkx(tree)


def trees(n: int) -> GraphStream:
    return GraphStream(lambda: _free_trees(n), label=f'trees({n})', empty=n < 1)


# ---- cacti: block augmentation -----------------------------------------------

def _attach_pendant(g: Graph, v: int) -> Graph:
    return from_edge_list(g.n + 1, g.edge_list() + [(v, g.n)])


def _glue_cycle(g: Graph, v: int, length: int) -> Graph:
    new = list(range(g.n, g.n + length - 1))
    ring = [v] + new
    edges = g.edge_list() + [(ring[i], ring[(i + 1) % length]) for i in range(length)]
    return from_edge_list(g.n + length - 1, edges)


def _feasible(n: int, k: int) -> bool:
    return n >= 1 and 0 <= k <= (n - 1) // 2


@lru_cache(maxsize=CLASS_CACHE_SIZE)
def _cactus_class(n: int, k: int) -> Tuple[Graph, ...]:
    """All cacti with n vertices and k cycles, ordered by canonical code."""
    if not _feasible(n, k):
        return ()
    if k == 0:
        return tuple(trees(n))
    found: Dict[CanonicalCode, Graph] = {}

    def offer(candidate: Graph) -> None:
        code = canonical_form(candidate)
        if code not in found:
            found[code] = candidate

    # last block a bridge: grow a pendant edge on an (n-1, k) cactus
    if _feasible(n - 1, k):
        for parent in _cactus_class(n - 1, k):
            for v in range(parent.n):
                offer(_attach_pendant(parent, v))
    # last block a cycle of `length` vertices glued at one vertex
    for length in range(3, n + 1):
        base = n - length + 1
        if not _feasible(base, k - 1):
            continue
        for parent in _cactus_class(base, k - 1):
            for v in range(parent.n):
                offer(_glue_cycle(parent, v, length))
    logger.debug('[cacti] n=%d k=%d: %d classes', n, k, len(found))
    return tuple(found[code] for code in sorted(found))


def cacti(n: int, k: int) -> GraphStream:
    if k == 0 and n >= 1:
        return trees(n)
    return GraphStream(lambda: iter(_cactus_class(n, k)), label=f'cacti({n},{k})',
                       empty=not _feasible(n, k))


def stream(spec: EnumSpec) -> GraphStream:
    return cacti(spec.n, spec.k).take(spec.max_results)


# ---- brute-force oracles -----------------------------------------------------

def _refuse_large(n: int) -> None:
    limit = get_settings().brute_force_n_max
    if n > limit:
        raise RefusedTooLarge(f'brute force is limited to n <= {limit}, got n={n}')


def _dedup_sorted(graphs: Iterator[Graph]) -> Iterator[Graph]:
    found: Dict[CanonicalCode, Graph] = {}
    for g in graphs:
        code = canonical_form(g)
        if code not in found:
            found[code] = g
    for code in sorted(found):
        yield found[code]


def _labeled_cacti(n: int, k: int) -> Iterator[Graph]:
    pairs = list(itertools.combinations(range(n), 2))
    m = n - 1 + k
    for subset in itertools.combinations(pairs, m):
        if n > 1 and len({v for pair in subset for v in pair}) < n:
            continue
        g = from_edge_list(n, subset)
        if is_cactus(g):
            yield g


def brute_force_cacti(n: int, k: int) -> GraphStream:
    _refuse_large(n)
    return GraphStream(lambda: _dedup_sorted(_labeled_cacti(n, k)), label=f'brute_force_cacti({n},{k})',
                       empty=not _feasible(n, k))


def _labeled_trees(n: int) -> Iterator[Graph]:
    if n <= 2:
        yield from_edge_list(n, [(0, 1)] if n == 2 else [])
        return
    for sequence in itertools.product(range(n), repeat=n - 2):
        yield from_networkx(nx.from_prufer_sequence(list(sequence)))


def brute_force_trees(n: int) -> GraphStream:
    _refuse_large(n)
    return GraphStream(lambda: _dedup_sorted(_labeled_trees(n)), label=f'brute_force_trees({n})',
                       empty=n < 1)
