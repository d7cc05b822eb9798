# utils/indices.py

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Optional

from core.exceptions import DegenerateEdge, OutOfDomain, UnsupportedGraph
from utils.graph_core import Graph, is_connected


@dataclass(frozen=True)
class IndexKernel:
    """
    Edge weight of a bond-incident-degree index. `weight` must be symmetric;
    `exact_weight`, when given, returns the same value as a Fraction.
    """

    name: str
    weight: Callable[[float, float], float]
    exact_weight: Optional[Callable[[int, int], Fraction]] = None


@dataclass(frozen=True)
class IndexValue:
    value: float
    exact: Optional[Fraction] = None


@lru_cache(maxsize=None)
def psi(x: int, y: int) -> Fraction:
    if x < 1 or y < 1:
        raise DegenerateEdge(f'degrees must be positive, got ({x}, {y})')
    if x + y == 2:
        raise DegenerateEdge('edge between two pendent vertices (K2) has a zero denominator')
    return Fraction(x * y, x + y - 2) ** 3


def psi_float(x: float, y: float) -> float:
    if x + y - 2 <= 0:
        raise DegenerateEdge(f'zero denominator at ({x}, {y})')
    return (x * y / (x + y - 2)) ** 3


def abc_weight(x: float, y: float) -> float:
    return math.sqrt((x + y - 2) / (x * y))


AZI_KERNEL = IndexKernel(name='azi', weight=psi_float, exact_weight=psi)
ABC_KERNEL = IndexKernel(name='abc', weight=abc_weight)

KERNELS: Dict[str, IndexKernel] = {
    AZI_KERNEL.name: AZI_KERNEL,
    ABC_KERNEL.name: ABC_KERNEL,
}


def get_kernel(name: str) -> IndexKernel:
    try:
        return KERNELS[name.lower()]
    except KeyError:
        raise OutOfDomain(f'unknown index {name!r}; known: {sorted(KERNELS)}') from None


def _degree_pair_counts(g: Graph) -> Counter:
    degrees = g.degrees()
    return Counter(
        (min(degrees[u], degrees[v]), max(degrees[u], degrees[v])) for u, v in g.edges()
    )


def azi(g: Graph) -> Fraction:
    if not is_connected(g):
        raise UnsupportedGraph(f'AZI needs a connected graph (n={g.n}, m={g.m})')
    pairs = _degree_pair_counts(g)
    if (1, 1) in pairs:
        raise UnsupportedGraph('AZI is undefined on K2')
    return sum((count * psi(x, y) for (x, y), count in pairs.items()), Fraction(0))


def abc(g: Graph) -> float:
    if not is_connected(g):
        raise UnsupportedGraph(f'ABC needs a connected graph (n={g.n}, m={g.m})')
    pairs = _degree_pair_counts(g)
    return math.fsum(count * abc_weight(x, y) for (x, y), count in sorted(pairs.items()))


def bid_index(g: Graph, kernel: IndexKernel) -> IndexValue:
    pairs = sorted(_degree_pair_counts(g).items())
    try:
        value = math.fsum(count * kernel.weight(x, y) for (x, y), count in pairs)
        exact = None
        if kernel.exact_weight is not None:
            exact = sum((count * kernel.exact_weight(x, y) for (x, y), count in pairs), Fraction(0))
    except (ZeroDivisionError, ValueError) as e:
        raise DegenerateEdge(f'kernel {kernel.name!r} undefined on a degree pair of the graph: {e}') from e
    if exact is not None:
        value = float(exact)
    return IndexValue(value=value, exact=exact)


def index_value(g: Graph, kernel: IndexKernel) -> IndexValue:
    """Kernel evaluation with the connectivity rules of azi/abc."""
    if kernel is AZI_KERNEL:
        exact = azi(g)
        return IndexValue(value=float(exact), exact=exact)
    if kernel is ABC_KERNEL:
        return IndexValue(value=abc(g))
    if not is_connected(g):
        raise UnsupportedGraph(f'index {kernel.name!r} needs a connected graph')
    return bid_index(g, kernel)


def f_bound(n: int, k: int) -> Fraction:
    if n <= 2:
        raise OutOfDomain(f'F(n,k) needs n >= 3, got n={n}')
    if k < 0:
        raise OutOfDomain(f'F(n,k) needs k >= 0, got k={k}')
    return (n - 2 * k - 1) * Fraction(n - 1, n - 2) ** 3 + 24 * k


def kernel_gap(x: float, y: float, p: float) -> float:
    if not (p >= 1 and x > p and x >= 2 and y >= 2):
        raise OutOfDomain(f'gap needs p >= 1, x > p, x >= 2, y >= 2; got x={x}, y={y}, p={p}')
    q = x - p
    return (x * y / (x + y - 2)) ** 3 - (q * y / (q + y - 2)) ** 3
