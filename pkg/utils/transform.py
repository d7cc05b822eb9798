# utils/transform.py

import logging
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Set, Tuple, Union

import networkx as nx

from app.schemas import ClimbStep, ClimbTrace, FamilySpec, PathKind
from core.exceptions import DegenerateResult, NotATree, OutOfDomain, PatternMismatch, UnsupportedGraph
from utils.families import construct, pendent_and_internal_paths
from utils.graph_core import (
    Edge,
    Graph,
    canonical_form,
    common_cycle_block,
    degree_sequence,
    from_edge_list,
    from_networkx,
    graph6_encode,
    is_connected,
    is_tree,
    to_networkx,
)
from utils.indices import azi, psi

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RewriteOutcome:
    """
    `azi_delta` is azi(source) - azi(result), booked only over the edges
    whose endpoint degrees or existence changed. `proof_delta` is the
    closed form the extremal proofs state for the same quantity, when the
    match is of the shape those proofs treat.
    """

    move: str
    source: Graph
    result: Graph
    azi_delta: Fraction
    degree_sequence_preserved: bool
    proof_delta: Optional[Fraction] = None

    def recomputed_delta(self) -> Fraction:
        return azi(self.source) - azi(self.result)

    def bookkeeping_matches(self) -> bool:
        return self.azi_delta == self.recomputed_delta()


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def _edge_degrees(edges: Iterable[Edge]) -> Dict[int, int]:
    degrees: Dict[int, int] = {}
    for u, v in edges:
        degrees[u] = degrees.get(u, 0) + 1
        degrees[v] = degrees.get(v, 0) + 1
    return degrees


def _rewrite(g: Graph, move: str, removed_vertices: Iterable[int] = (),
             removed_edges: Iterable[Edge] = (), added_edges: Iterable[Edge] = (),
             proof_delta: Optional[Fraction] = None) -> RewriteOutcome:
    gone: Set[int] = set(removed_vertices)
    before = set(g.edges())
    dropped = {_norm(u, v) for u, v in removed_edges}
    after = {e for e in before if e not in dropped and e[0] not in gone and e[1] not in gone}
    after |= {_norm(u, v) for u, v in added_edges}

    survivors = [v for v in range(g.n) if v not in gone]
    if len(survivors) == 2 and len(after) == 1:
        raise UnsupportedGraph(f'{move} leaves K2, on which AZI is undefined')

    touched = {v for e in before ^ after for v in e}
    degrees_before = g.degrees()
    degrees_after = _edge_degrees(after)
    delta = sum((psi(degrees_before[u], degrees_before[v]) for u, v in before if u in touched or v in touched),
                Fraction(0))
    delta -= sum((psi(degrees_after[u], degrees_after[v]) for u, v in after if u in touched or v in touched),
                 Fraction(0))

    label = {v: i for i, v in enumerate(survivors)}
    result = from_edge_list(len(survivors), ((label[u], label[v]) for u, v in sorted(after)))
    return RewriteOutcome(
        move=move,
        source=g,
        result=result,
        azi_delta=delta,
        degree_sequence_preserved=degree_sequence(g) == degree_sequence(result),
        proof_delta=proof_delta,
    )


def _require_vertices(g: Graph, *vertices: int) -> None:
    if any(not 0 <= v < g.n for v in vertices):
        raise PatternMismatch(f'vertex out of range in {vertices} for n={g.n}')
    if len(set(vertices)) != len(vertices):
        raise PatternMismatch(f'pattern vertices must be distinct, got {vertices}')


# ---- cactus rewrites ---------------------------------------------------------

def contract_cycle_path(g: Graph, u: int, v: int, w: int) -> RewriteOutcome:
    """Remove the degree-2 cycle vertex u and join its neighbors v, w."""
    _require_vertices(g, u, v, w)
    if not (g.has_edge(u, v) and g.has_edge(u, w)):
        raise PatternMismatch(f'{u} must be adjacent to both {v} and {w}')
    if g.degree(u) != 2 or g.degree(v) != 2 or g.degree(w) < 3:
        raise PatternMismatch(f'need d_u = d_v = 2 and d_w >= 3, got {g.degree(u)}, {g.degree(v)}, {g.degree(w)}')
    if g.has_edge(v, w):
        raise PatternMismatch(f'{v} and {w} are adjacent; the triangle case is delete_triangle_pair')
    if common_cycle_block(g, (u, v, w)) is None:
        raise PatternMismatch(f'{u}, {v}, {w} do not lie on a common cycle')
    return _rewrite(g, f'contract {u} between {v} and {w}', removed_vertices=[u],
                    added_edges=[(v, w)], proof_delta=Fraction(8))


def delete_triangle_pair(g: Graph, u: int, v: int, w: int) -> RewriteOutcome:
    """Remove the two degree-2 vertices of a triangle hanging at w."""
    _require_vertices(g, u, v, w)
    if not (g.has_edge(u, v) and g.has_edge(u, w) and g.has_edge(v, w)):
        raise PatternMismatch(f'{u}, {v}, {w} do not form a triangle')
    x = g.degree(w)
    if g.degree(u) != 2 or g.degree(v) != 2 or x < 3:
        raise PatternMismatch(f'need d_u = d_v = 2 and d_w >= 3, got {g.degree(u)}, {g.degree(v)}, {x}')
    outcome = _rewrite(g, f'delete triangle {u},{v} at {w}', removed_vertices=[u, v])
    others = [z for z in g.neighbors(w) if z not in (u, v)]
    proof = 24 + sum((psi(x, g.degree(z)) - psi(x - 2, g.degree(z)) for z in others), Fraction(0))
    return replace(outcome, proof_delta=proof)


def strip_pendants(g: Graph, v0: int) -> RewriteOutcome:
    """Remove every pendent vertex attached to v0."""
    _require_vertices(g, v0)
    pendants = [z for z in g.neighbors(v0) if g.degree(z) == 1]
    if not pendants:
        raise PatternMismatch(f'vertex {v0} has no pendent neighbor')
    y, p = g.degree(v0), len(pendants)
    others = [z for z in g.neighbors(v0) if g.degree(z) != 1]
    proof = p * psi(1, y) + sum((psi(y, g.degree(z)) - psi(y - p, g.degree(z)) for z in others), Fraction(0))
    outcome = _rewrite(g, f'strip {p} pendants at {v0}', removed_vertices=pendants, proof_delta=proof)
    if outcome.result.n == 0 or not is_connected(outcome.result):
        raise DegenerateResult(f'stripping pendants at {v0} leaves no connected graph')
    return outcome


# ---- tree rewrites -----------------------------------------------------------

def shift_degree2_vertex(t: Graph, path_vertex: int, target_edge: Tuple[int, int]) -> RewriteOutcome:
    """Splice the degree-2 vertex into target_edge and join its former neighbors."""
    a, b = target_edge
    _require_vertices(t, path_vertex)
    if not is_tree(t):
        raise PatternMismatch('shift_degree2_vertex works on trees')
    if t.degree(path_vertex) != 2:
        raise PatternMismatch(f'vertex {path_vertex} has degree {t.degree(path_vertex)}, not 2')
    if path_vertex in (a, b):
        raise PatternMismatch(f'target edge ({a}, {b}) is incident to {path_vertex}')
    if not (0 <= a < t.n and 0 <= b < t.n and t.has_edge(a, b)):
        raise PatternMismatch(f'({a}, {b}) is not an edge')
    v1, v3 = t.neighbors(path_vertex)
    d = t.degrees()
    proof = (psi(d[v1], 2) + psi(2, d[v3]) + psi(d[a], d[b])
             - psi(d[v1], d[v3]) - psi(d[a], 2) - psi(2, d[b]))
    return _rewrite(
        t, f'shift {path_vertex} onto ({a},{b})',
        removed_edges=[(v1, path_vertex), (path_vertex, v3), (a, b)],
        added_edges=[(v1, v3), (a, path_vertex), (path_vertex, b)],
        proof_delta=proof,
    )


def _on_length3_pendent_end(g: Graph, leaf: int) -> bool:
    return any(
        w.kind is PathKind.PENDENT and w.length == 3 and w.vertices[0] == leaf
        for w in pendent_and_internal_paths(g)
    )


def reattach_leaf(t: Graph, leaf: int, new_support: int) -> RewriteOutcome:
    """Move a pendent vertex from its neighbor onto new_support."""
    _require_vertices(t, leaf, new_support)
    if t.degree(leaf) != 1:
        raise PatternMismatch(f'vertex {leaf} is not a leaf')
    support = t.neighbors(leaf)[0]
    if new_support == support:
        raise PatternMismatch(f'{new_support} already supports {leaf}')
    proof = None
    if t.degree(new_support) == 1 and t.degree(support) == 2:
        if _on_length3_pendent_end(t, leaf) and _on_length3_pendent_end(t, new_support):
            proof = Fraction(0)
    return _rewrite(t, f'reattach {leaf} to {new_support}', removed_edges=[(leaf, support)],
                    added_edges=[(leaf, new_support)], proof_delta=proof)


def _side_of(t: Graph, start: int, blocked: int) -> FrozenSet[int]:
    G = to_networkx(t)
    G.remove_edge(start, blocked)
    return frozenset(nx.node_connected_component(G, start))


def regraft_branch(t: Graph, a: int, b: int, w: int) -> RewriteOutcome:
    """Cut the tree edge ab and hang a's branch on w, a vertex on b's side."""
    _require_vertices(t, a, b, w)
    if not is_tree(t):
        raise PatternMismatch('regraft_branch works on trees')
    if not t.has_edge(a, b):
        raise PatternMismatch(f'({a}, {b}) is not an edge')
    if w not in _side_of(t, b, a):
        raise PatternMismatch(f'{w} is not on the side of {b}')
    d = t.degrees()
    proof = None
    if d[a] == 2 and d[b] == 2 and d[w] >= 3:
        c = next(z for z in t.neighbors(b) if z != a)
        if d[c] == 2:
            proof = sum((psi(d[w], d[z]) - psi(d[w] + 1, d[z]) for z in t.neighbors(w)), Fraction(0))
    return _rewrite(t, f'regraft {a}-{b} onto {w}', removed_edges=[(a, b)], added_edges=[(a, w)],
                    proof_delta=proof)


# ---- match sweeps ------------------------------------------------------------

def _contract_matches(g: Graph) -> List[tuple]:
    matches = []
    for u in range(g.n):
        if g.degree(u) != 2:
            continue
        for v, w in (g.neighbors(u), g.neighbors(u)[::-1]):
            if g.degree(v) == 2 and g.degree(w) >= 3 and not g.has_edge(v, w):
                if common_cycle_block(g, (u, v, w)) is not None:
                    matches.append((u, v, w))
    return matches


def _triangle_matches(g: Graph) -> List[tuple]:
    matches = []
    for u in range(g.n):
        if g.degree(u) != 2:
            continue
        p, q = g.neighbors(u)
        for v, w in ((p, q), (q, p)):
            if u < v and g.degree(v) == 2 and g.degree(w) >= 3 and g.has_edge(v, w):
                matches.append((u, v, w))
    return matches


def _strip_matches(g: Graph) -> List[tuple]:
    if g.n <= 2:
        return []
    return [(v,) for v in range(g.n) if g.degree(v) > 1 and any(g.degree(z) == 1 for z in g.neighbors(v))]


def _shift_matches(t: Graph) -> List[tuple]:
    edges = t.edge_list()
    return [
        (v, e) for v in range(t.n) if t.degree(v) == 2
        for e in edges if v not in e
    ]


def _reattach_matches(t: Graph) -> List[tuple]:
    return [
        (leaf, z) for leaf in range(t.n) if t.degree(leaf) == 1
        for z in range(t.n) if z != leaf and z != t.neighbors(leaf)[0]
    ]


def _regraft_matches(t: Graph) -> List[tuple]:
    matches = []
    for u, v in t.edges():
        for a, b in ((u, v), (v, u)):
            for w in sorted(_side_of(t, b, a)):
                if w != b:
                    matches.append((a, b, w))
    return matches


REWRITES: Dict[str, Tuple[Callable[..., RewriteOutcome], Callable[[Graph], List[tuple]]]] = {
    'contract_cycle_path': (contract_cycle_path, _contract_matches),
    'delete_triangle_pair': (delete_triangle_pair, _triangle_matches),
    'strip_pendants': (strip_pendants, _strip_matches),
    'shift_degree2_vertex': (shift_degree2_vertex, _shift_matches),
    'reattach_leaf': (reattach_leaf, _reattach_matches),
    'regraft_branch': (regraft_branch, _regraft_matches),
}

TREE_MOVES = ('shift_degree2_vertex', 'reattach_leaf', 'regraft_branch')


def sweep_matches(g: Graph, rewrite: str) -> List[tuple]:
    try:
        _, finder = REWRITES[rewrite]
    except KeyError:
        raise OutOfDomain(f'unknown rewrite {rewrite!r}; known: {sorted(REWRITES)}') from None
    return finder(g)


def apply_rewrite(g: Graph, rewrite: str, args: tuple) -> RewriteOutcome:
    fn, _ = REWRITES[rewrite]
    return fn(g, *args)


# ---- hill climbing -----------------------------------------------------------

@dataclass(frozen=True)
class _Candidate:
    value: Fraction
    code: bytes
    move: str
    graph: Graph


def _random_tree(n: int, rng: random.Random) -> Graph:
    if n <= 2:
        return from_edge_list(n, [(0, 1)] if n == 2 else [])
    sequence = [rng.randrange(n) for _ in range(n - 2)]
    return from_networkx(nx.from_prufer_sequence(sequence))


def _neighborhood(t: Graph, value: Fraction) -> List[_Candidate]:
    best_by_code: Dict[bytes, _Candidate] = {}
    for name in TREE_MOVES:
        for args in sweep_matches(t, name):
            outcome = apply_rewrite(t, name, args)
            code = canonical_form(outcome.result).value
            if code not in best_by_code:
                best_by_code[code] = _Candidate(value - outcome.azi_delta, code, outcome.move, outcome.result)
    return sorted(best_by_code.values(), key=lambda c: c.code)


def _step(move: str, value: Fraction, g: Graph) -> ClimbStep:
    return ClimbStep(move=move, azi_exact=str(value), azi_float=float(value), graph6=graph6_encode(g))


def hill_climb_max_azi(n: int, seed: Union[Graph, FamilySpec, None] = None, max_steps: int = 200,
                       rng_seed: int = 0) -> ClimbTrace:
    """
    Best-improvement ascent over shift/reattach/regraft moves. On a plateau
    the climber walks to unvisited isomorphism classes of equal AZI (picked
    with the seeded RNG) and backtracks along the plateau when it runs dry.
    """
    rng = random.Random(rng_seed)
    if seed is None:
        current = _random_tree(n, rng)
    elif isinstance(seed, FamilySpec):
        current = construct(seed)
    else:
        current = seed
    if current.n != n:
        raise OutOfDomain(f'seed has {current.n} vertices, expected {n}')
    if not is_tree(current):
        raise NotATree('hill climbing starts from a tree')

    start = current
    value = azi(current)
    best, best_value = current, value
    visited = {canonical_form(current).value}
    plateau: List[Tuple[Graph, Fraction]] = []
    steps: List[ClimbStep] = []

    while len(steps) < max_steps:
        candidates = _neighborhood(current, value)
        improving = [c for c in candidates if c.value > value]
        if improving:
            top = max(c.value for c in improving)
            chosen = next(c for c in improving if c.value == top)
            plateau.clear()
        else:
            sideways = [c for c in candidates if c.value == value and c.code not in visited]
            if sideways:
                chosen = rng.choice(sideways)
                plateau.append((current, value))
            elif plateau:
                current, value = plateau.pop()
                steps.append(_step('backtrack', value, current))
                continue
            else:
                break
        current, value = chosen.graph, chosen.value
        visited.add(chosen.code)
        steps.append(_step(chosen.move, value, current))
        if value > best_value:
            best, best_value = current, value
            logger.info('[climb] n=%d step %d: azi %s', n, len(steps), value)

    return ClimbTrace(
        n=n,
        rng_seed=rng_seed,
        seed_graph6=graph6_encode(start),
        steps=steps,
        best_graph6=graph6_encode(best),
        best_azi_exact=str(best_value),
        best_azi_float=float(best_value),
    )
