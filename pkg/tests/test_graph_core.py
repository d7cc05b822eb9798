import itertools
import random

import networkx as nx
import pytest

from core.exceptions import InvalidEdge, NotConnected, ParseError
from utils.enumeration import cacti
from utils.families import cycle, g0, path, star, tplus
from utils.graph_core import (
    block_decomposition,
    canonical_form,
    common_cycle_block,
    cycle_count,
    degree_sequence,
    from_edge_list,
    from_networkx,
    graph6_decode,
    graph6_encode,
    is_cactus,
    is_connected,
    is_tree,
    read_graph6_lines,
    relabel,
    to_networkx,
)


def _butterfly():
    return from_edge_list(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)])


def _diamond():
    return from_edge_list(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])


def _all_labeled_graphs(n):
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield from_edge_list(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])


def test_from_edge_list_rejects_bad_edges():
    with pytest.raises(InvalidEdge):
        from_edge_list(3, [(0, 0)])
    with pytest.raises(InvalidEdge):
        from_edge_list(3, [(0, 3)])


def test_duplicate_edges_collapse():
    g = from_edge_list(3, [(0, 1), (1, 0), (1, 2)])
    assert g.m == 2
    assert g.edge_list() == [(0, 1), (1, 2)]
    assert g.degrees() == (1, 2, 1)


def test_connectivity_edge_cases():
    assert not is_connected(from_edge_list(0, []))
    assert is_connected(from_edge_list(1, []))
    assert not is_connected(from_edge_list(3, [(0, 1)]))
    with pytest.raises(NotConnected):
        cycle_count(from_edge_list(3, [(0, 1)]))


def test_cycle_count_and_tree():
    assert cycle_count(g0(9, 3)) == 3
    assert is_tree(tplus(10))
    assert not is_tree(cycle(5))


@pytest.mark.parametrize('g, expected', [
    (cycle(5), True),
    (_butterfly(), True),
    (g0(9, 4), True),
    (nx.complete_graph(4), False),
    (_diamond(), False),
])
def test_is_cactus_examples(g, expected):
    if isinstance(g, nx.Graph):
        g = from_networkx(g)
    assert is_cactus(g) is expected


@pytest.mark.parametrize('n', [4, 5])
def test_is_cactus_matches_cycle_counting(n):
    # a connected graph is a cactus exactly when it has as many cycles as its cyclomatic number
    for g in _all_labeled_graphs(n):
        if not is_connected(g):
            assert not is_cactus(g)
            continue
        cycles = sum(1 for _ in nx.simple_cycles(to_networkx(g)))
        assert is_cactus(g) is (cycles == g.m - g.n + 1)


def test_block_decomposition_of_butterfly():
    decomposition = block_decomposition(_butterfly())
    assert decomposition.cut_vertices == frozenset({0})
    assert sorted(sorted(b) for b in decomposition.cycle_blocks(_butterfly())) == [[0, 1, 2], [0, 3, 4]]
    assert common_cycle_block(_butterfly(), (1, 2)) == frozenset({0, 1, 2})
    assert common_cycle_block(_butterfly(), (1, 3)) is None


@pytest.mark.parametrize('g', [g0(7, 2), tplus(11), cycle(6), _butterfly(), path(8), star(6)])
def test_canonical_form_is_label_invariant(g):
    rng = random.Random(7)
    code = canonical_form(g)
    for _ in range(20):
        permutation = list(range(g.n))
        rng.shuffle(permutation)
        assert canonical_form(relabel(g, permutation)) == code


@pytest.mark.parametrize('n, classes', [(3, 4), (4, 11), (5, 34)])
def test_canonical_form_separates_isomorphism_classes(n, classes):
    codes = {canonical_form(g) for g in _all_labeled_graphs(n)}
    assert len(codes) == classes


def _random_graph(rng, n):
    pairs = list(itertools.combinations(range(n), 2))
    return from_edge_list(n, [pair for pair in pairs if rng.random() < 0.4])


def test_canonical_form_on_random_graphs():
    rng = random.Random(2024)
    graphs = [_random_graph(rng, rng.randint(1, 8)) for _ in range(100)]
    for g in graphs:
        permutation = list(range(g.n))
        rng.shuffle(permutation)
        assert canonical_form(relabel(g, permutation)) == canonical_form(g)
    for g, h in zip(graphs, graphs[1:]):
        same = g.n == h.n and nx.is_isomorphic(to_networkx(g), to_networkx(h))
        assert (canonical_form(g) == canonical_form(h)) is same


def test_cycle_count_matches_cycle_blocks():
    for n in range(3, 9):
        for k in range(0, (n - 1) // 2 + 1):
            for g in cacti(n, k):
                assert cycle_count(g) == len(block_decomposition(g).cycle_blocks(g)) == k


def test_canonical_form_prefixes():
    assert canonical_form(path(4)).text().startswith('T4:')
    assert canonical_form(cycle(4)).text().startswith('G4:')


def test_relabel_keeps_degree_sequence():
    g = g0(8, 2)
    assert degree_sequence(relabel(g, [7, 6, 5, 4, 3, 2, 1, 0])) == degree_sequence(g)


@pytest.mark.parametrize('g', [star(5), path(7), g0(9, 3), tplus(14)])
def test_graph6_matches_networkx(g):
    expected = nx.to_graph6_bytes(to_networkx(g), header=False).decode('ascii').strip()
    assert graph6_encode(g) == expected
    decoded = graph6_decode(expected)
    assert nx.is_isomorphic(to_networkx(decoded), to_networkx(g))
    assert graph6_decode('>>graph6<<' + expected).edge_list() == decoded.edge_list()


@pytest.mark.parametrize('text', ['', '   ', 'A b', '\x01\x02'])
def test_graph6_rejects_garbage(text):
    with pytest.raises(ParseError):
        graph6_decode(text)


def test_read_graph6_lines_skips_blank_lines():
    lines = [graph6_encode(star(4)) + '\n', '\n', graph6_encode(path(5)) + '\n']
    graphs = list(read_graph6_lines(lines))
    assert [g.n for g in graphs] == [4, 5]
