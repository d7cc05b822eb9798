import networkx as nx
import pytest

from app.schemas import FamilyKind, FamilySpec, PathKind
from core.exceptions import InvalidSpec, NotATree
from utils.enumeration import trees
from utils.families import (
    construct,
    cycle,
    every_edge_deg2_incident,
    g0,
    parse_family_spec,
    path,
    pendent_and_internal_paths,
    star,
    star_type_pendent_vertices,
    theorem2_report,
    tplus,
)
from utils.graph_core import cycle_count, degree_sequence, is_cactus, is_tree, to_networkx


@pytest.mark.parametrize('text, kind, n, k', [
    ('star:7', FamilyKind.STAR, 7, 0),
    ('path:10', FamilyKind.PATH, 10, 0),
    ('cycle:5', FamilyKind.CYCLE, 5, 0),
    ('g0:9,3', FamilyKind.G0, 9, 3),
    (' TPlus : 12 ', FamilyKind.TPLUS, 12, 0),
])
def test_parse_family_spec(text, kind, n, k):
    assert parse_family_spec(text) == FamilySpec(kind=kind, n=n, k=k)


@pytest.mark.parametrize('text', ['g0:9', 'star:5,1', 'wheel:6', 'star', 'path:-3', ''])
def test_parse_family_spec_rejects(text):
    with pytest.raises(InvalidSpec):
        parse_family_spec(text)


@pytest.mark.parametrize('spec', [
    FamilySpec(kind=FamilyKind.TPLUS, n=9),
    FamilySpec(kind=FamilyKind.CYCLE, n=2),
    FamilySpec(kind=FamilyKind.G0, n=7, k=4),
    FamilySpec(kind=FamilyKind.STAR, n=5, k=1),
])
def test_construct_rejects_out_of_range(spec):
    with pytest.raises(InvalidSpec):
        construct(spec)


def test_label_round_trip():
    assert FamilySpec(kind=FamilyKind.G0, n=9, k=3).label() == 'g0:9,3'
    assert parse_family_spec(FamilySpec(kind=FamilyKind.TPLUS, n=12).label()).n == 12


def test_shapes():
    assert degree_sequence(star(6)) == (5, 1, 1, 1, 1, 1)
    assert degree_sequence(path(4)) == (2, 2, 1, 1)
    assert degree_sequence(tplus(10)) == (3, 3, 2, 2, 2, 2, 1, 1, 1, 1)
    assert is_tree(tplus(13))
    for n in range(3, 12):
        for k in range(0, (n - 1) // 2 + 1):
            g = g0(n, k)
            assert is_cactus(g) and cycle_count(g) == k and g.degree(0) == n - 1


def test_tplus_chains_are_balanced():
    witnesses = pendent_and_internal_paths(tplus(13))
    pendent = sorted(w.length for w in witnesses if w.kind is PathKind.PENDENT)
    internal = [w for w in witnesses if w.kind is PathKind.INTERNAL]
    assert pendent == [2, 3, 3, 3]
    assert [w.vertices for w in internal] == [[0, 1]]


def test_paths_of_path_and_star():
    assert pendent_and_internal_paths(path(6)) == []
    witnesses = pendent_and_internal_paths(star(4))
    assert [(w.vertices, w.kind) for w in witnesses] == [
        ([1, 0], PathKind.PENDENT), ([2, 0], PathKind.PENDENT), ([3, 0], PathKind.PENDENT),
    ]


@pytest.mark.parametrize('n', range(4, 10))
def test_path_witnesses_partition_tree_edges(n):
    for t in trees(n):
        witnesses = pendent_and_internal_paths(t)
        if t.max_degree() <= 2:
            assert witnesses == []
            continue
        G = to_networkx(t)
        covered = []
        degrees = t.degrees()
        for w in witnesses:
            assert nx.is_simple_path(G, w.vertices)
            assert w.length == len(w.vertices) - 1
            assert all(degrees[v] == 2 for v in w.vertices[1:-1])
            if w.kind is PathKind.PENDENT:
                assert degrees[w.vertices[0]] == 1 and degrees[w.vertices[-1]] > 2
            else:
                assert degrees[w.vertices[0]] > 2 and degrees[w.vertices[-1]] > 2
            covered.extend(w.edge_set())
        assert len(covered) == len(set(covered)) == t.m


def test_star_type_pendent_vertices():
    assert star_type_pendent_vertices(star(5)) == frozenset({1, 2, 3, 4})
    assert star_type_pendent_vertices(path(5)) == frozenset()
    assert star_type_pendent_vertices(tplus(10)) == frozenset()


def test_theorem2_report():
    assert theorem2_report(tplus(10)).passes
    assert theorem2_report(tplus(18)).has_pendent_path_ge4
    report = theorem2_report(tplus(12))
    assert report.pendent_paths_len3 == 2 and not report.passes
    with pytest.raises(NotATree):
        theorem2_report(cycle(5))


def test_every_edge_deg2_incident():
    assert every_edge_deg2_incident(path(7))
    assert every_edge_deg2_incident(cycle(5))
    assert not every_edge_deg2_incident(star(4))
    assert not every_edge_deg2_incident(tplus(10))
