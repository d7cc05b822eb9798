import pytest

from app.schemas import EnumSpec
from core.exceptions import RefusedTooLarge
from utils.enumeration import (
    CLASS_CACHE_SIZE,
    _cactus_class,
    brute_force_cacti,
    brute_force_trees,
    cacti,
    stream,
    trees,
)
from utils.graph_core import canonical_form, cycle_count, graph6_decode, graph6_encode, is_cactus, is_tree


def _codes(graphs):
    return [canonical_form(g) for g in graphs]


@pytest.mark.parametrize('n, count', [
    (1, 1), (2, 1), (3, 1), (4, 2), (5, 3), (6, 6), (7, 11), (8, 23), (9, 47), (10, 106), (11, 235), (12, 551),
])
def test_tree_counts(n, count):
    generated = list(trees(n))
    assert len(generated) == count
    assert len(set(_codes(generated))) == count
    assert all(is_tree(t) and t.n == n for t in generated)


def test_single_vertex_tree():
    (only,) = list(trees(1))
    assert only.n == 1 and only.m == 0
    assert list(trees(0)) == []


@pytest.mark.parametrize('n', range(1, 8))
def test_trees_match_brute_force(n):
    assert sorted(_codes(trees(n))) == _codes(brute_force_trees(n))


@pytest.mark.parametrize('n, k, count', [(4, 1, 2), (5, 1, 5), (5, 2, 1), (7, 3, 2), (3, 1, 1)])
def test_cactus_counts(n, k, count):
    assert len(list(cacti(n, k))) == count


@pytest.mark.parametrize('n, k', [(n, k) for n in range(3, 8) for k in range(1, (n - 1) // 2 + 1)])
def test_cacti_match_brute_force(n, k):
    generated = list(cacti(n, k))
    assert _codes(generated) == _codes(brute_force_cacti(n, k))
    for g in generated:
        assert g.n == n and is_cactus(g) and cycle_count(g) == k


def test_cactus_stream_is_sorted_and_restartable():
    family = cacti(8, 2)
    first, second = family.to_list(), family.to_list()
    assert _codes(first) == _codes(second) == sorted(_codes(first))


@pytest.mark.parametrize('n, k', [(5, 3), (0, 0), (2, 1), (6, -1)])
def test_infeasible_parameters_give_empty_stream(n, k):
    family = cacti(n, k)
    assert family.empty
    assert list(family) == []


def test_stream_respects_max_results():
    assert len(list(stream(EnumSpec(n=9, k=0, max_results=5)))) == 5
    assert len(list(stream(EnumSpec(n=9, k=0)))) == 47
    assert not EnumSpec(n=6, k=3).feasible


def test_partitions_cover_the_stream_once():
    family = cacti(7, 1)
    whole = _codes(family)
    parts = [_codes(family.partition(i, 3)) for i in range(3)]
    assert sorted(code for part in parts for code in part) == sorted(whole)
    with pytest.raises(ValueError):
        family.partition(3, 3)


def test_brute_force_refuses_large_orders():
    with pytest.raises(RefusedTooLarge):
        brute_force_trees(9)
    with pytest.raises(RefusedTooLarge):
        brute_force_cacti(9, 1)


def test_graph6_round_trip_on_enumerated_graphs():
    for n in range(1, 11):
        for k in range(0, (n - 1) // 2 + 1):
            if k > 0 and n > 8:
                continue
            for g in cacti(n, k):
                assert graph6_decode(graph6_encode(g)) == g


def test_cactus_class_cache_is_bounded():
    list(cacti(9, 2))
    info = _cactus_class.cache_info()
    assert info.maxsize == CLASS_CACHE_SIZE
    assert info.currsize <= CLASS_CACHE_SIZE
