from fractions import Fraction

import pytest

from app.schemas import Direction, EnumSpec, Verdict
from core.exceptions import EmptyDomain, OutOfDomain, RefusedOutOfHypothesis, RefusedTooLarge
from utils.enumeration import cacti, trees
from utils.families import g0, path, star, tplus
from utils.graph_core import canonical_form, from_edge_list, graph6_encode
from utils.indices import ABC_KERNEL, AZI_KERNEL, azi, f_bound
from utils.verify import (
    PartialExtreme,
    check_conjecture,
    scan,
    verify_corollary,
    verify_f_monotone,
    verify_max_claims,
    verify_theorem1,
    verify_theorem2,
)


def _spider_222():
    return from_edge_list(7, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)])


def test_scan_minimum_over_bowties():
    report = scan(EnumSpec(n=5, k=2), AZI_KERNEL, Direction.MIN, workers=1)
    assert report.value_exact == '48'
    assert report.attaining == [graph6_encode(g0(5, 2))]
    assert report.class_size == 1


def test_scan_maximum_trees_on_seven_vertices():
    report = scan(EnumSpec(n=7, k=0), AZI_KERNEL, Direction.MAX, workers=1)
    assert report.extreme_value == 48
    expected = sorted(canonical_form(g).text() for g in (path(7), _spider_222()))
    assert report.canonical_codes == expected
    assert report.class_size == 11


def test_scan_star_minimizes_trees():
    report = scan(EnumSpec(n=6, k=0), AZI_KERNEL, Direction.MIN, workers=1)
    assert report.extreme_value == f_bound(6, 0)
    assert report.canonical_codes == [canonical_form(star(6)).text()]


def test_scan_abc_minimum_is_the_path_for_small_trees():
    report = scan(EnumSpec(n=6, k=0), ABC_KERNEL, Direction.MIN, workers=1)
    assert report.value_exact is None
    assert report.attaining == [graph6_encode(path(6))]


def test_scan_empty_domain():
    with pytest.raises(EmptyDomain):
        scan(EnumSpec(n=5, k=3), AZI_KERNEL, Direction.MIN, workers=1)


def test_scan_marks_orders_below_the_hypothesis():
    assert scan(EnumSpec(n=3, k=0), AZI_KERNEL, Direction.MIN, workers=1).outside_hypothesis
    assert not scan(EnumSpec(n=4, k=0), AZI_KERNEL, Direction.MIN, workers=1).outside_hypothesis


def test_scan_is_independent_of_worker_count():
    spec = EnumSpec(n=9, k=0)
    serial = scan(spec, ABC_KERNEL, Direction.MIN, workers=1)
    parallel = scan(spec, ABC_KERNEL, Direction.MIN, workers=2)
    assert serial == parallel


def test_partial_extreme_merge_is_associative():
    graphs = list(cacti(8, 1))
    values = [azi(g) for g in graphs]

    def fold(indices):
        partial = PartialExtreme(maximize=True, exact=True, band=1e-6)
        for i in indices:
            partial.offer(values[i], graphs[i])
        return partial

    a, b, c = fold(range(0, 5)), fold(range(5, 12)), fold(range(12, len(graphs)))
    left = a.merge(b).merge(c)
    right = a.merge(b.merge(c))
    whole = fold(range(len(graphs)))
    for partial in (left, right):
        assert partial.best == whole.best == max(values)
        assert partial.count == whole.count == len(graphs)
        assert sorted(canonical_form(g) for _, g in partial.candidates) == \
            sorted(canonical_form(g) for _, g in whole.candidates)


def test_verify_theorem1_small_grid():
    results = verify_theorem1(n_max=7, tree_n_max=9, workers=1)
    assert results and all(r.passed for r in results)
    assert {r.name for r in results} == {'lemma1', 'lemma2', 'theorem1'}
    assert any(r.n == 9 and r.k == 0 for r in results)
    assert not any(r.n == 8 and r.k > 0 for r in results)


def test_verify_theorem1_full_grid():
    results = verify_theorem1(n_max=10, tree_n_max=16)
    assert all(r.passed for r in results)
    assert max(r.n for r in results if r.k > 0) == 10
    assert max(r.n for r in results if r.k == 0) == 16


def test_verify_corollary():
    results = verify_corollary(n_max=7, workers=1)
    assert [r.n for r in results] == [4, 5, 6, 7]
    assert all(r.passed for r in results)


@pytest.mark.parametrize('n', range(4, 10))
def test_verify_max_claims(n):
    assert verify_max_claims(n, workers=1).passed


def test_verify_max_claims_domain():
    with pytest.raises(OutOfDomain):
        verify_max_claims(10)


@pytest.mark.parametrize('n', range(10, 17))
def test_verify_theorem2(n):
    assert verify_theorem2(n).passed


def test_ten_vertex_maximum_is_tplus():
    report = scan(EnumSpec(n=10, k=0), AZI_KERNEL, Direction.MAX, workers=1)
    assert report.canonical_codes == [canonical_form(tplus(10)).text()]


def test_verify_theorem2_abc_is_report_only():
    result = verify_theorem2(10, kernel=ABC_KERNEL, workers=1)
    assert result.name == 'theorem2_abc'


def test_verify_theorem2_refusals():
    with pytest.raises(RefusedOutOfHypothesis):
        verify_theorem2(9)
    with pytest.raises(RefusedTooLarge):
        verify_theorem2(19)


def test_verify_f_monotone():
    result = verify_f_monotone(300)
    assert result.passed
    assert f_bound(7, 3) - f_bound(7, 2) == 24 - 2 * Fraction(6, 5) ** 3
    with pytest.raises(OutOfDomain):
        verify_f_monotone(3)


@pytest.mark.parametrize('n', [3, 4, 5, 6])
def test_conjecture_agrees_on_small_trees(n):
    verdict = check_conjecture(n, workers=1)
    assert verdict.verdict is Verdict.AGREE
    assert verdict.max_azi_set == verdict.min_abc_set
    assert verdict.outside_hypothesis is (n < 4)


def test_conjecture_domain():
    with pytest.raises(OutOfDomain):
        check_conjecture(2)
    with pytest.raises(RefusedTooLarge):
        check_conjecture(19)


def test_tree_class_sizes_feed_reports():
    report = scan(EnumSpec(n=8, k=0), AZI_KERNEL, Direction.MAX, workers=1)
    assert report.class_size == len(list(trees(8)))


@pytest.mark.parametrize('n', range(7, 19))
def test_conjecture_verdict_is_well_formed(n):
    verdict = check_conjecture(n)
    assert verdict.n == n
    assert verdict.verdict in set(Verdict)
    assert verdict.max_azi_graphs and verdict.min_abc_graphs
    if verdict.verdict is Verdict.AGREE:
        assert verdict.max_azi_set == verdict.min_abc_set
    else:
        assert verdict.max_azi_set != verdict.min_abc_set
