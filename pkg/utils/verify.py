# utils/verify.py

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from tqdm import tqdm

from app.schemas import (
    CheckResult,
    ConjectureVerdict,
    Direction,
    EnumSpec,
    ExtremalReport,
    Verdict,
)
from core.config import get_flag_band, get_settings, get_tie_tolerance, get_worker_count
from core.exceptions import (
    ClaimViolation,
    EmptyDomain,
    OutOfDomain,
    RefusedOutOfHypothesis,
    RefusedTooLarge,
    TheoremViolation,
)
from utils.enumeration import stream, trees
from utils.families import every_edge_deg2_incident, g0, path, theorem2_report
from utils.graph_core import Graph, canonical_form, graph6_decode, graph6_encode
from utils.indices import ABC_KERNEL, AZI_KERNEL, KERNELS, IndexKernel, f_bound, index_value

logger = logging.getLogger(__name__)

Value = Union[Fraction, float]

HYPOTHESIS_MIN_N = 4
THEOREM2_MIN_N = 10
MAX_CLAIM_RANGE = range(4, 10)


@dataclass
class PartialExtreme:
    """
    Running extreme of a scan. `candidates` holds every graph whose value is
    tied with the current best (exactly, or within the flag band for float
    indices). Merging two partials is associative and order-independent up
    to the final canonical sort.
    """

    maximize: bool
    exact: bool
    band: float
    count: int = 0
    best: Optional[Value] = None
    candidates: List[Tuple[Value, Graph]] = field(default_factory=list)

    def _better(self, a: Value, b: Value) -> bool:
        return a > b if self.maximize else a < b

    def _close(self, a: Value, b: Value) -> bool:
        if self.exact:
            return a == b
        return math.isclose(a, b, rel_tol=self.band)

    def offer(self, value: Value, g: Graph) -> None:
        self.count += 1
        if self.best is None or self._better(value, self.best):
            self.best = value
            self.candidates = [(v, h) for v, h in self.candidates if self._close(v, value)]
            self.candidates.append((value, g))
        elif self._close(value, self.best):
            self.candidates.append((value, g))

    def merge(self, other: 'PartialExtreme') -> 'PartialExtreme':
        merged = PartialExtreme(self.maximize, self.exact, self.band, count=self.count)
        merged.best = self.best
        merged.candidates = list(self.candidates)
        for value, g in other.candidates:
            merged.offer(value, g)
        merged.count = self.count + other.count
        return merged


def _fold(graphs: Sequence[Graph], kernel: IndexKernel, maximize: bool, band: float,
          progress: bool = False, label: str = '') -> PartialExtreme:
    partial = PartialExtreme(maximize=maximize, exact=kernel.exact_weight is not None, band=band)
    for g in tqdm(graphs, desc=label, disable=not progress, leave=False):
        result = index_value(g, kernel)
        partial.offer(result.exact if result.exact is not None else result.value, g)
    return partial


def _fold_chunk(graphs: List[Graph], kernel_name: str, maximize: bool, band: float) -> PartialExtreme:
    return _fold(graphs, KERNELS[kernel_name], maximize, band)


def _chunks(items: List[Graph], parts: int) -> List[List[Graph]]:
    size = max(1, math.ceil(len(items) / parts))
    return [items[i:i + size] for i in range(0, len(items), size)]


def scan(spec: EnumSpec, kernel: IndexKernel, direction: Direction,
         workers: Optional[int] = None) -> ExtremalReport:
    family = stream(spec)
    if family.empty:
        raise EmptyDomain(f'no cactus has n={spec.n} vertices and k={spec.k} cycles')
    maximize = direction is Direction.MAX
    exact = kernel.exact_weight is not None
    band = get_flag_band()
    worker_count = get_worker_count(workers)
    settings = get_settings()

    if worker_count > 1 and KERNELS.get(kernel.name) is kernel:
        graphs = family.to_list()
        partial = PartialExtreme(maximize, exact, band)
        with ProcessPoolExecutor(max_workers=worker_count) as pool:
            parts = pool.map(_fold_chunk, _chunks(graphs, worker_count * 4),
                             [kernel.name] * (worker_count * 4), [maximize] * (worker_count * 4),
                             [band] * (worker_count * 4))
            for part in parts:
                partial = partial.merge(part)
    else:
        partial = _fold(family, kernel, maximize, band, progress=settings.show_progress, label=family.label)

    if partial.best is None:
        raise EmptyDomain(f'{family.label} produced no graphs')

    tolerance = 0.0 if exact else get_tie_tolerance()
    attaining, near = [], []
    for value, g in partial.candidates:
        tied = value == partial.best if exact else math.isclose(value, partial.best, rel_tol=tolerance)
        (attaining if tied else near).append(g)
    coded = sorted(((canonical_form(g), g) for g in attaining), key=lambda pair: pair[0])
    logger.info('[scan] %s %s %s: %s over %d graphs', family.label, kernel.name, direction.value,
                partial.best, partial.count)
    return ExtremalReport(
        n=spec.n,
        k=spec.k,
        index=kernel.name,
        direction=direction,
        value_exact=str(partial.best) if exact else None,
        value_float=float(partial.best),
        attaining=[graph6_encode(g) for _, g in coded],
        class_size=partial.count,
        canonical_codes=[code.text() for code, _ in coded],
        near_ties=sorted(graph6_encode(g) for g in near),
        outside_hypothesis=spec.n < HYPOTHESIS_MIN_N,
    )


def _code_text(g: Graph) -> str:
    return canonical_form(g).text()


def _raise_if_failed(results: List[CheckResult], error: type, what: str) -> None:
    failed = [r for r in results if not r.passed]
    if failed:
        witnesses = [w for r in failed for w in r.witnesses]
        raise error(f'{what}: {len(failed)} check(s) failed', results=results, witnesses=witnesses)


def verify_theorem1(n_max: Optional[int] = None, tree_n_max: Optional[int] = None,
                    workers: Optional[int] = None) -> List[CheckResult]:
    """Minimum AZI over every feasible (n, k) equals F(n, k), attained only by G0(n, k)."""
    settings = get_settings()
    n_max = settings.cacti_n_max if n_max is None else n_max
    tree_n_max = max(n_max, settings.tree_n_max) if tree_n_max is None else tree_n_max
    results = []
    for n in range(3, max(n_max, tree_n_max) + 1):
        for k in range(0, (n - 1) // 2 + 1):
            if (k == 0 and n > tree_n_max) or (k > 0 and n > n_max):
                continue
            report = scan(EnumSpec(n=n, k=k), AZI_KERNEL, Direction.MIN, workers=workers)
            expected = f_bound(n, k)
            extremal_code = _code_text(g0(n, k))
            passed = report.extreme_value == expected and report.canonical_codes == [extremal_code]
            name = {0: 'lemma1', 1: 'lemma2'}.get(k, 'theorem1')
            results.append(CheckResult(
                name=name,
                n=n,
                k=k,
                passed=passed,
                expected=f'{expected} at G0({n},{k}) only',
                observed=f'{report.value_exact} at {len(report.attaining)} graph(s) of {report.class_size}',
                witnesses=[] if passed else report.attaining,
                outside_hypothesis=report.outside_hypothesis,
            ))
    _raise_if_failed(results, TheoremViolation, 'minimum AZI over cacti')
    return results


def verify_corollary(n_max: Optional[int] = None, workers: Optional[int] = None) -> List[CheckResult]:
    """Over all cycle counts, the minimum AZI on n vertices is F(n, 0), attained by the star only."""
    n_max = get_settings().cacti_n_max if n_max is None else n_max
    results = []
    for n in range(HYPOTHESIS_MIN_N, n_max + 1):
        reports = [scan(EnumSpec(n=n, k=k), AZI_KERNEL, Direction.MIN, workers=workers)
                   for k in range(0, (n - 1) // 2 + 1)]
        floor = min(r.extreme_value for r in reports)
        attaining = [code for r in reports if r.extreme_value == floor for code in r.canonical_codes]
        passed = floor == f_bound(n, 0) and attaining == [_code_text(g0(n, 0))]
        results.append(CheckResult(
            name='corollary',
            n=n,
            passed=passed,
            expected=f'{f_bound(n, 0)} at the star only',
            observed=f'{floor} at {len(attaining)} graph(s)',
            witnesses=[] if passed else [g for r in reports if r.extreme_value == floor for g in r.attaining],
        ))
    _raise_if_failed(results, TheoremViolation, 'AZI floor over all cacti')
    return results


def verify_max_claims(n: int, workers: Optional[int] = None) -> CheckResult:
    """Maximum-AZI trees: the path for n = 4..6, every deg-2-incident tree for n = 7..9."""
    if n not in MAX_CLAIM_RANGE:
        raise OutOfDomain(f'maximum claims are stated for 4 <= n <= 9, got n={n}')
    report = scan(EnumSpec(n=n, k=0), AZI_KERNEL, Direction.MAX, workers=workers)
    if n <= 6:
        expected_codes = {_code_text(path(n))}
        description = f'P{n} only'
    else:
        expected_codes = {_code_text(t) for t in trees(n) if every_edge_deg2_incident(t)}
        description = f'the {len(expected_codes)} trees with every edge on a degree-2 vertex'
    expected_value = Fraction(8 * (n - 1))
    passed = report.extreme_value == expected_value and set(report.canonical_codes) == expected_codes
    result = CheckResult(
        name='max_claims',
        n=n,
        k=0,
        passed=passed,
        expected=f'{expected_value} at {description}',
        observed=f'{report.value_exact} at {len(report.attaining)} tree(s)',
        witnesses=[] if passed else report.attaining,
    )
    _raise_if_failed([result], ClaimViolation, 'maximum AZI trees')
    return result


def verify_theorem2(n: int, kernel: IndexKernel = AZI_KERNEL, workers: Optional[int] = None) -> CheckResult:
    """
    Every optimal tree (maximum AZI, or minimum ABC when kernel is ABC) has
    no internal path of length >= 2, no pendent path of length >= 4 and at
    most one pendent path of length 3. Only the AZI form raises on failure.
    """
    if n < THEOREM2_MIN_N:
        raise RefusedOutOfHypothesis(f'the structure theorem is stated for n >= {THEOREM2_MIN_N}, got n={n}')
    limit = get_settings().conjecture_n_max
    if n > limit:
        raise RefusedTooLarge(f'tree scans are limited to n <= {limit}, got n={n}')
    direction = Direction.MAX if kernel is AZI_KERNEL else Direction.MIN
    report = scan(EnumSpec(n=n, k=0), kernel, direction, workers=workers)
    failing = []
    for text in report.attaining:
        structure = theorem2_report(graph6_decode(text))
        if not structure.passes:
            failing.append(text)
    result = CheckResult(
        name=f'theorem2_{kernel.name}',
        n=n,
        k=0,
        passed=not failing,
        expected='no internal path >= 2, no pendent path >= 4, at most one pendent path of length 3',
        observed=f'{len(report.attaining) - len(failing)}/{len(report.attaining)} optimal tree(s) comply',
        witnesses=failing,
    )
    if kernel is AZI_KERNEL:
        _raise_if_failed([result], TheoremViolation, 'structure of maximum-AZI trees')
    return result


def verify_f_monotone(n_max: int = 1000) -> CheckResult:
    """F(n, k + 1) > F(n, k) on the whole feasible grid, compared exactly."""
    if n_max < HYPOTHESIS_MIN_N:
        raise OutOfDomain(f'F(n, k) monotonicity is checked from n = 4, got n_max={n_max}')
    comparisons = 0
    failures = []
    for n in range(HYPOTHESIS_MIN_N, n_max + 1):
        previous = f_bound(n, 0)
        for k in range(1, (n - 1) // 2 + 1):
            current = f_bound(n, k)
            comparisons += 1
            if not current > previous:
                failures.append(f'F({n},{k})={current} <= F({n},{k - 1})={previous}')
            previous = current
    result = CheckResult(
        name='f_monotone',
        n=n_max,
        passed=not failures,
        expected='strictly increasing in k',
        observed=f'{comparisons - len(failures)}/{comparisons} comparisons increasing',
        detail='; '.join(failures[:10]),
    )
    _raise_if_failed([result], ClaimViolation, 'monotonicity of F(n, k) in k')
    return result


def check_conjecture(n: int, workers: Optional[int] = None) -> ConjectureVerdict:
    """Compare the maximum-AZI and minimum-ABC tree sets. A finding, not an assertion."""
    if n < 3:
        raise OutOfDomain(f'AZI is defined on trees with n >= 3, got n={n}')
    limit = get_settings().conjecture_n_max
    if n > limit:
        raise RefusedTooLarge(f'tree scans are limited to n <= {limit}, got n={n}')
    azi_report = scan(EnumSpec(n=n, k=0), AZI_KERNEL, Direction.MAX, workers=workers)
    abc_report = scan(EnumSpec(n=n, k=0), ABC_KERNEL, Direction.MIN, workers=workers)
    if set(azi_report.canonical_codes) == set(abc_report.canonical_codes):
        verdict = Verdict.AGREE
    elif abc_report.near_ties:
        verdict = Verdict.NEAR_TIE
    else:
        verdict = Verdict.DISAGREE
    logger.info('[conjecture] n=%d: %s', n, verdict.value)
    return ConjectureVerdict(
        n=n,
        max_azi_set=azi_report.canonical_codes,
        min_abc_set=abc_report.canonical_codes,
        verdict=verdict,
        max_azi_value=azi_report.value_exact,
        min_abc_value=abc_report.value_float,
        max_azi_graphs=azi_report.attaining,
        min_abc_graphs=abc_report.attaining,
        near_ties=abc_report.near_ties,
        outside_hypothesis=n < HYPOTHESIS_MIN_N,
    )
