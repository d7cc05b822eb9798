import argparse
import logging
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from app.schemas import (
    CheckResult,
    Direction,
    EnumSpec,
    FamilyRecord,
    IndexRecord,
    OutputFormat,
    RunConfig,
)
from core.config import get_settings, get_worker_count
from core.exceptions import (
    CactazError,
    OutOfDomain,
    ParseError,
    VerificationViolation,
)
from utils.enumeration import stream
from utils.families import (
    construct,
    every_edge_deg2_incident,
    parse_family_spec,
    pendent_and_internal_paths,
    star_type_pendent_vertices,
    theorem2_report,
)
from utils.graph_core import Graph, cycle_count, graph6_encode, is_cactus, is_connected, is_tree, read_graph6_lines
from utils.indices import abc, azi, get_kernel, index_value
from utils.transform import hill_climb_max_azi
from utils.verify import (
    MAX_CLAIM_RANGE,
    THEOREM2_MIN_N,
    check_conjecture,
    scan,
    verify_corollary,
    verify_f_monotone,
    verify_max_claims,
    verify_theorem1,
    verify_theorem2,
)

logger = logging.getLogger(__name__)

Argument = Tuple[Tuple[str, ...], Dict[str, Any]]
Handler = Callable[[RunConfig], Any]


@dataclass
class _Command:
    name: str
    handler: Handler
    summary: str
    description: str
    arguments: Sequence[Argument] = field(default_factory=tuple)


class CommandRouter:
    """Collects subcommand handlers registered by decorator and builds the argparse tree."""

    def __init__(self, prog: str, description: str):
        self.prog = prog
        self.description = description
        self.commands: Dict[str, _Command] = {}

    def command(self, name: str, summary: str, description: str, arguments: Sequence[Argument] = ()):
        def decorator(handler: Handler) -> Handler:
            self.commands[name] = _Command(name, handler, summary, description, arguments)
            return handler
        return decorator

    def build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(prog=self.prog, description=self.description)
        subparsers = parser.add_subparsers(dest='subcommand', metavar='COMMAND')
        for cmd in self.commands.values():
            sub = subparsers.add_parser(cmd.name, help=cmd.summary, description=cmd.description)
            for flags, options in cmd.arguments:
                sub.add_argument(*flags, **options)
            _add_common_arguments(sub)
        return parser

    def dispatch(self, config: RunConfig) -> Any:
        cmd = self.commands.get(config.subcommand)
        if cmd is None:
            raise OutOfDomain(f'unknown command {config.subcommand!r}')
        logger.debug('[router] %s %s', cmd.name, config.parameters)
        return cmd.handler(config)


def _add_common_arguments(sub: argparse.ArgumentParser) -> None:
    sub.add_argument('--format', choices=[f.value for f in OutputFormat], default=None,
                     help='output format (default depends on the command)')
    sub.add_argument('--out', default=None, help='write the report to this path instead of stdout')
    sub.add_argument('--workers', type=int, default=None, help='worker processes for scans')
    sub.add_argument('--seed', type=int, default=0, help='random seed')
    sub.add_argument('-v', '--verbose', action='count', default=0, help='more logging on stderr')


_INDEX = (('--index',), {'choices': ['azi', 'abc'], 'default': 'azi', 'help': 'topological index'})
_N = (('--n',), {'type': int, 'default': None, 'help': 'number of vertices'})
_K = (('--k',), {'type': int, 'default': 0, 'help': 'number of cycles'})
_NMAX = (('--nmax',), {'type': int, 'default': None, 'help': 'largest number of vertices'})
_FAMILY = (('--family',), {'default': None, 'help': 'named family, e.g. star:5, g0:9,3, tplus:12'})
_GRAPH6 = (('--graph6',), {'default': None, 'metavar': 'PATH', 'help': 'graph6 file, one graph per line, or - for stdin'})

router = CommandRouter(prog='cactaz', description='AZI and ABC extremal problems on trees and cacti')


def _require(config: RunConfig, name: str) -> Any:
    value = config.parameters.get(name)
    if value is None:
        raise OutOfDomain(f'--{name.replace("_", "-")} is required for {config.subcommand}')
    return value


def _load_graphs(config: RunConfig) -> List[Graph]:
    source = config.parameters.get('graph6')
    family = config.parameters.get('family')
    if family is not None:
        return [construct(parse_family_spec(family))]
    if source is None:
        raise OutOfDomain('give --graph6 PATH or --family SPEC')
    if source == '-':
        return list(read_graph6_lines(sys.stdin))
    try:
        with open(source, 'r', encoding='ascii') as handle:
            return list(read_graph6_lines(handle))
    except OSError as e:
        raise ParseError(f'cannot read {source}: {e}') from e


@router.command('compute',
                summary='Index values',
                description='Print the AZI (exact and float) or ABC value of each input graph',
                arguments=(_INDEX, _GRAPH6, _FAMILY))
def compute(config: RunConfig) -> List[IndexRecord]:
    kernel = get_kernel(config.parameters['index'])
    records = []
    for g in _load_graphs(config):
        value = index_value(g, kernel)
        records.append(IndexRecord(
            graph6=graph6_encode(g),
            index=kernel.name,
            value_exact=None if value.exact is None else str(value.exact),
            value_float=value.value,
        ))
    return records


@router.command('enumerate',
                summary='Enumerate cacti',
                description='Every cactus on n vertices with k cycles up to isomorphism (k = 0 gives trees)',
                arguments=(_N, _K, (('--max-results',), {'type': int, 'default': None})))
def enumerate_graphs(config: RunConfig) -> List[Graph]:
    spec = EnumSpec(n=_require(config, 'n'), k=config.parameters['k'],
                    max_results=config.parameters.get('max_results'))
    return stream(spec).to_list()


@router.command('extremal',
                summary='Extremal graphs',
                description='Minimum or maximum of an index over the cacti of given n and k',
                arguments=(_N, _K, _INDEX,
                           (('--direction',), {'choices': [d.value for d in Direction], 'default': 'min'})))
def extremal(config: RunConfig):
    return scan(EnumSpec(n=_require(config, 'n'), k=config.parameters['k']),
                get_kernel(config.parameters['index']),
                Direction(config.parameters['direction']),
                workers=config.worker_count)


def _collect(checks: Sequence[Callable[[], Any]]) -> List[CheckResult]:
    """Run every check, keep all rows and re-raise once at the end if any failed."""
    rows: List[CheckResult] = []
    failure: Optional[VerificationViolation] = None
    for check in checks:
        try:
            outcome = check()
        except VerificationViolation as e:
            failure = failure or e
            rows.extend(e.results)
            continue
        rows.extend(outcome if isinstance(outcome, list) else [outcome])
    if failure is not None:
        witnesses = [w for r in rows if not r.passed for w in r.witnesses]
        raise type(failure)(str(failure), results=rows, witnesses=witnesses)
    return rows


def _theorem2_checks(config: RunConfig) -> List[Callable[[], Any]]:
    kernel = get_kernel(config.parameters['index'])
    n = config.parameters.get('n')
    n_values = [n] if n is not None else range(THEOREM2_MIN_N, _require(config, 'nmax') + 1)
    return [lambda n=n: verify_theorem2(n, kernel, workers=config.worker_count) for n in n_values]


@router.command('verify',
                summary='Check a claim',
                description='theorem1: minimum AZI over cacti; theorem2: structure of maximum-AZI trees; '
                            'maxclaims: maximum-AZI trees for n = 4..9; fmonotone: F(n, k) increasing in k; '
                            'corollary: the star minimizes AZI over all cacti',
                arguments=((('claim',), {'choices': ['theorem1', 'theorem2', 'maxclaims', 'fmonotone', 'corollary']}),
                           _N, _NMAX, _INDEX,
                           (('--tree-nmax',), {'type': int, 'default': None,
                                               'help': 'largest tree order for theorem1 (k = 0)'})))
def verify(config: RunConfig) -> List[CheckResult]:
    claim = config.parameters['claim']
    workers = config.worker_count
    n_max = config.parameters.get('nmax')
    if claim == 'theorem1':
        checks = [lambda: verify_theorem1(n_max, config.parameters.get('tree_nmax'), workers=workers)]
    elif claim == 'corollary':
        checks = [lambda: verify_corollary(n_max, workers=workers)]
    elif claim == 'fmonotone':
        checks = [lambda: verify_f_monotone(1000 if n_max is None else n_max)]
    elif claim == 'maxclaims':
        n = config.parameters.get('n')
        n_values = [n] if n is not None else MAX_CLAIM_RANGE
        checks = [lambda n=n: verify_max_claims(n, workers=workers) for n in n_values]
    else:
        checks = _theorem2_checks(config)
    return _collect(checks)


@router.command('conjecture',
                summary='AZI/ABC agreement',
                description='Compare the maximum-AZI trees with the minimum-ABC trees for each n',
                arguments=(_N, _NMAX))
def conjecture(config: RunConfig):
    n = config.parameters.get('n')
    if n is not None:
        return check_conjecture(n, workers=config.worker_count)
    return [check_conjecture(n, workers=config.worker_count)
            for n in range(3, _require(config, 'nmax') + 1)]


@router.command('climb',
                summary='Hill climbing',
                description='Ascend AZI over trees by local rewrites from a seed tree (random when omitted)',
                arguments=(_N, _FAMILY, _GRAPH6, (('--max-steps',), {'type': int, 'default': None})))
def climb(config: RunConfig):
    n = _require(config, 'n')
    seed = None
    if config.parameters.get('family') is not None or config.parameters.get('graph6') is not None:
        graphs = _load_graphs(config)
        if len(graphs) != 1:
            raise OutOfDomain(f'climbing needs exactly one seed graph, got {len(graphs)}')
        seed = graphs[0]
    max_steps = config.parameters.get('max_steps')
    max_steps = get_settings().climb_max_steps if max_steps is None else max_steps
    return hill_climb_max_azi(n, seed=seed, max_steps=max_steps, rng_seed=config.rng_seed)


@router.command('family',
                summary='Named family',
                description='Build a named graph and report its indices and path structure',
                arguments=(_FAMILY,))
def family(config: RunConfig) -> FamilyRecord:
    spec = parse_family_spec(_require(config, 'family'))
    g = construct(spec)
    cactus = is_cactus(g)
    tree = is_tree(g)
    try:
        azi_value = azi(g)
    except CactazError:
        azi_value = None
    return FamilyRecord(
        spec=spec.label(),
        graph6=graph6_encode(g),
        n=g.n,
        m=g.m,
        azi_exact=None if azi_value is None else str(azi_value),
        azi_float=None if azi_value is None else float(azi_value),
        abc=abc(g) if is_connected(g) and g.m > 0 else None,
        is_cactus=cactus,
        cycle_count=cycle_count(g) if cactus else None,
        paths=pendent_and_internal_paths(g) if tree else [],
        star_type_pendent_vertices=sorted(star_type_pendent_vertices(g)),
        every_edge_deg2_incident=every_edge_deg2_incident(g),
        theorem2=theorem2_report(g) if tree else None,
    )


def build_run_config(args: argparse.Namespace) -> RunConfig:
    ambient = {'subcommand', 'format', 'out', 'workers', 'seed', 'verbose'}
    parameters = {key: value for key, value in vars(args).items() if key not in ambient}
    return RunConfig(
        subcommand=args.subcommand,
        parameters=parameters,
        output_format=OutputFormat(args.format) if args.format else None,
        output_path=args.out,
        worker_count=get_worker_count(args.workers),
        rng_seed=args.seed,
    )


__all__ = ['router', 'CommandRouter', 'build_run_config']
