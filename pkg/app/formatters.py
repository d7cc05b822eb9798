import csv
import io
import json
from typing import Any, List, Optional, Sequence

from pydantic import BaseModel

from app.schemas import (
    CheckResult,
    ClimbTrace,
    ConjectureVerdict,
    ExtremalReport,
    FamilyRecord,
    IndexRecord,
    OutputFormat,
)
from core.exceptions import FormatMismatch
from utils.graph_core import Graph, graph6_encode


def _decimal(value: Optional[float]) -> str:
    return '' if value is None else f'{value:.6f}'


def _aligned_csv(header: Sequence[str], rows: List[Sequence[Any]]) -> str:
    cells = [[str(c) for c in header]] + [['' if c is None else str(c) for c in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    for row in cells:
        padded = [cell.ljust(width) for cell, width in zip(row, widths)]
        padded[-1] = padded[-1].rstrip()
        writer.writerow(padded)
    return buffer.getvalue()


def _rounded(value: Any) -> Any:
    if isinstance(value, float):
        return round(value, 6)
    if isinstance(value, dict):
        return {key: _rounded(item) for key, item in value.items()}
    if isinstance(value, list):
        return [_rounded(item) for item in value]
    return value


def _json(payload: Any) -> str:
    def dump(item: Any) -> Any:
        if isinstance(item, BaseModel):
            return _rounded(item.model_dump(mode='json'))
        if isinstance(item, Graph):
            return {'graph6': graph6_encode(item), 'n': item.n, 'm': item.m}
        return item
    data = [dump(x) for x in payload] if isinstance(payload, list) else dump(payload)
    return json.dumps(data, indent=2, ensure_ascii=False) + '\n'


def _as_list(payload: Any) -> List[Any]:
    return payload if isinstance(payload, list) else [payload]


def _kind(payload: Any) -> type:
    items = _as_list(payload)
    return type(items[0]) if items else Graph


def _csv_rows(kind: type, items: List[Any]) -> str:
    if kind is ExtremalReport:
        header = ('n', 'k', 'index', 'direction', 'value_exact', 'value_float', 'graph6', 'class_size')
        rows = [
            (r.n, r.k, r.index, r.direction.value, r.value_exact, _decimal(r.value_float), g6, r.class_size)
            for r in items for g6 in r.attaining
        ]
        return _aligned_csv(header, rows)
    if kind is CheckResult:
        header = ('check', 'n', 'k', 'passed', 'expected', 'observed', 'outside_hypothesis')
        rows = [(r.name, r.n, r.k, 'PASS' if r.passed else 'FAIL', r.expected, r.observed,
                 'yes' if r.outside_hypothesis else '') for r in items]
        return _aligned_csv(header, rows)
    if kind is ConjectureVerdict:
        header = ('n', 'verdict', 'max_azi_value', 'min_abc_value', 'max_azi_graphs', 'min_abc_graphs')
        rows = [(v.n, v.verdict.value, v.max_azi_value, _decimal(v.min_abc_value),
                 ' '.join(v.max_azi_graphs), ' '.join(v.min_abc_graphs)) for v in items]
        return _aligned_csv(header, rows)
    if kind is ClimbTrace:
        header = ('step', 'move', 'azi_exact', 'azi_float', 'graph6')
        rows = [(i + 1, s.move, s.azi_exact, _decimal(s.azi_float), s.graph6)
                for trace in items for i, s in enumerate(trace.steps)]
        return _aligned_csv(header, rows)
    if kind is IndexRecord:
        header = ('graph6', 'index', 'value_exact', 'value_float')
        rows = [(r.graph6, r.index, r.value_exact, _decimal(r.value_float)) for r in items]
        return _aligned_csv(header, rows)
    if kind is FamilyRecord:
        header = ('spec', 'graph6', 'n', 'm', 'azi_exact', 'azi_float', 'abc', 'is_cactus', 'cycle_count')
        rows = [(r.spec, r.graph6, r.n, r.m, r.azi_exact, _decimal(r.azi_float), _decimal(r.abc),
                 r.is_cactus, r.cycle_count) for r in items]
        return _aligned_csv(header, rows)
    header = ('graph6', 'n', 'm')
    return _aligned_csv(header, [(graph6_encode(g), g.n, g.m) for g in items])


def _graph6_lines(kind: type, items: List[Any]) -> str:
    if kind is Graph:
        lines = [graph6_encode(g) for g in items]
    elif kind is ExtremalReport:
        lines = [g6 for r in items for g6 in r.attaining]
    elif kind is ClimbTrace:
        lines = [s.graph6 for trace in items for s in trace.steps]
    elif kind in (FamilyRecord, IndexRecord):
        lines = [r.graph6 for r in items]
    else:
        raise FormatMismatch(f'graph6 output is only available for graph reports, not {kind.__name__}')
    return ''.join(line + '\n' for line in lines)


def _text(kind: type, items: List[Any]) -> str:
    if kind is IndexRecord:
        return ''.join(
            (f'{r.value_exact} {r.value_float!r}' if r.value_exact is not None else f'{r.value_float!r}') + '\n'
            for r in items
        )
    if kind is Graph:
        return _graph6_lines(kind, items)
    if kind is CheckResult:
        return _csv_rows(kind, items)
    return _json(items if len(items) != 1 else items[0])


def format_report(payload: Any, output_format: Optional[OutputFormat]) -> str:
    """
    Render a report. Without an explicit format, index values print as
    "exact float" lines, graphs as graph6, check rows as a pass table and
    everything else as JSON.
    """
    kind = _kind(payload)
    items = _as_list(payload)
    if output_format is None:
        return _text(kind, items)
    if output_format is OutputFormat.JSON:
        return _json(payload)
    if output_format is OutputFormat.CSV:
        return _csv_rows(kind, items)
    return _graph6_lines(kind, items)
