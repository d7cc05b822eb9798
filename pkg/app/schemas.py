from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field


class FamilyKind(str, Enum):
    STAR = 'star'
    PATH = 'path'
    CYCLE = 'cycle'
    G0 = 'g0'
    TPLUS = 'tplus'


class FamilySpec(BaseModel):
    kind: FamilyKind
    n: int
    k: int = 0

    def label(self) -> str:
        if self.kind is FamilyKind.G0:
            return f'{self.kind.value}:{self.n},{self.k}'
        return f'{self.kind.value}:{self.n}'


class EnumSpec(BaseModel):
    n: int
    k: int = 0
    max_results: Optional[int] = Field(None, ge=0)

    @property
    def feasible(self) -> bool:
        return self.n >= 1 and 0 <= self.k <= (self.n - 1) // 2


class PathKind(str, Enum):
    PENDENT = 'pendent'
    INTERNAL = 'internal'


class PathWitness(BaseModel):
    vertices: List[int]
    length: int
    kind: PathKind

    def edge_set(self) -> frozenset:
        return frozenset(
            frozenset(pair) for pair in zip(self.vertices, self.vertices[1:])
        )


class Theorem2Report(BaseModel):
    has_internal_path_ge2: bool
    has_pendent_path_ge4: bool
    pendent_paths_len3: int

    @property
    def passes(self) -> bool:
        return not self.has_internal_path_ge2 and not self.has_pendent_path_ge4 and self.pendent_paths_len3 <= 1


class Direction(str, Enum):
    MIN = 'min'
    MAX = 'max'


class ExtremalReport(BaseModel):
    n: int
    k: int
    index: str
    direction: Direction
    value_exact: Optional[str] = None
    value_float: float
    attaining: List[str]
    class_size: int
    canonical_codes: List[str] = []
    near_ties: List[str] = []
    outside_hypothesis: bool = False

    @property
    def extreme_value(self) -> Union[Fraction, float]:
        if self.value_exact is not None:
            return Fraction(self.value_exact)
        return self.value_float


class Verdict(str, Enum):
    AGREE = 'Agree'
    DISAGREE = 'Disagree'
    NEAR_TIE = 'NearTie'


class ConjectureVerdict(BaseModel):
    n: int
    max_azi_set: List[str]
    min_abc_set: List[str]
    verdict: Verdict
    max_azi_value: str
    min_abc_value: float
    max_azi_graphs: List[str] = []
    min_abc_graphs: List[str] = []
    near_ties: List[str] = []
    outside_hypothesis: bool = False


class CheckResult(BaseModel):
    name: str
    n: Optional[int] = None
    k: Optional[int] = None
    passed: bool
    expected: str = ''
    observed: str = ''
    detail: str = ''
    witnesses: List[str] = []
    outside_hypothesis: bool = False


class ClimbStep(BaseModel):
    move: str
    azi_exact: str
    azi_float: float
    graph6: str


class ClimbTrace(BaseModel):
    n: int
    rng_seed: int
    seed_graph6: str
    steps: List[ClimbStep] = []
    best_graph6: str
    best_azi_exact: str
    best_azi_float: float


class OutputFormat(str, Enum):
    JSON = 'json'
    CSV = 'csv'
    GRAPH6 = 'graph6'


class RunConfig(BaseModel):
    subcommand: str
    parameters: Dict[str, Any] = {}
    output_format: Optional[OutputFormat] = None
    output_path: Optional[str] = None
    worker_count: int = Field(1, ge=1)
    rng_seed: int = 0


class IndexRecord(BaseModel):
    graph6: str
    index: str
    value_exact: Optional[str] = None
    value_float: float


class FamilyRecord(BaseModel):
    spec: str
    graph6: str
    n: int
    m: int
    azi_exact: Optional[str] = None
    azi_float: Optional[float] = None
    abc: Optional[float] = None
    is_cactus: bool
    cycle_count: Optional[int] = None
    paths: List[PathWitness] = []
    star_type_pendent_vertices: List[int] = []
    every_edge_deg2_incident: bool
    theorem2: Optional[Theorem2Report] = None
