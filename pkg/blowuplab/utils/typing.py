import enum
import math
from dataclasses import dataclass, field
from typing import List, Dict, Any, Union, Tuple, Sequence, Callable, Optional

import numpy as np

from blowuplab import settings

""" Rename and definition of basic data types which are correspond to the inputs (args, kwargs) """
RealSequence = Sequence[float]
# validated float arrays, see blowuplab.core.nodes
XVector = np.ndarray
KVector = np.ndarray
NodeSet = np.ndarray
WeightVector = np.ndarray
RealFunction = Callable[[Union[float, np.ndarray]], Union[float, np.ndarray]]


""" For point classification and status tagging """


class PointClass(enum.Enum):
    HOLDS = "holds"
    EQUALITY = "equality"
    FAILS = "fails"
    UNDEFINED_BASE = "undefined_base"
    ILL_DEFINED_ZERO_POW = "ill_defined_zero_pow"
    DIVISION_BY_ZERO_WEIGHT = "division_by_zero_weight"


class Side(enum.Enum):
    """Side of the real line a partial fraction decomposition is valid on"""

    NEGATIVE = "negative"
    """x < 0"""

    POSITIVE = "positive"
    """x > k_n"""


class Direction(enum.Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


class BlowupDirection(enum.Enum):
    NONE = "none"
    PAST = "past"
    FUTURE = "future"


class FateTag(enum.Enum):
    EQUILIBRIUM_EXACT = "equilibrium_exact"
    GLOBAL_BOTH_DIRECTIONS = "global_both_directions"
    POSITIVELY_GLOBAL_PAST_BLOWUP = "positively_global_past_blowup"
    NEGATIVELY_GLOBAL_FUTURE_BLOWUP = "negatively_global_future_blowup"
    POSITIVELY_GLOBAL_PAST_BLOWUP_NEGATIVE_BRANCH = (
        "positively_global_past_blowup_negative_branch"
    )


class TerminalStatus(enum.Enum):
    REACHED_HORIZON = "reached_horizon"
    ESCAPED = "escaped"
    STIFF_FAILURE = "stiff_failure"


""" Description: """


@dataclass(frozen=True)
class RepetitionSpec:
    x: Tuple[float, ...]
    r: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def m(self) -> int:
        return int(sum(self.r))


@dataclass(frozen=True)
class Decomposition:
    """Partial fraction coefficients of prod(k) / (x * prod(x - k_i)) on one side."""

    side: Side
    leading: float
    """A on the negative side, B on the positive side"""

    residues: Tuple[float, ...]
    """A_i or B_i"""


@dataclass(frozen=True)
class CMDerivativeQuery:
    order: int
    point: float


@dataclass(frozen=True)
class CauchyProblem:
    k: Tuple[float, ...]
    y0: float

    @property
    def n(self) -> int:
        return len(self.k)


@dataclass(frozen=True)
class QualitativeFate:
    tag: FateTag
    blowup_direction: BlowupDirection = BlowupDirection.NONE


@dataclass(frozen=True)
class IntegratorOptions:
    rtol: float = settings.INTEGRATOR_RTOL
    atol: float = settings.INTEGRATOR_ATOL
    growth_cap: float = settings.GROWTH_CAP
    max_steps: int = settings.INTEGRATOR_MAX_STEPS
    first_step: Optional[float] = None
    # None means Y_ESCAPE_FACTOR * max(1, k_n, |y0|)
    y_escape: Optional[float] = None
    escape_tail_fraction: float = settings.ESCAPE_TAIL_FRACTION
    raise_on_failure: bool = True


@dataclass(frozen=True, eq=False)
class Trajectory:
    t: np.ndarray
    y: np.ndarray
    terminal_status: TerminalStatus

    def __post_init__(self):
        self.t.setflags(write=False)
        self.y.setflags(write=False)

    @property
    def samples(self) -> List[Tuple[float, float]]:
        return list(zip(self.t.tolist(), self.y.tolist()))

    @property
    def terminal_time(self) -> float:
        return float(self.t[-1])

    @property
    def terminal_value(self) -> float:
        return float(self.y[-1])

    def __len__(self) -> int:
        return len(self.t)

    def __serialize__(self) -> str:
        lines = ["t,y"]
        lines.extend(f"{t:.17g},{y:.17g}" for t, y in zip(self.t, self.y))
        return "\n".join(lines) + "\n"


@dataclass
class BlowupReport:
    direction: BlowupDirection
    analytic_time: float
    bound: float
    numeric_time: Optional[float] = None
    residual: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "direction": self.direction.value,
            "analytic_time": self.analytic_time,
            "bound": self.bound,
            "numeric_time": self.numeric_time,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class SuiteConfig:
    n_range: Tuple[int, int] = (1, 6)
    samples: int = 10000
    seed: int = settings.DEFAULT_SEED
    x_max: float = 10.0
    include_equality_cases: bool = False
    include_extended_domain: bool = False
    max_total_r: int = 10


@dataclass(frozen=True)
class Chunk:
    """A contiguous run of sample indices of one suite, the unit of parallel work."""

    domain: str
    n: int
    start: int
    stop: int

    def __len__(self) -> int:
        return self.stop - self.start


@dataclass(frozen=True)
class FailureRecord:
    """A point where the inequality was observed to fail, kept replayable."""

    domain: str
    n: int
    index: int
    x: Tuple[float, ...]
    gap: float

    @property
    def key(self) -> Tuple[str, int, int]:
        return (self.domain, self.n, self.index)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "domain": self.domain,
            "n": self.n,
            "index": self.index,
            "x": [float(f"{v:.17g}") for v in self.x],
            "gap": self.gap if math.isfinite(self.gap) else repr(self.gap),
        }


@dataclass(frozen=True)
class ViolationRecord:
    index: int
    check: str
    detail: Dict[str, Any] = field(default_factory=dict)

    @property
    def key(self) -> Tuple[str, int, str]:
        return (self.check, self.index, repr(sorted(self.detail.items())))

    def to_dict(self) -> Dict[str, Any]:
        return {"index": self.index, "check": self.check, **self.detail}


class MetricEntry:
    def __init__(self, value: Any, agg: str = "max", tag: str = ""):
        self.value = value
        self.agg = agg
        self.tag = tag

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MetricEntry)
            and self.value == other.value
            and self.agg == other.agg
        )

    def __repr__(self) -> str:
        return f"MetricEntry(value={self.value!r}, agg={self.agg!r})"
