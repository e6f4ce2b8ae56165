import json

from abc import ABCMeta, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional

from blowuplab import settings
from blowuplab.utils.aggregators import Aggregator
from blowuplab.utils.logger import get_logger
from blowuplab.utils.typing import (
    Chunk,
    FailureRecord,
    MetricEntry,
    SuiteConfig,
    ViolationRecord,
)
from blowuplab.utils.errors import InvalidConfig


# domains whose failures break the pass condition
VALID_DOMAINS = ("valid", "equality")


@dataclass
class VerificationReport:
    """Counts of one inequality suite, mergeable in any order."""

    total: int = 0
    holds: int = 0
    equalities: int = 0
    failures: List[FailureRecord] = field(default_factory=list)
    undefined: int = 0
    ill_defined: int = 0
    min_gap: Optional[float] = None
    seed: int = settings.DEFAULT_SEED
    # constructed zero-coordinate cases and those not classified as equality,
    # plus random valid samples that were
    expected_equalities: int = 0
    equality_mismatches: int = 0

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        if self.seed != other.seed:
            raise ValueError(f"cannot merge reports of seeds {self.seed} and {other.seed}")
        add = Aggregator.get(Aggregator.SUM)
        return VerificationReport(
            total=add.apply([self.total, other.total]),
            holds=add.apply([self.holds, other.holds]),
            equalities=add.apply([self.equalities, other.equalities]),
            failures=sorted(self.failures + other.failures, key=lambda r: r.key),
            undefined=add.apply([self.undefined, other.undefined]),
            ill_defined=add.apply([self.ill_defined, other.ill_defined]),
            min_gap=Aggregator.get(Aggregator.MIN).apply([self.min_gap, other.min_gap]),
            seed=self.seed,
            expected_equalities=add.apply(
                [self.expected_equalities, other.expected_equalities]
            ),
            equality_mismatches=add.apply(
                [self.equality_mismatches, other.equality_mismatches]
            ),
        )

    @property
    def passed(self) -> bool:
        """No failure on the nonnegative domain and equality exactly on the
        constructed zero-coordinate cases. Extended probes never fail a run."""

        return (
            not any(r.domain in VALID_DOMAINS for r in self.failures)
            and self.equality_mismatches == 0
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "total": self.total,
            "holds": self.holds,
            "equalities": self.equalities,
            "failures": [r.to_dict() for r in self.failures],
            "undefined": self.undefined,
            "ill_defined": self.ill_defined,
            "min_gap": self.min_gap,
            "seed": self.seed,
            "schema_version": settings.SCHEMA_VERSION,
        }

    def __serialize__(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


@dataclass
class SuiteSummary:
    """Violations and worst-case metrics of a consistency suite."""

    name: str
    total: int = 0
    violations: List[ViolationRecord] = field(default_factory=list)
    metrics: Dict[str, MetricEntry] = field(default_factory=dict)
    seed: int = settings.DEFAULT_SEED

    def record(self, name: str, value: float, agg: str = Aggregator.MAX) -> None:
        """Fold one observation into the metric ``name``."""

        entry = self.metrics.get(name)
        if entry is None:
            self.metrics[name] = MetricEntry(value, agg=agg)
        else:
            entry.value = Aggregator.get(agg).apply([entry.value, value])

    def merge(self, other: "SuiteSummary") -> "SuiteSummary":
        if (self.name, self.seed) != (other.name, other.seed):
            raise ValueError(
                f"cannot merge summaries {self.name}/{self.seed} and {other.name}/{other.seed}"
            )
        merged = SuiteSummary(
            name=self.name,
            total=self.total + other.total,
            violations=sorted(self.violations + other.violations, key=lambda r: r.key),
            seed=self.seed,
        )
        for source in (self.metrics, other.metrics):
            for key, entry in source.items():
                merged.record(key, entry.value, entry.agg)
        return merged

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.name,
            "total": self.total,
            "violations": [v.to_dict() for v in self.violations],
            "metrics": {k: self.metrics[k].value for k in sorted(self.metrics)},
            "passed": self.passed,
            "seed": self.seed,
            "schema_version": settings.SCHEMA_VERSION,
        }

    def __serialize__(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


class BaseEvaluator(metaclass=ABCMeta):
    """Abstract base class for verification suites.

    A suite is split into chunks whose layout only depends on the
    configuration; chunks are evaluated independently and their reports
    folded with ``merge``.
    """

    name = "base"

    def __init__(self, config: SuiteConfig):
        lo, hi = config.n_range
        if not 1 <= lo <= hi:
            raise InvalidConfig(f"n_range must satisfy 1 <= lo <= hi, got {config.n_range}")
        if config.samples < 1:
            raise InvalidConfig(f"samples must be at least 1, got {config.samples}")
        if not config.x_max > 0:
            raise InvalidConfig(f"x_max must be positive, got {config.x_max}")
        self._config = config
        self.logger = get_logger(name=f"blowuplab.evaluator.{self.name}")

    @property
    def config(self) -> SuiteConfig:
        return self._config

    def _index_chunks(self, domain: str, n: int, count: int) -> List[Chunk]:
        return [
            Chunk(domain, n, start, min(start + settings.CHUNK_SIZE, count))
            for start in range(0, count, settings.CHUNK_SIZE)
        ]

    @abstractmethod
    def chunks(self) -> List[Chunk]:
        """Split the suite into independent units of work."""

    @abstractmethod
    def evaluate_chunk(self, chunk: Chunk) -> Any:
        """Evaluate one chunk into a partial report."""

    @abstractmethod
    def empty_report(self) -> Any:
        """Neutral element of ``merge``."""

    def reduce(self, reports: Iterable[Any]) -> Any:
        result = self.empty_report()
        for report in reports:
            result = result.merge(report)
        return result

    def evaluate(self) -> Any:
        """Run every chunk in-process."""

        reports = []
        for chunk in self.chunks():
            reports.append(self.evaluate_chunk(chunk))
            self.logger.debug(f"{self.name}: chunk {chunk} done")
        return self.reduce(reports)
