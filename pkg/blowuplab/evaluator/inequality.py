from typing import List

import numpy as np

from blowuplab.core.weights import check_point
from blowuplab.evaluator.base_evaluator import BaseEvaluator, VerificationReport
from blowuplab.manager.suite_manager import SuiteManager
from blowuplab.evaluator.sampling import (
    PROBE_POINTS,
    equality_case,
    extended_sample,
    positive_sample,
)
from blowuplab.utils.typing import Chunk, FailureRecord, PointClass, SuiteConfig


class InequalityEvaluator(BaseEvaluator):
    """Classify random points of the exponential inequality.

    ``valid`` chunks draw log-uniform positive points; with equality cases on,
    each is followed by a copy with one coordinate zeroed (domain
    ``equality``). ``extended`` chunks draw mixed-sign points and ``probe``
    holds the fixed mixed-sign points.
    """

    name = "gen"

    def chunks(self) -> List[Chunk]:
        cfg = self.config
        lo, hi = cfg.n_range
        out = []
        for n in range(lo, hi + 1):
            out.extend(self._index_chunks("valid", n, cfg.samples))
        if cfg.include_extended_domain:
            out.append(Chunk("probe", 2, 0, len(PROBE_POINTS)))
            for n in range(lo, hi + 1):
                out.extend(self._index_chunks("extended", n, cfg.samples))
        return out

    def empty_report(self) -> VerificationReport:
        return VerificationReport(seed=self.config.seed)

    def _points(self, chunk: Chunk):
        cfg = self.config
        for index in range(chunk.start, chunk.stop):
            if chunk.domain == "probe":
                yield "probe", index, np.array(PROBE_POINTS[index])
            elif chunk.domain == "extended":
                yield "extended", index, extended_sample(chunk.n, cfg.seed, index)
            else:
                x = positive_sample(chunk.n, cfg.seed, cfg.x_max, index)
                yield "valid", index, x
                if cfg.include_equality_cases:
                    yield "equality", index, equality_case(x, cfg.seed, index)

    def evaluate_chunk(self, chunk: Chunk) -> VerificationReport:
        report = self.empty_report()
        gaps = []
        for domain, index, x in self._points(chunk):
            check = check_point(x)
            report.total += 1
            if check.point_class is PointClass.HOLDS:
                report.holds += 1
                if domain == "valid":
                    gaps.append(check.gap)
            elif check.point_class is PointClass.EQUALITY:
                report.equalities += 1
            elif check.point_class is PointClass.FAILS:
                report.failures.append(
                    FailureRecord(domain, x.size, index, tuple(x.tolist()), check.gap)
                )
            elif check.point_class is PointClass.ILL_DEFINED_ZERO_POW:
                report.ill_defined += 1
            else:
                report.undefined += 1

            if domain == "equality":
                report.expected_equalities += 1
            if (domain == "equality") != (check.point_class is PointClass.EQUALITY):
                if domain in ("valid", "equality"):
                    report.equality_mismatches += 1
        if gaps:
            report.min_gap = float(min(gaps))
        return report


def run_inequality_suite(cfg: SuiteConfig, workers: int = 1) -> VerificationReport:
    """Classify every sample of the suite, in parallel when ``workers > 1``."""

    return SuiteManager(workers).run(InequalityEvaluator(cfg))
