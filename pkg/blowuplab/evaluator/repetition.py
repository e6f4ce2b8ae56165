import math

from typing import List

import numpy as np

from blowuplab import settings
from blowuplab.core.weights import (
    expanded_nodes,
    inequality_gap,
    lagrange_weights,
    repetition_gap,
    repetition_weights,
)
from blowuplab.evaluator.base_evaluator import BaseEvaluator, SuiteSummary
from blowuplab.evaluator.sampling import positive_sample, sample_repetition_spec
from blowuplab.manager.suite_manager import SuiteManager
from blowuplab.utils.aggregators import Aggregator
from blowuplab.utils.errors import InvalidConfig
from blowuplab.utils.typing import Chunk, RepetitionSpec, SuiteConfig, ViolationRecord

REDUCTION_TOL = 1e-12


class RepetitionEvaluator(BaseEvaluator):
    """Weights and gap of the inequality with repeated nodes ``j x_i``.

    Per sample: the all-ones multiplicities reproduce the Lagrange weights,
    the gap of a random multiplicity pattern equals the plain gap on the
    expanded nodes, and that gap is positive.
    """

    name = "repetition"

    def __init__(self, config: SuiteConfig):
        super().__init__(config)
        if config.n_range[1] > config.max_total_r:
            raise InvalidConfig(
                f"n_range {config.n_range} exceeds max_total_r={config.max_total_r}"
            )

    def chunks(self) -> List[Chunk]:
        lo, hi = self.config.n_range
        out = []
        for n in range(lo, hi + 1):
            out.extend(self._index_chunks("valid", n, self.config.samples))
        return out

    def empty_report(self) -> SuiteSummary:
        return SuiteSummary(self.name, seed=self.config.seed)

    def evaluate_chunk(self, chunk: Chunk) -> SuiteSummary:
        cfg = self.config
        summary = self.empty_report()
        for index in range(chunk.start, chunk.stop):
            summary.total += 1

            x = positive_sample(chunk.n, cfg.seed, cfg.x_max, index)
            ones = RepetitionSpec(tuple(x.tolist()), (1,) * chunk.n)
            plain = lagrange_weights(x)
            reduced = np.concatenate(repetition_weights(ones))
            error = float(np.max(np.abs(reduced - plain))) / max(
                1.0, float(np.max(np.abs(plain)))
            )
            summary.record("max_reduction_error", error)
            if error > REDUCTION_TOL:
                summary.violations.append(
                    ViolationRecord(
                        index, "reduction", {"x": x.tolist(), "error": error}
                    )
                )

            spec = sample_repetition_spec(
                chunk.n, cfg.seed, cfg.x_max, cfg.max_total_r, index
            )
            detail = {"x": list(spec.x), "r": list(spec.r)}
            gap = repetition_gap(spec)
            nodes = expanded_nodes(spec)
            expected = inequality_gap(nodes)
            terms = np.concatenate(repetition_weights(spec)) * np.log1p(nodes)
            scale = max(1.0, math.fsum(np.abs(terms)))
            residual = abs(gap - expected) / scale
            summary.record("max_expanded_residual", residual)
            summary.record("min_gap", gap, Aggregator.MIN)
            if residual > settings.TAU_ID:
                summary.violations.append(
                    ViolationRecord(index, "expanded", {**detail, "residual": residual})
                )
            if not gap > 0:
                summary.violations.append(
                    ViolationRecord(index, "positivity", {**detail, "gap": gap})
                )
        return summary


def repetition_consistency_suite(cfg: SuiteConfig, workers: int = 1) -> SuiteSummary:
    return SuiteManager(workers).run(RepetitionEvaluator(cfg))
