import math

from typing import List

import numpy as np

from blowuplab import settings
from blowuplab.core.divdiff import (
    deficit_integral,
    divided_difference,
    f_log1p_over_x,
    scaled_sum_integral,
)
from blowuplab.core.logspace import lagrange_ratios, signed_log_prod
from blowuplab.core.nodes import as_nodeset
from blowuplab.evaluator.base_evaluator import BaseEvaluator, SuiteSummary
from blowuplab.evaluator.sampling import positive_sample
from blowuplab.manager.suite_manager import SuiteManager
from blowuplab.utils.errors import ConsistencyViolation
from blowuplab.utils.typing import Chunk, RealSequence, SuiteConfig, ViolationRecord


def _roundoff(n: int) -> float:
    """Relative round-off of the Newton tableau on ascending nodes."""

    return n * 2.0**n * np.finfo(float).eps


def cross_route_check(x: RealSequence) -> float:
    """Compare ``sum_i a_i log1p(x_i)`` with ``prod(x) sum_i f(x_i) / prod_{j != i} (x_j - x_i)``.

    The first sum comes from the Lagrange weights. The second is
    ``(-1)^(n-1) [x_1, ..., x_n; f]`` for ``f(x) = log1p(x) / x``, taken from
    the Newton tableau, times ``prod(x)``. Both are also compared with the
    integral ``int_0^1 s^(n-1) / prod_i (1 + s x_i) ds``. Residuals are scaled
    by ``max(1, sum_i |a_i log1p(x_i)|)``.

    ``n * value < 1`` is tested on the divided difference; when round-off
    covers the margin the cancellation-free deficit decides.

    :raises SeparationViolation: If two coordinates coincide.
    :raises ConsistencyViolation: If a residual exceeds ``TAU_ID`` or the
        strict bound fails.
    """

    arr = as_nodeset(x)
    n = arr.size
    prod = signed_log_prod(arr).value
    terms = lagrange_ratios(arr) * np.log1p(arr)
    weighted = math.fsum(terms)
    magnitude = math.fsum(np.abs(terms))
    scale = max(1.0, magnitude)

    value = (-1.0) ** (n - 1) * divided_difference(arr, f_log1p_over_x)
    residual = abs(weighted - prod * value) / scale
    if residual > settings.TAU_ID:
        raise ConsistencyViolation(
            f"routes disagree at x={arr.tolist()}: {weighted!r} vs {prod * value!r}"
        )
    integral = prod * scaled_sum_integral(arr)
    if abs(weighted - integral) / scale > settings.TAU_ID:
        raise ConsistencyViolation(
            f"integral route disagrees at x={arr.tolist()}: {weighted!r} vs {integral!r}"
        )

    margin = 1.0 - n * value
    slack = n * _roundoff(n) * magnitude / prod
    if margin > slack:
        return residual
    if margin < -slack or not deficit_integral(arr) > 0:
        raise ConsistencyViolation(
            f"n * divided difference {n * value!r} is not below 1 at x={arr.tolist()}"
        )
    return residual


class CrossRouteEvaluator(BaseEvaluator):
    name = "crossroute"

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
            x = positive_sample(chunk.n, cfg.seed, cfg.x_max, index)
            summary.total += 1
            try:
                summary.record("max_residual", cross_route_check(x))
            except ConsistencyViolation as e:
                summary.violations.append(
                    ViolationRecord(
                        index,
                        "cross_route",
                        {"n": chunk.n, "x": x.tolist(), "error": str(e)},
                    )
                )
        return summary


def run_cross_route_suite(cfg: SuiteConfig, workers: int = 1) -> SuiteSummary:
    return SuiteManager(workers).run(CrossRouteEvaluator(cfg))
