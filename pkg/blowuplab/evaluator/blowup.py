import math

from typing import List, Tuple

import numpy as np

from blowuplab import settings
from blowuplab.core.partial_fractions import decompose_positive_side
from blowuplab.core.weights import lagrange_weights, inequality_gap
from blowuplab.evaluator.base_evaluator import BaseEvaluator, SuiteSummary
from blowuplab.evaluator.sampling import sample_cauchy_problem
from blowuplab.manager.suite_manager import SuiteManager
from blowuplab.ode.blowup import (
    analytic_blowup_time,
    numeric_blowup_time,
    quadrature_blowup_time,
    substitution_point,
)
from blowuplab.utils.aggregators import Aggregator
from blowuplab.utils.errors import NumericalFailure, SeparationViolation
from blowuplab.utils.typing import (
    BlowupReport,
    CauchyProblem,
    Chunk,
    SuiteConfig,
    ViolationRecord,
)

NUMERIC_REL_TOL = 1e-3
QUADRATURE_REL_TOL = 1e-8
CLOSED_FORM_REL_TOL = 1e-12

# problems with known blow-up times and bounds: (k, y0, time, bound)
FIXED_CASES: Tuple[Tuple[Tuple[float, ...], float, float, float], ...] = (
    ((1.0,), -1.0, math.log(2.0), 1.0),
    ((1.0, 2.0), -1.0, math.log(4.0 / 3.0), 1.0),
    ((1.0, 2.0), 4.0, math.log(9.0 / 8.0), 1.0 / 6.0),
    ((1.0,), 2.0, math.log(2.0), 1.0),
)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def _closed_form_bound(p: CauchyProblem) -> float:
    """``prod k_i / (n |y0|^n)`` below 0, ``prod k_i / (n prod (y0 - k_i))`` above."""

    k = np.asarray(p.k, dtype=float)
    if p.y0 < 0:
        return float(np.prod(k)) / (k.size * abs(p.y0) ** k.size)
    return float(np.prod(k)) / (k.size * float(np.prod(p.y0 - k)))


class BlowupEvaluator(BaseEvaluator):
    """Check closed-form blow-up times against their bound, quadrature of
    their integral representation and numerical integration.

    ``samples`` is the number of random problems; ``n`` is drawn per problem
    from ``n_range``. The ``fixed`` chunk holds :data:`FIXED_CASES`.
    """

    name = "blowup"

    def chunks(self) -> List[Chunk]:
        return [Chunk("fixed", 0, 0, len(FIXED_CASES))] + self._index_chunks(
            "random", 0, self.config.samples
        )

    def empty_report(self) -> SuiteSummary:
        return SuiteSummary(self.name, seed=self.config.seed)

    def check_problem(self, summary: SuiteSummary, index: int, p: CauchyProblem):
        detail = {"k": list(p.k), "y0": p.y0}
        report = analytic_blowup_time(p)
        summary.record(
            "min_bound_margin",
            (report.bound - report.analytic_time) / report.bound,
            Aggregator.MIN,
        )
        if not 0 < report.analytic_time < report.bound:
            summary.violations.append(
                ViolationRecord(index, "bound", {**detail, **report.to_dict()})
            )

        quad = quadrature_blowup_time(p)
        residual = _rel(quad, report.analytic_time)
        summary.record("max_quadrature_residual", residual)
        if residual > QUADRATURE_REL_TOL:
            summary.violations.append(
                ViolationRecord(index, "quadrature", {**detail, "residual": residual})
            )

        try:
            numeric = numeric_blowup_time(p)
        except NumericalFailure as e:
            summary.violations.append(
                ViolationRecord(index, "numeric", {**detail, "error": str(e)})
            )
        else:
            residual = _rel(numeric, report.analytic_time)
            summary.record("max_numeric_residual", residual)
            if residual > NUMERIC_REL_TOL:
                summary.violations.append(
                    ViolationRecord(index, "numeric", {**detail, "residual": residual})
                )

        self.check_substitution(summary, index, p, report)

    def check_substitution(
        self, summary: SuiteSummary, index: int, p: CauchyProblem, report: BlowupReport
    ):
        """The substituted point turns time and bound into weighted logs and
        ``prod(x) / n``: Lagrange weights below 0, positive-side residues
        above ``k_n``."""

        x = substitution_point(p)
        try:
            gap = inequality_gap(x)
            if p.y0 < 0:
                weights = lagrange_weights(x)
            else:
                weights = np.asarray(decompose_positive_side(p.k).residues)
        except SeparationViolation:
            return
        terms = weights * np.log1p(x)
        scale = max(1.0, math.fsum(np.abs(terms)))
        deviation = abs(math.fsum(terms) - report.analytic_time) / scale
        bound = max(
            _rel(float(np.prod(x)) / x.size, report.bound),
            _rel(report.bound, _closed_form_bound(p)),
        )
        summary.record("max_substitution_residual", deviation)
        summary.record("max_substitution_bound_residual", bound)
        if deviation > settings.TAU_ID or bound > settings.TAU_ID or not gap > 0:
            summary.violations.append(
                ViolationRecord(
                    index,
                    "substitution",
                    {
                        "k": list(p.k),
                        "y0": p.y0,
                        "residual": deviation,
                        "bound_residual": bound,
                        "gap": gap,
                    },
                )
            )

    def evaluate_chunk(self, chunk: Chunk) -> SuiteSummary:
        summary = self.empty_report()
        for index in range(chunk.start, chunk.stop):
            summary.total += 1
            if chunk.domain == "fixed":
                k, y0, time, bound = FIXED_CASES[index]
                p = CauchyProblem(k, y0)
                report = analytic_blowup_time(p)
                if (
                    _rel(report.analytic_time, time) > CLOSED_FORM_REL_TOL
                    or _rel(report.bound, bound) > CLOSED_FORM_REL_TOL
                ):
                    summary.violations.append(
                        ViolationRecord(
                            index, "closed_form", {"k": list(k), **report.to_dict()}
                        )
                    )
                self.check_problem(summary, index, p)
            else:
                p = sample_cauchy_problem(self.config.n_range, self.config.seed, index)
                self.check_problem(summary, len(FIXED_CASES) + index, p)
        return summary


def run_blowup_suite(cfg: SuiteConfig, workers: int = 1) -> SuiteSummary:
    """Closed form, quadrature and numerical integration for every problem."""

    return SuiteManager(workers).run(BlowupEvaluator(cfg))
