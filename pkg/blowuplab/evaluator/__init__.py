from typing import Callable

from .base_evaluator import BaseEvaluator as Evaluator
from .base_evaluator import VerificationReport, SuiteSummary
from .inequality import InequalityEvaluator, run_inequality_suite
from .blowup import BlowupEvaluator, run_blowup_suite
from .cross_route import CrossRouteEvaluator, cross_route_check, run_cross_route_suite
from .repetition import RepetitionEvaluator, repetition_consistency_suite


class EvaluatorType:
    GEN = "gen"
    BLOWUP = "blowup"
    CROSSROUTE = "crossroute"
    REPETITION = "repetition"

    def __repr__(self):
        return "<EvaluatorType: [gen, blowup, crossroute, repetition]>"


def get_evaluator(name: str) -> Callable:
    if name == EvaluatorType.GEN:
        return InequalityEvaluator
    elif name == EvaluatorType.BLOWUP:
        return BlowupEvaluator
    elif name == EvaluatorType.CROSSROUTE:
        return CrossRouteEvaluator
    elif name == EvaluatorType.REPETITION:
        return RepetitionEvaluator
    else:
        raise ValueError(
            f"Expected evaluator type: {EvaluatorType()}, while the input is: {name}"
        )
