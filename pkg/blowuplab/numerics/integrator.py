"""
Embedded Runge-Kutta stepping for scalar autonomous fields.
"""

import math

from typing import Callable, Tuple


class CashKarp54:
    """Cash-Karp 5(4) pair. Six stages, 5th order propagation with an
    embedded 4th order error estimate."""

    # order of the embedded estimate, sets the step-size exponent
    order = 4

    # rows 0-4 build stages 2-6, row 5 is the propagating solution
    BT = {
        0: [1 / 5],
        1: [3 / 40, 9 / 40],
        2: [3 / 10, -9 / 10, 6 / 5],
        3: [-11 / 54, 5 / 2, -70 / 27, 35 / 27],
        4: [1631 / 55296, 175 / 512, 575 / 13824, 44275 / 110592, 253 / 4096],
        5: [37 / 378, 0, 250 / 621, 125 / 594, 0, 512 / 1771],
    }

    # 5th minus 4th order weights
    TR = [-277 / 64512, 0, 6925 / 370944, -6925 / 202752, -277 / 14336, 277 / 7084]

    SAFETY = 0.9
    MIN_FACTOR = 0.2
    MAX_FACTOR = 5.0

    def step(
        self, field: Callable[[float], float], y: float, h: float
    ) -> Tuple[float, float]:
        """Advance ``y' = field(y)`` by ``h``.

        :return: The 5th order solution and the signed local error estimate.
        """

        slopes = [field(y)]
        for row in range(5):
            coeffs = self.BT[row]
            slopes.append(
                field(y + h * math.fsum(c * s for c, s in zip(coeffs, slopes)))
            )
        y_new = y + h * math.fsum(c * s for c, s in zip(self.BT[5], slopes))
        err = h * math.fsum(c * s for c, s in zip(self.TR, slopes))
        return y_new, err

    def error_ratio(
        self, y: float, y_new: float, err: float, rtol: float, atol: float
    ) -> float:
        """Local error over the mixed tolerance, below one means accept."""

        scale = atol + rtol * max(abs(y), abs(y_new))
        return abs(err) / scale

    def step_factor(self, ratio: float) -> float:
        """Multiplier for the next step from the current error ratio."""

        if ratio == 0:
            return self.MAX_FACTOR
        if not math.isfinite(ratio):
            return self.MIN_FACTOR
        factor = self.SAFETY * ratio ** (-1.0 / (self.order + 1))
        return min(self.MAX_FACTOR, max(self.MIN_FACTOR, factor))
