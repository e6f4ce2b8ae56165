"""
Signed log-magnitude arithmetic for products of signed factors.

A product is carried as ``(sign, log|value|)`` with ``sign`` in {-1, 0, +1};
a zero product is ``(0, -inf)``. Values are only recombined at the end,
so long products of small or large differences neither overflow nor
underflow on the way.
"""

import math

from typing import NamedTuple

import numpy as np

from blowuplab.utils.typing import RealSequence


class SignedLog(NamedTuple):
    sign: float
    log_abs: float

    @property
    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_abs)

    def __mul__(self, other: "SignedLog") -> "SignedLog":
        if self.sign == 0 or other.sign == 0:
            return ZERO
        return SignedLog(self.sign * other.sign, self.log_abs + other.log_abs)

    def __truediv__(self, other: "SignedLog") -> "SignedLog":
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero signed-log product")
        if self.sign == 0:
            return ZERO
        return SignedLog(self.sign * other.sign, self.log_abs - other.log_abs)


ONE = SignedLog(1.0, 0.0)
ZERO = SignedLog(0.0, -math.inf)


def signed_log_prod(values: RealSequence) -> SignedLog:
    """Product of ``values`` in sign / log-magnitude form, empty product is one."""

    arr = np.asarray(values, dtype=float).ravel()
    if arr.size == 0:
        return ONE
    if np.any(arr == 0.0):
        return ZERO
    sign = float(np.prod(np.sign(arr)))
    return SignedLog(sign, float(np.sum(np.log(np.abs(arr)))))


def lagrange_ratios(nodes: RealSequence) -> np.ndarray:
    """Return ``prod_{j != i} x_j / prod_{j != i} (x_j - x_i)`` for every i.

    These are the Lagrange basis polynomials of ``nodes`` evaluated at 0.
    Nodes must be pairwise distinct; callers validate separation.
    """

    x = np.asarray(nodes, dtype=float).ravel()
    # row i holds x_j and x_j - x_i, with ones on the diagonal
    num = np.tile(x, (x.size, 1))
    den = num - x[:, None]
    np.fill_diagonal(num, 1.0)
    np.fill_diagonal(den, 1.0)
    sign = np.prod(np.sign(num), axis=1) * np.prod(np.sign(den), axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_abs = np.sum(np.log(np.abs(num)), axis=1) - np.sum(
            np.log(np.abs(den)), axis=1
        )
        # a zero node zeroes every other row: sign 0, log -inf
        return np.where(sign == 0, 0.0, sign * np.exp(log_abs))
