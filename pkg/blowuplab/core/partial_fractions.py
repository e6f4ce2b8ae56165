"""
Partial fractions of ``prod(k) / (x prod(x - k_i))`` on either side of its poles.

On the negative side (x < 0)::

    prod k_i / (-x prod (k_i - x)) = A / (-x) + sum_i A_i / (k_i - x)

and on the positive side (x > k_n)::

    prod k_i / (x prod (x - k_i)) = B / x + sum_i B_i / (x - k_i)

with ``A = 1``, ``B = (-1)^n`` and ``B_i = (-1)^n A_i``.
"""

import math

from typing import Union

import numpy as np

from blowuplab.core.logspace import lagrange_ratios, signed_log_prod
from blowuplab.core.nodes import as_kvector
from blowuplab.utils.errors import PoleViolation, DomainViolation
from blowuplab.utils.typing import Decomposition, RealSequence, Side


def _as_side(side: Union[Side, str]) -> Side:
    try:
        return Side(side)
    except ValueError:
        raise DomainViolation(f"unknown side: {side!r}")


def decompose_negative_side(k: RealSequence) -> Decomposition:
    """``A = 1`` and ``A_i = -prod_{j != i} k_j / prod_{j != i} (k_j - k_i)``."""

    residues = -lagrange_ratios(as_kvector(k))
    return Decomposition(Side.NEGATIVE, 1.0, tuple(residues.tolist()))


def decompose_positive_side(k: RealSequence) -> Decomposition:
    """``B = (-1)^n`` and ``B_i = (-1)^n A_i``."""

    kv = as_kvector(k)
    sign = -1.0 if kv.size % 2 else 1.0
    residues = -sign * lagrange_ratios(kv)
    return Decomposition(Side.POSITIVE, sign, tuple(residues.tolist()))


def decompose(k: RealSequence, side: Union[Side, str]) -> Decomposition:
    if _as_side(side) is Side.NEGATIVE:
        return decompose_negative_side(k)
    return decompose_positive_side(k)


def _check_pole(kv: np.ndarray, x: float, side: Side) -> None:
    if x == 0 or np.any(kv == x):
        raise PoleViolation(f"x={x!r} is a pole of the rational function")
    if side is Side.NEGATIVE and not x < 0:
        raise PoleViolation(f"negative-side decomposition needs x < 0, got {x!r}")
    if side is Side.POSITIVE and not x > kv[-1]:
        raise PoleViolation(
            f"positive-side decomposition needs x > k_n = {float(kv[-1])!r}, got {x!r}"
        )


def evaluate_rational(
    k: RealSequence, x: float, side: Union[Side, str] = Side.NEGATIVE
) -> float:
    """Evaluate the rational function by its product form.

    :raises PoleViolation: At a pole or on the wrong side of the poles.
    """

    kv = as_kvector(k)
    side = _as_side(side)
    x = float(x)
    _check_pole(kv, x, side)
    if side is Side.NEGATIVE:
        den = signed_log_prod([-x]) * signed_log_prod(kv - x)
    else:
        den = signed_log_prod([x]) * signed_log_prod(x - kv)
    return (signed_log_prod(kv) / den).value


def evaluate_decomposition(d: Decomposition, k: RealSequence, x: float) -> float:
    """Evaluate the rational function through its partial fractions.

    :raises PoleViolation: At a pole or on the wrong side of the poles.
    """

    kv = as_kvector(k)
    if len(d.residues) != kv.size:
        raise DomainViolation(
            f"decomposition has {len(d.residues)} residues for {kv.size} poles"
        )
    x = float(x)
    _check_pole(kv, x, d.side)
    residues = np.asarray(d.residues)
    if d.side is Side.NEGATIVE:
        return math.fsum([d.leading / (-x), *(residues / (kv - x)).tolist()])
    return math.fsum([d.leading / x, *(residues / (x - kv)).tolist()])
