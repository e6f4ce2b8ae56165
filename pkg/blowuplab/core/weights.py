"""
Weights of the multivariate exponential inequality and the gap between its sides.

For pairwise distinct nonnegative ``x`` the inequality reads

    prod_i (1 + x_i)^{a_i} <= exp(prod_i x_i / n),
    a_i = prod_{j != i} x_j / prod_{j != i} (x_j - x_i),

and is compared in exponent space: ``gap = prod(x) / n - sum_i a_i log1p(x_i)``.
Outside the nonnegative orthant the same expressions are evaluated where they
are real-valued and the point is classified otherwise.
"""

import math

from fractions import Fraction
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from blowuplab import settings
from blowuplab.core.logspace import lagrange_ratios, signed_log_prod
from blowuplab.core.nodes import (
    as_array,
    as_xvector,
    is_separated,
)
from blowuplab.core.divdiff import deficit_integral
from blowuplab.utils.errors import (
    DomainViolation,
    IllDefinedZeroPow,
    SeparationViolation,
    UndefinedBase,
)
from blowuplab.utils.typing import (
    PointClass,
    RealSequence,
    RepetitionSpec,
    WeightVector,
    XVector,
)

# inputs whose binary fractions have denominators above this use the
# tolerance test for integer exponents
_EXACT_DENOMINATOR_LIMIT = 2**20
_EXACT_MAX_DIM = 8


class GapEvaluation(NamedTuple):
    gap: float
    """rhs_exponent - lhs_exponent"""

    scale: float
    """magnitude of the summed exponent terms, the yardstick for equality;
    zero when the gap comes from the cancellation-free integral"""

    lhs_exponent: float
    rhs_exponent: float


def lagrange_weights(x: RealSequence) -> WeightVector:
    """Compute ``a_i = prod_{j != i} x_j / prod_{j != i} (x_j - x_i)``.

    Products are carried in sign / log-magnitude form and recombined at the
    end, so large n or widely spread x do not overflow.

    :param RealSequence x: Pairwise distinct reals.
    :raises SeparationViolation: If two coordinates are closer than ``DELTA_SEP``.
    :return: The weight vector, summing to one.
    """

    return lagrange_ratios(as_xvector(x))


def _resolved(gap: float, scale: float) -> bool:
    """Direct gap clears both round-off and the equality band."""

    ulps = settings.GAP_RESOLUTION_ULPS * np.finfo(float).eps
    return gap > max(ulps, settings.TAU_EQ) * scale


def _evaluate_gap(x: XVector) -> GapEvaluation:
    """Gap on the nonnegative orthant, falling back to the cancellation-free
    integral when the direct difference sits inside round-off."""

    n = x.size
    rhs = signed_log_prod(x).value / n
    terms = lagrange_ratios(x) * np.log1p(x)
    lhs = math.fsum(terms)
    gap = rhs - lhs
    scale = abs(rhs) + math.fsum(np.abs(terms))
    if np.all(x > 0) and not _resolved(gap, scale):
        gap = signed_log_prod(x).value * deficit_integral(x)
        scale = 0.0
    return GapEvaluation(gap, scale, lhs, rhs)


def inequality_gap(x: RealSequence) -> float:
    """Return ``prod(x) / n - sum_i a_i log1p(x_i)`` for nonnegative x.

    The gap is strictly positive for positive x and exactly zero when some
    coordinate is zero.

    :raises SeparationViolation: If two coordinates coincide.
    :raises DomainViolation: If a coordinate is negative.
    """

    return _evaluate_gap(as_xvector(x, nonnegative=True)).gap


def _exact_weights(x: np.ndarray) -> Optional[List[Fraction]]:
    """Weights in rational arithmetic, when every coordinate is a small dyadic rational."""

    if x.size > _EXACT_MAX_DIM:
        return None
    fx = [Fraction(v) for v in x.tolist()]
    if any(f.denominator > _EXACT_DENOMINATOR_LIMIT for f in fx):
        return None
    weights = []
    for i, xi in enumerate(fx):
        num, den = Fraction(1), Fraction(1)
        for j, xj in enumerate(fx):
            if j != i:
                num *= xj
                den *= xj - xi
        if den == 0:
            return None
        weights.append(num / den)
    return weights


def _integer_exponents(
    a: np.ndarray, exact: Optional[List[Fraction]]
) -> List[Optional[int]]:
    if exact is not None:
        return [int(w) if w.denominator == 1 else None for w in exact]
    out = []
    for ai in a.tolist():
        nearest = round(ai)
        out.append(int(nearest) if abs(ai - nearest) <= settings.TAU_ID else None)
    return out


class PointCheck(NamedTuple):
    """Outcome of checking the inequality at one point.

    Exponents and gap are ``nan`` where a side is not real-valued; a side
    that is zero or negative has exponent ``-inf``.
    """

    point_class: PointClass
    gap: float
    lhs_exponent: float
    rhs_exponent: float
    lhs: float
    rhs: float


def _exp(v: float) -> float:
    return math.exp(v) if v < 709.0 else math.inf


def _classify_gap(gap: float, scale: float) -> PointClass:
    if abs(gap) <= settings.TAU_EQ * scale:
        return PointClass.EQUALITY
    return PointClass.HOLDS if gap > 0 else PointClass.FAILS


def _checked(ev: GapEvaluation) -> PointCheck:
    return PointCheck(
        _classify_gap(ev.gap, ev.scale),
        ev.gap,
        ev.lhs_exponent,
        ev.rhs_exponent,
        _exp(ev.lhs_exponent),
        _exp(ev.rhs_exponent),
    )


def _evaluate_extended(x: np.ndarray) -> PointCheck:
    """Evaluate both sides of the inequality at a separated real point.

    Raises UndefinedBase or IllDefinedZeroPow where a side is not real-valued.
    """

    if np.all(x >= 0):
        return _checked(_evaluate_gap(x))

    n = x.size
    a = lagrange_ratios(x)
    exact = _exact_weights(x)
    powers = _integer_exponents(a, exact)
    bases = 1.0 + x
    for i, base in enumerate(bases.tolist()):
        if base < 0 and powers[i] is None:
            raise UndefinedBase(
                f"base 1+x_{i + 1} = {base!r} < 0 with non-integer weight {float(a[i])!r}"
            )
        if base == 0 and powers[i] == 0:
            raise IllDefinedZeroPow(f"0^0 at coordinate {i + 1} of {x.tolist()}")

    rhs_exp = signed_log_prod(x).value / n
    rhs = _exp(rhs_exp)

    zero = np.flatnonzero(bases == 0)
    if zero.size:
        # coordinates are distinct, so at most one base vanishes
        if a[zero[0]] > 0:
            return PointCheck(PointClass.HOLDS, math.inf, -math.inf, rhs_exp, 0.0, rhs)
        return PointCheck(
            PointClass.FAILS, -math.inf, math.inf, rhs_exp, math.inf, rhs
        )

    if all(p is not None for p in powers):
        if exact is not None:
            lhs = float(
                math.prod((1 + Fraction(v)) ** p for v, p in zip(x.tolist(), powers))
            )
        else:
            lhs = math.prod(b**p for b, p in zip(bases.tolist(), powers))
        scale = abs(rhs_exp) + math.fsum(
            abs(p) * abs(math.log(abs(b))) for b, p in zip(bases.tolist(), powers)
        )
    else:
        # negative bases carry integer weights, the rest are positive
        sign = 1.0
        for i, base in enumerate(bases.tolist()):
            if base < 0 and powers[i] % 2:
                sign = -sign
        terms = a * np.log(np.abs(bases))
        lhs = sign * _exp(math.fsum(terms))
        scale = abs(rhs_exp) + math.fsum(np.abs(terms))

    if lhs <= 0:
        # a nonpositive left side is below any exponential
        return PointCheck(PointClass.HOLDS, math.inf, -math.inf, rhs_exp, lhs, rhs)
    lhs_exp = math.log(lhs)
    gap = rhs_exp - lhs_exp
    return PointCheck(_classify_gap(gap, scale), gap, lhs_exp, rhs_exp, lhs, rhs)


def evaluate_sides(x: RealSequence) -> Tuple[float, float]:
    """Return ``(lhs, rhs)`` of the inequality at a point of the extended domain.

    Negative bases are raised to integer weights exactly, zero bases give
    ``0`` or ``inf`` according to the sign of their weight.

    :raises SeparationViolation: If two coordinates coincide.
    :raises UndefinedBase: Negative base with non-integer weight.
    :raises IllDefinedZeroPow: Zero base with zero weight.
    """

    check = _evaluate_extended(as_xvector(x))
    return check.lhs, check.rhs


def _undefined(point_class: PointClass) -> PointCheck:
    return PointCheck(point_class, *(math.nan,) * 5)


def check_point(x: RealSequence) -> PointCheck:
    """Classify any finite real point and report both exponents and the gap."""

    arr = as_array(x, "x")
    if not is_separated(arr):
        return _undefined(PointClass.DIVISION_BY_ZERO_WEIGHT)
    try:
        return _evaluate_extended(arr)
    except UndefinedBase:
        return _undefined(PointClass.UNDEFINED_BASE)
    except IllDefinedZeroPow:
        return _undefined(PointClass.ILL_DEFINED_ZERO_POW)


def classify_extended_point(x: RealSequence) -> PointClass:
    """Tag any finite real point with exactly one :class:`PointClass`."""

    return check_point(x).point_class


def _as_repetition(spec: RepetitionSpec) -> Tuple[np.ndarray, List[int]]:
    x = as_xvector(spec.x, nonnegative=True)
    r = list(spec.r)
    if len(r) != x.size:
        raise DomainViolation(
            f"r has {len(r)} entries for {x.size} coordinates: {spec.r}"
        )
    if any(int(ri) != ri or ri < 1 for ri in r):
        raise DomainViolation(f"r must hold positive integers, got {spec.r}")
    r = [int(ri) for ri in r]

    # nodes of one block share x_i and only meet through their integer
    # multipliers, so only neighbours from different blocks are compared
    nodes = sorted(
        (j * xi, i) for i, xi in enumerate(x.tolist()) for j in range(1, r[i] + 1)
    )
    scale = max(1.0, nodes[-1][0])
    for (lo, bi), (hi, bj) in zip(nodes[:-1], nodes[1:]):
        if bi != bj and (hi - lo) / scale < settings.DELTA_SEP:
            raise SeparationViolation(
                f"expanded nodes {lo!r} and {hi!r} coincide for x={spec.x}, r={spec.r}"
            )
    return x, r


def expanded_nodes(spec: RepetitionSpec) -> np.ndarray:
    """The node multiset ``{ j x_i : 1 <= j <= r_i }`` in block order."""

    x = np.asarray(spec.x, dtype=float)
    return np.concatenate(
        [xi * np.arange(1, int(ri) + 1, dtype=float) for xi, ri in zip(x, spec.r)]
    )


def repetition_weights(spec: RepetitionSpec) -> List[np.ndarray]:
    """Weights ``a_ij`` of the inequality with node ``x_i`` repeated as ``j x_i``.

    Row i holds ``a_i1 .. a_ir_i``. The factor ``x_i`` cancels inside each
    block, so a zero coordinate with ``r_i > 1`` stays well defined.

    :raises SeparationViolation: If nodes of different blocks coincide.
    """

    x, r = _as_repetition(spec)
    rows = []
    for i, xi in enumerate(x.tolist()):
        others = np.array(
            [
                ell * xk
                for k, xk in enumerate(x.tolist())
                if k != i
                for ell in range(1, r[k] + 1)
            ]
        )
        row = np.empty(r[i])
        for j in range(1, r[i] + 1):
            ell = np.array([v for v in range(1, r[i] + 1) if v != j], dtype=float)
            own = signed_log_prod(ell) / signed_log_prod(ell - j)
            cross = signed_log_prod(others) / signed_log_prod(others - j * xi)
            row[j - 1] = (own * cross).value
        rows.append(row)
    return rows


def _repetition_evaluation(spec: RepetitionSpec) -> GapEvaluation:
    x, r = _as_repetition(spec)
    nodes = expanded_nodes(spec)
    weights = repetition_weights(spec)
    rhs = signed_log_prod(nodes).value / nodes.size
    terms = np.concatenate(
        [
            row * np.log1p(xi * np.arange(1, ri + 1, dtype=float))
            for row, xi, ri in zip(weights, x.tolist(), r)
        ]
    )
    lhs = math.fsum(terms)
    gap = rhs - lhs
    scale = abs(rhs) + math.fsum(np.abs(terms))
    if np.all(x > 0) and not _resolved(gap, scale):
        gap = signed_log_prod(nodes).value * deficit_integral(nodes)
        scale = 0.0
    return GapEvaluation(gap, scale, lhs, rhs)


def repetition_gap(spec: RepetitionSpec) -> float:
    """Return ``(1/m) prod r_i! x_i^{r_i} - sum_ij a_ij log1p(j x_i)``.

    Equals :func:`inequality_gap` on :func:`expanded_nodes`, and is zero
    exactly when some ``x_i`` is zero.

    :raises SeparationViolation: If nodes of different blocks coincide.
    :raises DomainViolation: For negative x or non-positive r.
    """

    return _repetition_evaluation(spec).gap


def check_repetition(spec: RepetitionSpec) -> PointCheck:
    """:func:`check_point` for the inequality with repeated nodes."""

    return _checked(_repetition_evaluation(spec))
