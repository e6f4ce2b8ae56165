"""
Divided differences of the completely monotone function ``f(x) = log1p(x) / x``.

``(-1)^n f^(n)(x) = n! int_0^1 t^n / (1 + t x)^(n+1) dt`` is positive for all
n, so by the mean value theorem for divided differences

    0 < sum_i f(x_i) / prod_{j != i} (x_j - x_i) < 1 / n

for pairwise distinct positive nodes. Since ``f(x) = int_0^1 ds / (1 + s x)``
the middle sum also equals ``int_0^1 s^(n-1) / prod_i (1 + s x_i) ds``, which
gives the bound deficit without cancellation.
"""

import math

from typing import Tuple, Union

import numpy as np

from scipy import optimize

from blowuplab import settings
from blowuplab.core.logspace import signed_log_prod
from blowuplab.core.nodes import as_nodeset
from blowuplab.numerics.quadrature import integrate
from blowuplab.utils.errors import DomainViolation, NumericalFailure
from blowuplab.utils.logger import get_logger
from blowuplab.utils.typing import (
    CMDerivativeQuery,
    RealFunction,
    RealSequence,
)


logger = get_logger(name=__name__)

# coefficients of log1p(x) / x = sum_k (-x)^k / (k + 1)
_SERIES = np.array(
    [(-1.0) ** k / (k + 1) for k in range(settings.SERIES_DEGREE + 1)]
)[::-1]


def f_log1p_over_x(
    x: Union[float, np.ndarray], extended: bool = False
) -> Union[float, np.ndarray]:
    """Evaluate ``log1p(x) / x`` with its continuous extension ``f(0) = 1``.

    :param x: Scalar or array, nonnegative.
    :param bool extended: Also accept (-1, 0), used by the extended-domain explorer.
    :raises DomainViolation: For x < 0 (x <= -1 when extended).
    """

    arr = np.asarray(x, dtype=float)
    lower_ok = arr > -1 if extended else arr >= 0
    if not np.all(lower_ok):
        raise DomainViolation(f"log1p(x)/x evaluated outside its domain at {x!r}")
    if extended and np.any(arr < 0):
        logger.debug(f"log1p(x)/x evaluated on (-1, 0) at {x!r}")

    small = np.abs(arr) < settings.SERIES_RADIUS
    safe = np.where(small, 1.0, arr)
    out = np.where(small, np.polyval(_SERIES, arr), np.log1p(safe) / safe)
    if out.ndim == 0:
        return float(out)
    return out


def divided_difference(nodes: RealSequence, f: RealFunction) -> float:
    """``[x_1, ..., x_n; f]`` by the Newton recurrence.

    :param RealSequence nodes: Pairwise distinct positive nodes.
    :param RealFunction f: Vectorized function defined on [min x, max x].
    :raises SeparationViolation: If two nodes coincide.
    """

    # ascending nodes keep the recurrence stable and the result order-free
    x = np.sort(as_nodeset(nodes))
    table = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape).copy()
    for level in range(1, x.size):
        table[level:] = (table[level:] - table[level - 1 : -1]) / (
            x[level:] - x[:-level]
        )
    return float(table[-1])


def naive_divided_difference(nodes: RealSequence, f: RealFunction) -> float:
    """``sum_i f(x_i) / prod_{j != i} (x_i - x_j)`` term by term."""

    x = as_nodeset(nodes)
    fx = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
    terms = [
        fx[i] / signed_log_prod(x[i] - np.delete(x, i)).value for i in range(x.size)
    ]
    return math.fsum(terms)


def _check_order(order: int) -> int:
    if int(order) != order or not 0 <= order <= settings.N_MAX:
        raise DomainViolation(
            f"derivative order must be an integer in [0, {settings.N_MAX}], got {order!r}"
        )
    return int(order)


def cm_limit_at_zero(order: int) -> float:
    """``lim_{x -> 0+} (-1)^n f^(n)(x) = n! / (n + 1)``."""

    order = _check_order(order)
    return math.factorial(order) / (order + 1)


def cm_derivative(q: CMDerivativeQuery) -> float:
    """``(-1)^n f^(n)(x)`` by adaptive quadrature of ``n! t^n / (1 + t x)^(n+1)``.

    The value at ``x = 0`` is the limit :func:`cm_limit_at_zero`.

    :raises DomainViolation: For x < 0 or an order outside [0, N_MAX].
    :raises QuadratureFailure: When the panel budget is spent.
    """

    order = _check_order(q.order)
    x = float(q.point)
    if not x >= 0 or not math.isfinite(x):
        raise DomainViolation(f"completely monotone derivative needs x >= 0, got {x!r}")
    if x == 0:
        return cm_limit_at_zero(order)

    def integrand(t):
        return t**order / (1.0 + t * x) ** (order + 1)

    # the integrand peaks at t = order / x
    breakpoints = [c / x for c in 2.0 ** np.arange(-1, 16, 2)] if x > 1 else None
    res = integrate(
        integrand,
        0.0,
        1.0,
        abs_tol=0.0,
        rel_tol=settings.QUAD_REL_TOL,
        breakpoints=breakpoints,
    )
    return math.factorial(order) * res.value


def scaled_sum_integral(x: np.ndarray) -> float:
    """``int_0^1 s^(n-1) / prod_i (1 + s x_i) ds`` for nonnegative x, unvalidated."""

    n = x.size

    def integrand(s):
        s = np.asarray(s)[:, None]
        return s[:, 0] ** (n - 1) * np.exp(-np.sum(np.log1p(s * x), axis=1))

    res = integrate(integrand, 0.0, 1.0, abs_tol=0.0, rel_tol=settings.QUAD_REL_TOL)
    return res.value


def deficit_integral(x: np.ndarray) -> float:
    """``int_0^1 s^(n-1) (1 - 1 / prod_i (1 + s x_i)) ds`` for nonnegative x, unvalidated.

    Equals ``1/n - sum_i f(x_i) / prod_{j != i} (x_j - x_i)`` and is computed
    without cancellation, also when nodes cluster or approach zero.
    """

    n = x.size

    def integrand(s):
        s = np.asarray(s)[:, None]
        return -(s[:, 0] ** (n - 1)) * np.expm1(-np.sum(np.log1p(s * x), axis=1))

    res = integrate(integrand, 0.0, 1.0, abs_tol=0.0, rel_tol=settings.QUAD_REL_TOL)
    return res.value


def bound_deficit(nodes: RealSequence) -> float:
    """``1/n - sum_i f(x_i) / prod_{j != i} (x_j - x_i)``, strictly positive."""

    return deficit_integral(as_nodeset(nodes))


def mean_value_bound_check(nodes: RealSequence) -> Tuple[float, float]:
    """Return ``(value, 1/n)`` with ``value = sum_i f(x_i) / prod_{j != i} (x_j - x_i)``.

    ``value`` equals ``(-1)^(n-1) [x_1, ..., x_n; f]`` and satisfies
    ``0 < value < 1/n``.
    """

    x = as_nodeset(nodes)
    bound = 1.0 / x.size
    return bound - deficit_integral(x), bound


def locate_mean_value_point(nodes: RealSequence) -> float:
    """Find the interior point x0 with ``f^(n-1)(x0) / (n-1)! = [x_1, ..., x_n; f]``.

    Diagnostic only; ``(-1)^(n-1) f^(n-1)`` is strictly decreasing so the
    point is unique.

    :raises NumericalFailure: If round-off leaves the root unbracketed.
    """

    x = as_nodeset(nodes)
    lo, hi = float(x.min()), float(x.max())
    if x.size == 1:
        return lo
    order = x.size - 1
    value, _ = mean_value_bound_check(x)
    target = value * math.factorial(order)

    def residual(t):
        return cm_derivative(CMDerivativeQuery(order, t)) - target

    try:
        return float(optimize.brentq(residual, lo, hi, xtol=1e-14 * hi, rtol=1e-12))
    except ValueError as e:
        raise NumericalFailure(f"mean value point not bracketed in [{lo}, {hi}]: {e}")
