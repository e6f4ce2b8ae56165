"""
Generalized logistic family ``y' = (-1)^(n+1) y prod_i (1 - y / k_i)``.

The equilibria ``0 < k_1 < ... < k_n`` split the phase line into invariant
intervals. Solutions started in ``[0, k_n]`` are global; solutions started
below 0 or above ``k_n`` blow up in finite time in one direction, and the
blow-up time has a closed form through the partial fractions of ``1 / rhs``.
"""

import math

from typing import Optional, Tuple, Union

import numpy as np

from blowuplab import settings
from blowuplab.core.logspace import lagrange_ratios, signed_log_prod
from blowuplab.core.nodes import as_kvector
from blowuplab.core.partial_fractions import decompose_positive_side
from blowuplab.numerics.integrator import CashKarp54
from blowuplab.numerics.quadrature import integrate as quad_integrate
from blowuplab.utils.errors import DomainViolation, StiffFailure
from blowuplab.utils.logger import get_logger
from blowuplab.utils.typing import (
    BlowupDirection,
    BlowupReport,
    CauchyProblem,
    Direction,
    FateTag,
    IntegratorOptions,
    KVector,
    QualitativeFate,
    RealSequence,
    TerminalStatus,
    Trajectory,
    XVector,
)


logger = get_logger(name=__name__)

# closed forms losing more than this factor to cancellation are replaced by
# quadrature of the integral representation
_CANCELLATION_LIMIT = 1e4


def _field(kv: KVector):
    sign = 1.0 if kv.size % 2 else -1.0
    k = kv.tolist()

    def field(y: float) -> float:
        return sign * y * math.prod(1.0 - y / ki for ki in k)

    return field


def rhs(y: float, k: RealSequence) -> float:
    """``(-1)^(n+1) y prod_i (1 - y / k_i)``."""

    return _field(as_kvector(k))(float(y))


def invariant_interval(y: float, k: RealSequence) -> Tuple[float, float]:
    """Invariant set of the phase line containing ``y``.

    Open intervals between consecutive equilibria, or the degenerate
    ``(y, y)`` at an equilibrium.
    """

    kv = as_kvector(k)
    y = float(y)
    equilibria = [0.0, *kv.tolist()]
    if y in equilibria:
        return y, y
    pos = int(np.searchsorted(equilibria, y))
    lower = equilibria[pos - 1] if pos > 0 else -math.inf
    upper = equilibria[pos] if pos < len(equilibria) else math.inf
    return lower, upper


def classify_initial(p: CauchyProblem) -> QualitativeFate:
    kv = as_kvector(p.k)
    y0 = float(p.y0)
    if y0 == 0 or np.any(kv == y0):
        return QualitativeFate(FateTag.EQUILIBRIUM_EXACT)
    if 0 < y0 < kv[-1]:
        return QualitativeFate(FateTag.GLOBAL_BOTH_DIRECTIONS)
    if y0 > kv[-1]:
        return QualitativeFate(
            FateTag.POSITIVELY_GLOBAL_PAST_BLOWUP, BlowupDirection.PAST
        )
    if kv.size % 2:
        return QualitativeFate(
            FateTag.NEGATIVELY_GLOBAL_FUTURE_BLOWUP, BlowupDirection.FUTURE
        )
    return QualitativeFate(
        FateTag.POSITIVELY_GLOBAL_PAST_BLOWUP_NEGATIVE_BRANCH, BlowupDirection.PAST
    )


def _blowup_problem(p: CauchyProblem) -> Tuple[KVector, float]:
    kv = as_kvector(p.k)
    y0 = float(p.y0)
    if not math.isfinite(y0):
        raise DomainViolation(f"y0 must be finite, got {y0!r}")
    if 0 <= y0 <= kv[-1]:
        raise DomainViolation(
            f"no blow-up: y0 in [0, k_n] = [0, {float(kv[-1])!r}]"
        )
    return kv, y0


def substitution_point(p: CauchyProblem) -> XVector:
    """The point that turns the blow-up estimate into the exponential inequality.

    ``x_i = k_i / (-y0)`` below 0 and ``x_i = k_i / (y0 - k_i)`` above ``k_n``.
    In both cases ``blowup_time_bound(p) = prod(x) / n``.
    """

    kv, y0 = _blowup_problem(p)
    if y0 < 0:
        return kv / (-y0)
    return kv / (y0 - kv)


def blowup_time_bound(p: CauchyProblem) -> float:
    """A priori bound on the blow-up time.

    ``prod k_i / (n (-y0)^n)`` below 0 and
    ``prod k_i / (n y0^n prod (1 - k_i / y0))`` above ``k_n``.
    """

    x = substitution_point(p)
    return signed_log_prod(x).value / x.size


def quadrature_blowup_time(
    p: CauchyProblem, rel_tol: float = settings.QUAD_REL_TOL
) -> float:
    """Blow-up time by quadrature of its integral representation.

    With ``x = y0 / u`` both improper integrals become
    ``int_0^1 prod k_i u^(n-1) / prod |y0 - u k_i| du``.
    """

    kv, y0 = _blowup_problem(p)
    n = kv.size
    prod_k = signed_log_prod(kv)

    def integrand(u):
        u = np.asarray(u)
        den = np.sum(np.log(np.abs(y0 - u[:, None] * kv)), axis=1)
        return u ** (n - 1) * np.exp(prod_k.log_abs - den)

    breakpoints = None
    if y0 > 0:
        # the integrand steepens near u = 1 as y0 approaches k_n
        gap = (y0 - kv[-1]) / y0
        breakpoints = [
            1.0 - gap * c for c in 2.0 ** np.arange(0, 20, 2) if gap * c < 1
        ]
    res = quad_integrate(
        integrand, 0.0, 1.0, abs_tol=0.0, rel_tol=rel_tol, breakpoints=breakpoints
    )
    return res.value


def analytic_blowup_time(p: CauchyProblem) -> BlowupReport:
    """Closed-form blow-up time with its a priori bound attached.

    Below 0: ``ln prod (1 + k_i / (-y0))^(-A_i)``, a future blow-up for odd n
    and a past one for even n. Above ``k_n``: ``ln prod (1 - k_i / y0)^(-B_i)``,
    always in the past.

    :raises DomainViolation: If y0 lies in [0, k_n].
    """

    kv, y0 = _blowup_problem(p)
    if y0 < 0:
        # -A_i are the Lagrange weights of k
        terms = lagrange_ratios(kv) * np.log1p(kv / (-y0))
    else:
        residues = np.asarray(decompose_positive_side(kv).residues)
        terms = -residues * np.log1p(-kv / y0)
    time = math.fsum(terms)
    if math.fsum(np.abs(terms)) > _CANCELLATION_LIMIT * abs(time):
        logger.debug(f"closed form cancels for k={kv.tolist()}, y0={y0!r}")
        time = quadrature_blowup_time(p)

    return BlowupReport(
        direction=classify_initial(p).blowup_direction,
        analytic_time=time,
        bound=blowup_time_bound(p),
    )


def logistic_solution(
    k1: float, y0: float, t: Union[float, np.ndarray]
) -> Union[float, np.ndarray]:
    """Closed-form solution of ``y' = y (1 - y / k1)``, ``y(0) = y0``."""

    t = np.asarray(t, dtype=float)
    out = k1 * y0 * np.exp(t) / (k1 + y0 * np.expm1(t))
    if out.ndim == 0:
        return float(out)
    return out


def escape_tail(k: RealSequence, y: float) -> float:
    """Leading-order time left before blow-up from ``y``, ``prod k_i / (n |y|^n)``.

    Exact for n = 1 up to a relative ``O(k_n / |y|)`` correction.
    """

    kv = as_kvector(k)
    log_tail = signed_log_prod(kv).log_abs - kv.size * math.log(abs(y))
    return math.exp(log_tail) / kv.size


def _first_step(field, y0: float, horizon: float) -> float:
    slope = abs(field(y0))
    if abs(y0) > 1e-5 and slope > 1e-5:
        return min(horizon, 0.01 * abs(y0) / slope)
    return min(horizon, 1e-6)


def _stop(message: str, ts, ys, opts: IntegratorOptions) -> Trajectory:
    if opts.raise_on_failure:
        raise StiffFailure(message)
    logger.warning(message)
    return Trajectory(np.array(ts), np.array(ys), TerminalStatus.STIFF_FAILURE)


def integrate(
    p: CauchyProblem,
    direction: Union[Direction, str] = Direction.FORWARD,
    horizon: float = 10.0,
    opts: Optional[IntegratorOptions] = None,
) -> Trajectory:
    """Integrate the Cauchy problem with the Cash-Karp 5(4) pair.

    Backward runs integrate the reversed field; sample times are reported
    as physical times, so they decrease from 0. Steps that would leave the
    invariant interval of ``y0`` or move against the flow are rejected,
    and outside ``[0, k_n]`` each accepted step changes ``y`` by at most
    ``growth_cap * |y|``.

    :raises DomainViolation: For a nonpositive horizon.
    :raises StiffFailure: When the step size underflows or the step budget
        is spent, unless ``opts.raise_on_failure`` is off.
    """

    opts = opts or IntegratorOptions()
    direction = Direction(direction)
    kv = as_kvector(p.k)
    y0 = float(p.y0)
    horizon = float(horizon)
    if not horizon > 0 or not math.isfinite(horizon):
        raise DomainViolation(f"horizon must be positive, got {horizon!r}")
    if not math.isfinite(y0):
        raise DomainViolation(f"y0 must be finite, got {y0!r}")

    if classify_initial(p).tag is FateTag.EQUILIBRIUM_EXACT:
        end = horizon if direction is Direction.FORWARD else -horizon
        return Trajectory(
            np.array([0.0, end]), np.array([y0, y0]), TerminalStatus.REACHED_HORIZON
        )

    forward = _field(kv)
    time_sign = 1.0 if direction is Direction.FORWARD else -1.0
    field = forward if time_sign > 0 else (lambda y: -forward(y))

    lower, upper = invariant_interval(y0, kv)
    capped = y0 < 0 or y0 > kv[-1]
    y_escape = opts.y_escape or settings.Y_ESCAPE_FACTOR * max(
        1.0, float(kv[-1]), abs(y0)
    )
    motion = math.copysign(1.0, field(y0))
    # outside [0, k_n] and moving away from it, the run heads for infinity
    outward = capped and motion * y0 > 0
    stepper = CashKarp54()
    eps = np.finfo(float).eps

    tau, y = 0.0, y0
    ts, ys = [0.0], [y0]
    h = opts.first_step or _first_step(field, y0, horizon)
    steps = 0
    while tau < horizon:
        if steps >= opts.max_steps:
            return _stop(
                f"step budget {opts.max_steps} spent at t={time_sign * tau!r}, y={y!r}",
                ts,
                ys,
                opts,
            )
        h = min(h, horizon - tau)
        if h < 16 * eps * max(1.0, tau):
            return _stop(
                f"step size {h:.3g} underflowed at t={time_sign * tau!r}, y={y!r}",
                ts,
                ys,
                opts,
            )
        steps += 1

        y_new, err = stepper.step(field, y, h)
        ratio = stepper.error_ratio(y, y_new, err, opts.rtol, opts.atol)
        if not math.isfinite(y_new) or ratio > 1:
            h *= stepper.step_factor(ratio)
            continue

        near = 1e3 * eps * max(1.0, abs(y))
        if not lower < y_new < upper:
            edge = lower if y_new <= lower else upper
            if abs(edge - y) > near:
                h *= 0.5
                continue
            # settling onto an equilibrium within round-off
            y_new = float(np.nextafter(edge, y))
        if (y_new - y) * motion < 0:
            if abs(y_new - y) > near:
                h *= 0.5
                continue
            y_new = y
        if capped and abs(y_new - y) > opts.growth_cap * abs(y):
            h *= max(
                stepper.MIN_FACTOR,
                stepper.SAFETY * opts.growth_cap * abs(y) / abs(y_new - y),
            )
            continue

        tau += h
        y = y_new
        ts.append(time_sign * tau)
        ys.append(y)
        if abs(y) >= y_escape or (
            outward and escape_tail(kv, y) < opts.escape_tail_fraction * tau
        ):
            return Trajectory(np.array(ts), np.array(ys), TerminalStatus.ESCAPED)
        h *= stepper.step_factor(ratio)

    return Trajectory(np.array(ts), np.array(ys), TerminalStatus.REACHED_HORIZON)


def numeric_blowup_time(
    p: CauchyProblem, opts: Optional[IntegratorOptions] = None
) -> float:
    """Blow-up time from integration up to escape plus :func:`escape_tail` at
    the last sample.

    :raises DomainViolation: If the solution is global.
    :raises StiffFailure: If the trajectory does not escape.
    """

    fate = classify_initial(p)
    if fate.blowup_direction is BlowupDirection.NONE:
        raise DomainViolation(
            f"no blow-up for y0={p.y0!r}: solution is {fate.tag.value}"
        )
    kv = as_kvector(p.k)
    direction = (
        Direction.FORWARD
        if fate.blowup_direction is BlowupDirection.FUTURE
        else Direction.BACKWARD
    )
    opts = opts or IntegratorOptions()
    horizon = 1.5 * blowup_time_bound(p)
    traj = integrate(p, direction, horizon, opts)
    if traj.terminal_status is not TerminalStatus.ESCAPED:
        raise StiffFailure(
            f"no escape before t={traj.terminal_time!r} for k={kv.tolist()}, y0={p.y0!r}"
        )
    return abs(traj.terminal_time) + escape_tail(kv, traj.terminal_value)


def blowup_report(
    p: CauchyProblem,
    opts: Optional[IntegratorOptions] = None,
    numeric: bool = True,
) -> BlowupReport:
    """Analytic report, completed with the numeric estimate and its relative residual."""

    report = analytic_blowup_time(p)
    if numeric:
        report.numeric_time = numeric_blowup_time(p, opts)
        report.residual = (
            abs(report.numeric_time - report.analytic_time) / report.analytic_time
        )
    return report
