import math

import numpy as np
import pytest

from blowuplab import settings
from blowuplab.core.partial_fractions import decompose_positive_side
from blowuplab.core.weights import lagrange_weights
from blowuplab.ode.blowup import (
    analytic_blowup_time,
    blowup_report,
    blowup_time_bound,
    classify_initial,
    escape_tail,
    integrate,
    invariant_interval,
    logistic_solution,
    numeric_blowup_time,
    quadrature_blowup_time,
    rhs,
    substitution_point,
)
from blowuplab.utils.errors import DomainViolation, StiffFailure
from blowuplab.utils.typing import (
    BlowupDirection,
    CauchyProblem,
    Direction,
    FateTag,
    IntegratorOptions,
    TerminalStatus,
)


FIXED = [
    # k, y0, time, bound, direction
    ((1.0,), -1.0, math.log(2.0), 1.0, BlowupDirection.FUTURE),
    ((1.0, 2.0), -1.0, math.log(4.0 / 3.0), 1.0, BlowupDirection.PAST),
    ((1.0, 2.0), 4.0, math.log(9.0 / 8.0), 1.0 / 6.0, BlowupDirection.PAST),
    ((1.0,), 2.0, math.log(2.0), 1.0, BlowupDirection.PAST),
]


@pytest.fixture(scope="session")
def random_problems():
    rng = np.random.default_rng(17)
    problems = []
    for _ in range(40):
        n = int(rng.integers(1, 5))
        k = np.cumsum(np.exp(rng.uniform(math.log(0.2), math.log(3.0), size=n)))
        if rng.random() < 0.5:
            y0 = -float(np.exp(rng.uniform(math.log(0.1), math.log(10.0))))
        else:
            u = float(np.exp(rng.uniform(math.log(0.05), math.log(5.0))))
            y0 = float(k[-1] * (1.0 + u))
        problems.append(CauchyProblem(tuple(k.tolist()), y0))
    return problems


class TestPhaseLine:
    def test_rhs(self):
        assert rhs(0.5, (1.0,)) == pytest.approx(0.25)
        assert rhs(-1.0, (1.0, 2.0)) == pytest.approx(3.0)
        assert rhs(2.0, (1.0, 2.0)) == 0.0

    @pytest.mark.parametrize(
        "y,interval",
        [
            (-1.0, (-math.inf, 0.0)),
            (0.0, (0.0, 0.0)),
            (0.5, (0.0, 1.0)),
            (1.5, (1.0, 2.0)),
            (2.0, (2.0, 2.0)),
            (7.0, (2.0, math.inf)),
        ],
    )
    def test_invariant_interval(self, y, interval):
        assert invariant_interval(y, (1.0, 2.0)) == interval

    @pytest.mark.parametrize(
        "k,y0,tag",
        [
            ((1.0, 2.0), 0.0, FateTag.EQUILIBRIUM_EXACT),
            ((1.0, 2.0), 2.0, FateTag.EQUILIBRIUM_EXACT),
            ((1.0, 2.0), 1.5, FateTag.GLOBAL_BOTH_DIRECTIONS),
            ((1.0, 2.0), 4.0, FateTag.POSITIVELY_GLOBAL_PAST_BLOWUP),
            ((1.0,), -1.0, FateTag.NEGATIVELY_GLOBAL_FUTURE_BLOWUP),
            ((1.0, 2.0), -1.0, FateTag.POSITIVELY_GLOBAL_PAST_BLOWUP_NEGATIVE_BRANCH),
        ],
    )
    def test_classify_initial(self, k, y0, tag):
        assert classify_initial(CauchyProblem(k, y0)).tag is tag


class TestClosedForms:
    @pytest.mark.parametrize("k,y0,time,bound,direction", FIXED)
    def test_fixed_cases(self, k, y0, time, bound, direction):
        report = analytic_blowup_time(CauchyProblem(k, y0))
        assert report.analytic_time == pytest.approx(time, rel=1e-12)
        assert report.bound == pytest.approx(bound, rel=1e-12)
        assert report.direction is direction
        assert report.numeric_time is None

    @pytest.mark.parametrize("k,y0,time,bound,direction", FIXED)
    def test_quadrature_oracle(self, k, y0, time, bound, direction):
        assert quadrature_blowup_time(CauchyProblem(k, y0)) == pytest.approx(
            time, rel=1e-10
        )

    def test_random_cases(self, random_problems):
        for p in random_problems:
            report = analytic_blowup_time(p)
            assert 0 < report.analytic_time < report.bound, p
            assert quadrature_blowup_time(p) == pytest.approx(
                report.analytic_time, rel=1e-8
            )

    def test_cancelling_closed_form_falls_back_to_quadrature(self):
        p = CauchyProblem((1.0, 2.0, 3.0), -1e6)
        report = analytic_blowup_time(p)
        assert 0 < report.analytic_time < report.bound
        assert report.analytic_time == pytest.approx(report.bound, rel=1e-4)

    def test_no_blowup_inside_the_capacities(self):
        with pytest.raises(DomainViolation, match="no blow-up"):
            analytic_blowup_time(CauchyProblem((1.0, 2.0), 1.5))
        with pytest.raises(DomainViolation):
            blowup_time_bound(CauchyProblem((1.0, 2.0), 0.0))


class TestSubstitution:
    def test_negative_side(self, random_problems):
        for p in random_problems:
            if p.y0 > 0:
                continue
            x = substitution_point(p)
            terms = lagrange_weights(x) * np.log1p(x)
            scale = math.fsum(np.abs(terms))
            assert math.fsum(terms) == pytest.approx(
                analytic_blowup_time(p).analytic_time, rel=1e-9, abs=1e-13 * scale
            )
            assert np.prod(x) / x.size == pytest.approx(blowup_time_bound(p), rel=1e-12)

    def test_positive_side(self, random_problems):
        for p in random_problems:
            if p.y0 < 0:
                continue
            x = substitution_point(p)
            residues = np.asarray(decompose_positive_side(p.k).residues)
            terms = residues * np.log1p(x)
            scale = math.fsum(np.abs(terms))
            assert math.fsum(terms) == pytest.approx(
                analytic_blowup_time(p).analytic_time, rel=1e-9, abs=1e-13 * scale
            )
            assert np.prod(x) / x.size == pytest.approx(blowup_time_bound(p), rel=1e-12)


class TestIntegration:
    def test_logistic_closed_form(self):
        assert logistic_solution(1.0, 0.5, 0.0) == 0.5
        traj = integrate(CauchyProblem((1.0,), 0.5), horizon=10.0)
        assert traj.terminal_status is TerminalStatus.REACHED_HORIZON
        assert traj.terminal_time == pytest.approx(10.0)
        expected = logistic_solution(1.0, 0.5, traj.t)
        np.testing.assert_allclose(traj.y, expected, rtol=1e-7)
        # 1 - y(t) = 1 / (1 + e^t)
        assert 1.0 - traj.terminal_value == pytest.approx(
            1.0 / (1.0 + math.exp(10.0)), rel=1e-3
        )

    def test_escape_before_blowup(self):
        traj = integrate(CauchyProblem((1.0,), -1.0), horizon=1.0)
        assert traj.terminal_status is TerminalStatus.ESCAPED
        assert traj.terminal_time < 0.70
        assert traj.terminal_time == pytest.approx(math.log(2.0), rel=1e-3)
        assert np.all(np.diff(traj.y) < 0)

    def test_equilibrium_is_constant(self):
        traj = integrate(CauchyProblem((1.0,), 0.0), horizon=3.0)
        assert traj.terminal_status is TerminalStatus.REACHED_HORIZON
        assert np.all(traj.y == 0.0)
        assert traj.terminal_time == 3.0

    def test_backward_times_are_negative(self):
        traj = integrate(CauchyProblem((1.0, 2.0), 4.0), Direction.BACKWARD, 1.0)
        assert traj.terminal_status is TerminalStatus.ESCAPED
        assert np.all(np.diff(traj.t) < 0)
        assert traj.terminal_time == pytest.approx(-math.log(9.0 / 8.0), rel=1e-3)

    def test_trajectories_stay_in_their_interval(self):
        rng = np.random.default_rng(23)
        for _ in range(250):
            n = int(rng.integers(1, 4))
            k = np.cumsum(np.exp(rng.uniform(math.log(0.3), math.log(3.0), size=n)))
            y0 = float(rng.uniform(-0.5, 1.5 * k[-1]))
            p = CauchyProblem(tuple(k.tolist()), y0)
            lower, upper = invariant_interval(y0, k)
            toward = {
                BlowupDirection.FUTURE: Direction.FORWARD,
                BlowupDirection.PAST: Direction.BACKWARD,
            }.get(classify_initial(p).blowup_direction)
            for direction in (Direction.FORWARD, Direction.BACKWARD):
                traj = integrate(p, direction, horizon=3.0)
                assert np.all((traj.y > lower) & (traj.y < upper)), (p, direction)
                if direction is toward:
                    assert traj.terminal_status in (
                        TerminalStatus.ESCAPED,
                        TerminalStatus.REACHED_HORIZON,
                    )
                    # monotone on the way out
                    assert np.all(np.diff(traj.y) * y0 >= 0), (p, direction)
                else:
                    assert traj.terminal_status is TerminalStatus.REACHED_HORIZON

    def test_trajectory_is_read_only(self):
        traj = integrate(CauchyProblem((1.0,), 0.5), horizon=1.0)
        with pytest.raises(ValueError):
            traj.y[0] = 2.0

    def test_csv_export(self):
        traj = integrate(CauchyProblem((1.0,), 0.0), horizon=1.0)
        assert traj.__serialize__() == "t,y\n0,0\n1,0\n"

    def test_step_budget(self):
        p = CauchyProblem((1.0,), 0.5)
        with pytest.raises(StiffFailure):
            integrate(p, horizon=10.0, opts=IntegratorOptions(max_steps=5))
        traj = integrate(
            p, horizon=10.0, opts=IntegratorOptions(max_steps=5, raise_on_failure=False)
        )
        assert traj.terminal_status is TerminalStatus.STIFF_FAILURE
        assert len(traj) <= 6

    def test_invalid_horizon(self):
        with pytest.raises(DomainViolation):
            integrate(CauchyProblem((1.0,), 0.5), horizon=0.0)


class TestNumericBlowup:
    @pytest.mark.parametrize("k,y0,time,bound,direction", FIXED)
    def test_fixed_cases(self, k, y0, time, bound, direction):
        assert numeric_blowup_time(CauchyProblem(k, y0)) == pytest.approx(
            time, rel=1e-3
        )

    def test_report(self):
        report = blowup_report(CauchyProblem((1.0, 2.0), -1.0))
        assert report.numeric_time == pytest.approx(math.log(4.0 / 3.0), rel=1e-3)
        assert 0 <= report.residual <= 1e-3
        assert list(report.to_dict()) == [
            "direction",
            "analytic_time",
            "bound",
            "numeric_time",
            "residual",
        ]

    def test_global_solution_has_no_blowup(self):
        with pytest.raises(DomainViolation):
            numeric_blowup_time(CauchyProblem((1.0, 2.0), 1.5))

    @pytest.mark.parametrize(
        "k,y0",
        [
            ((1.0, 2.0), -1.0),
            ((1.0, 2.0), 4.0),
            ((1.0, 2.0, 3.0), -1.0),
            ((0.5, 1.0, 2.0, 4.0), -0.5),
            ((0.5, 1.0, 2.0, 4.0), 5.0),
        ],
    )
    def test_higher_orders_match_the_closed_form(self, k, y0):
        p = CauchyProblem(k, y0)
        assert numeric_blowup_time(p) == pytest.approx(
            analytic_blowup_time(p).analytic_time, rel=1e-3
        )

    def test_random_cases(self, random_problems):
        for p in random_problems:
            assert numeric_blowup_time(p) == pytest.approx(
                analytic_blowup_time(p).analytic_time, rel=1e-3
            ), p

    @pytest.mark.parametrize("k", [(1.0, 2.0), (1.0, 2.0, 3.0)])
    def test_escape_on_the_remaining_time(self, k):
        p = CauchyProblem(k, -1.0)
        direction = (
            Direction.FORWARD
            if classify_initial(p).blowup_direction is BlowupDirection.FUTURE
            else Direction.BACKWARD
        )
        traj = integrate(p, direction, horizon=1.0)
        assert traj.terminal_status is TerminalStatus.ESCAPED
        t, y = abs(traj.terminal_time), traj.terminal_value
        assert escape_tail(k, y) <= settings.ESCAPE_TAIL_FRACTION * t
        assert abs(y) < settings.Y_ESCAPE_FACTOR * k[-1]

    def test_escape_tail(self):
        # n = 1: exact time left is log(1 + 1 / |y|) from y < 0
        assert escape_tail((1.0,), -1e6) == pytest.approx(math.log1p(1e-6), rel=1e-5)
        assert escape_tail((1.0, 2.0), 1e3) == pytest.approx(1e-6)


class TestDirection:
    def test_adding_a_capacity_flips_the_negative_side(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            k = np.cumsum(np.exp(rng.uniform(math.log(0.2), math.log(3.0), size=6)))
            y0 = -float(np.exp(rng.uniform(math.log(0.1), math.log(10.0))))
            directions = [
                analytic_blowup_time(CauchyProblem(k[:n], y0)).direction
                for n in range(1, 7)
            ]
            expected = [BlowupDirection.FUTURE, BlowupDirection.PAST] * 3
            assert directions == expected, (k, y0)

    def test_positive_side_always_blows_up_in_the_past(self):
        k = (0.5, 1.0, 2.0, 4.0)
        for n in range(1, 5):
            p = CauchyProblem(k[:n], 2.0 * k[n - 1])
            assert analytic_blowup_time(p).direction is BlowupDirection.PAST

    def test_no_blowup_message_is_plain(self):
        with pytest.raises(DomainViolation) as info:
            analytic_blowup_time(CauchyProblem((1.0, 2.0), 1.5))
        message = str(info.value)
        assert "k_n] = [0, 2.0]" in message
        assert "np.float64" not in message
