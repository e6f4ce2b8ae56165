import math

import numpy as np
import pytest

from scipy import integrate

from blowuplab.core.divdiff import (
    bound_deficit,
    cm_derivative,
    cm_limit_at_zero,
    divided_difference,
    f_log1p_over_x,
    locate_mean_value_point,
    mean_value_bound_check,
    naive_divided_difference,
)
from blowuplab.utils.errors import DomainViolation, SeparationViolation
from blowuplab.utils.typing import CMDerivativeQuery


@pytest.fixture(scope="session")
def random_nodesets():
    rng = np.random.default_rng(3)
    out = []
    for _ in range(300):
        n = int(rng.integers(1, 7))
        x = np.exp(rng.uniform(math.log(1e-3), math.log(10.0), size=n))
        if n == 1 or np.min(np.diff(np.sort(x))) / max(1.0, x.max()) > 1e-2:
            out.append(x)
    return out


class TestLog1pOverX:
    @pytest.mark.parametrize(
        "x,expected",
        [(0.0, 1.0), (1.0, math.log(2.0)), (2.0, math.log(3.0) / 2.0)],
    )
    def test_values(self, x, expected):
        assert f_log1p_over_x(x) == pytest.approx(expected, rel=1e-15)

    def test_series_branch_is_continuous(self):
        for x in (1e-12, 5e-5, 9.99e-5, 1.01e-4):
            assert f_log1p_over_x(x) == pytest.approx(math.log1p(x) / x, rel=1e-15)

    def test_vectorized(self):
        out = f_log1p_over_x(np.array([0.0, 1.0, 2.0]))
        np.testing.assert_allclose(out, [1.0, math.log(2.0), math.log(3.0) / 2.0])

    def test_domain(self):
        with pytest.raises(DomainViolation):
            f_log1p_over_x(-0.5)
        assert f_log1p_over_x(-0.5, extended=True) == pytest.approx(
            math.log(0.5) / -0.5
        )
        with pytest.raises(DomainViolation):
            f_log1p_over_x(-1.0, extended=True)


class TestDividedDifference:
    def test_two_points(self):
        value = divided_difference((1.0, 2.0), f_log1p_over_x)
        assert value == pytest.approx(-0.1438411, abs=1e-7)
        assert value == pytest.approx(math.log(3.0) / 2.0 - math.log(2.0), rel=1e-13)

    def test_polynomials(self):
        nodes = (0.5, 1.5, 2.0, 4.0)
        constant = divided_difference(nodes, lambda t: np.full_like(t, 3.0))
        assert constant == pytest.approx(0.0, abs=1e-14)
        cubic = divided_difference(nodes, lambda t: t**3)
        assert cubic == pytest.approx(1.0, rel=1e-12)

    def test_single_node(self):
        assert divided_difference((2.0,), f_log1p_over_x) == pytest.approx(
            math.log(3.0) / 2.0
        )

    def test_naive_sum_agrees(self, random_nodesets):
        for x in random_nodesets:
            # the tableau loses digits on clustered nodes
            if x.size > 1 and np.min(np.diff(np.sort(x))) < 0.1 * max(1.0, x.max()):
                continue
            newton = divided_difference(x, f_log1p_over_x)
            naive = naive_divided_difference(x, f_log1p_over_x)
            assert newton == pytest.approx(naive, rel=1e-6, abs=1e-12)

    def test_order_of_the_nodes_does_not_matter(self, random_nodesets):
        rng = np.random.default_rng(4)
        for x in random_nodesets:
            value = divided_difference(x, f_log1p_over_x)
            for _ in range(3):
                shuffled = x[rng.permutation(x.size)]
                assert divided_difference(shuffled, f_log1p_over_x) == value, x

    def test_rejects_bad_nodes(self):
        with pytest.raises(SeparationViolation):
            divided_difference((1.0, 1.0), f_log1p_over_x)
        with pytest.raises(DomainViolation):
            divided_difference((0.0, 1.0), f_log1p_over_x)


class TestCompletelyMonotone:
    def test_known_values(self):
        assert cm_derivative(CMDerivativeQuery(0, 1.0)) == pytest.approx(
            math.log(2.0), rel=1e-12
        )
        assert cm_derivative(CMDerivativeQuery(1, 1.0)) == pytest.approx(
            math.log(2.0) - 0.5, rel=1e-12
        )

    @pytest.mark.parametrize("order,expected", [(0, 1.0), (1, 0.5), (3, 1.5)])
    def test_limit(self, order, expected):
        assert cm_limit_at_zero(order) == expected
        assert cm_derivative(CMDerivativeQuery(order, 0.0)) == expected

    @pytest.mark.parametrize("order", range(0, 7))
    def test_approaches_limit(self, order):
        # the distance to the limit is (n+1)! / (n+2) * x to first order
        slope = math.factorial(order + 1) / (order + 2)
        grid = [1e-4, 1e-5, 1e-6, 1e-7, 1e-8]
        gaps = [
            cm_limit_at_zero(order) - cm_derivative(CMDerivativeQuery(order, x))
            for x in grid
        ]
        assert all(a > b > 0 for a, b in zip(gaps[:-1], gaps[1:]))
        for x, gap in zip(grid, gaps):
            assert gap <= 1.01 * slope * x, (x, gap)
            assert gap >= 0.99 * slope * x, (x, gap)

    @pytest.mark.parametrize("order", range(0, 9))
    def test_positive_and_decreasing(self, order):
        grid = np.logspace(-6, 4, 41)
        values = [cm_derivative(CMDerivativeQuery(order, x)) for x in grid]
        assert all(v > 0 for v in values)
        assert all(a > b for a, b in zip(values[:-1], values[1:]))

    def test_matches_scipy(self):
        for order, x in ((2, 0.3), (5, 7.0), (8, 150.0)):
            ref, _ = integrate.quad(
                lambda t: t**order / (1 + t * x) ** (order + 1),
                0.0,
                1.0,
                epsabs=0.0,
                epsrel=1e-13,
                limit=200,
            )
            assert cm_derivative(CMDerivativeQuery(order, x)) == pytest.approx(
                math.factorial(order) * ref, rel=1e-10
            )

    @pytest.mark.parametrize("order,x", [(-1, 1.0), (13, 1.0), (1.5, 1.0), (1, -1.0)])
    def test_invalid_queries(self, order, x):
        with pytest.raises(DomainViolation):
            cm_derivative(CMDerivativeQuery(order, x))


class TestMeanValueBound:
    def test_two_points(self):
        value, bound = mean_value_bound_check((1.0, 2.0))
        assert value == pytest.approx(0.1438411, abs=1e-7)
        assert bound == 0.5

    def test_one_point(self):
        value, bound = mean_value_bound_check((1.0,))
        assert value == pytest.approx(math.log(2.0), rel=1e-12)
        assert bound == 1.0

    def test_three_points_against_newton(self):
        value, bound = mean_value_bound_check((1.0, 2.0, 3.0))
        newton = divided_difference((1.0, 2.0, 3.0), f_log1p_over_x)
        assert bound == pytest.approx(1.0 / 3.0)
        assert value == pytest.approx(newton, rel=1e-10)
        assert 0 < value < bound

    def test_strict_bounds(self, random_nodesets):
        for x in random_nodesets:
            value, bound = mean_value_bound_check(x)
            assert 0 < value < bound
            assert bound_deficit(x) > 0

    def test_clustered_nodes_keep_the_deficit(self):
        # the direct sum of divided differences is swamped by round-off here
        assert bound_deficit((1e-6, 2e-6, 3e-6, 4e-6)) > 0

    @pytest.mark.parametrize(
        "nodes", [(1.0, 2.0), (0.5, 1.0, 4.0), (2.0, 3.0, 5.0, 9.0)]
    )
    def test_mean_value_point(self, nodes):
        x0 = locate_mean_value_point(nodes)
        assert min(nodes) < x0 < max(nodes)
        order = len(nodes) - 1
        value, _ = mean_value_bound_check(nodes)
        assert cm_derivative(CMDerivativeQuery(order, x0)) == pytest.approx(
            math.factorial(order) * value, rel=1e-9
        )
