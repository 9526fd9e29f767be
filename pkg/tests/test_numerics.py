import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from vnlattice.errors import DomainError
from vnlattice.numerics import (MAX_QUADRATURE_ORDER, entropy_term,
                                erf_interval, gauss_legendre)

SQRT_PI = math.sqrt(math.pi)


def erf_taylor(x, terms=80):
    """Independent oracle: Maclaurin series of erf, accurate to ~1e-16 for |x| <= 3."""
    s = 0.0
    for k in range(terms):
        s += (-1) ** k * x ** (2 * k + 1) / (math.factorial(k) * (2 * k + 1))
    return 2.0 / SQRT_PI * s


class TestErfInterval:
    def test_half_line_is_one(self):
        assert erf_interval(0.0, math.inf) == 1.0

    def test_whole_line_is_two(self):
        assert erf_interval(-math.inf, math.inf) == 2.0

    @pytest.mark.parametrize("x", [0.1, 0.5, SQRT_PI / 2, 1.0, 2.3, 3.0])
    def test_matches_taylor_oracle(self, x):
        assert abs(erf_interval(0.0, x) - erf_taylor(x)) <= 1e-13

    def test_frozen_spot_value(self):
        # Taylor oracle at sqrt(pi)/2 gives 0.7899085945560628
        v = erf_interval(0.0, SQRT_PI / 2)
        assert abs(v - 0.7899085945560628) <= 2e-16
        assert abs(v - 0.789908) <= 1e-6

    @pytest.mark.parametrize("a,b", [(0.0, 1.0), (-0.3, 2.0), (1.5, 7.0),
                                     (6.5, 9.0), (-9.0, -6.5)])
    def test_even_symmetry(self, a, b):
        assert abs(erf_interval(-b, -a) - erf_interval(a, b)) <= 1e-16

    @pytest.mark.parametrize("a,b", [(0.0, 1.0), (2.0, 5.0), (-1.0, 0.5)])
    def test_reversed_arguments_negate(self, a, b):
        assert erf_interval(b, a) == -erf_interval(a, b)

    @pytest.mark.parametrize("a", [0.2, 1.0, 2.5])
    def test_centered_interval_doubles(self, a):
        assert_allclose(erf_interval(-a, a), 2.0 * erf_interval(0.0, a), rtol=0, atol=1e-16)

    def test_additivity(self):
        pts = [-math.inf, -8.0, -6.2, -2.0, -0.3, 0.0, 0.7, 3.0, 6.5, 9.0, math.inf]
        for x1 in pts:
            for x2 in pts:
                for x3 in pts:
                    lhs = erf_interval(x1, x2) + erf_interval(x2, x3)
                    assert abs(lhs - erf_interval(x1, x3)) <= 1e-13

    def test_far_tail_survives_cancellation(self):
        # both limits beyond the switch: a naive erf difference is exactly 0
        assert math.erf(8.0) - math.erf(7.0) == 0.0
        v = erf_interval(7.0, 8.0)
        assert v > 0.0
        assert abs(v - (math.erfc(7.0) - math.erfc(8.0))) <= 1e-16

    def test_far_negative_tail_mirrors_positive(self):
        assert abs(erf_interval(-8.0, -7.0) - erf_interval(7.0, 8.0)) <= 1e-30

    @pytest.mark.parametrize("a,b", [(-math.inf, math.inf), (-9.0, 9.0), (0.0, 0.0)])
    def test_result_range(self, a, b):
        assert -2.0 <= erf_interval(a, b) <= 2.0


class TestGaussLegendre:
    def test_order2_degree3_exactness(self):
        rule = gauss_legendre(2, -1.0, 1.0)
        assert abs(rule.integrate(lambda x: x ** 2) - 2.0 / 3.0) <= 1e-14

    def test_exponential_order8(self):
        rule = gauss_legendre(8, 0.0, 1.0)
        assert abs(rule.integrate(np.exp) - (math.e - 1.0)) <= 1e-12

    @pytest.mark.parametrize("order", [1, 2, 5, 8, 32, 64, MAX_QUADRATURE_ORDER])
    @pytest.mark.parametrize("a,b", [(-1.0, 1.0), (0.0, 1.0), (-2.5, 7.0)])
    def test_weights_sum_to_interval_length(self, order, a, b):
        rule = gauss_legendre(order, a, b)
        assert abs(float(np.sum(rule.weights)) - (b - a)) <= 1e-13 * max(1.0, b - a)

    def test_nodes_strictly_increasing_inside_open_interval(self):
        rule = gauss_legendre(16, -3.0, 4.0)
        assert np.all(np.diff(rule.nodes) > 0)
        assert rule.nodes[0] > -3.0 and rule.nodes[-1] < 4.0

    def test_spot_check_high_degree_exactness(self):
        # order 5: exact through degree 9
        rule = gauss_legendre(5, -1.0, 1.0)
        assert abs(rule.integrate(lambda x: x ** 9)) <= 1e-12
        assert abs(rule.integrate(lambda x: x ** 8) - 2.0 / 9.0) <= 1e-12

    def test_deterministic(self):
        r1 = gauss_legendre(20, 0.0, 2.0)
        r2 = gauss_legendre(20, 0.0, 2.0)
        assert np.array_equal(r1.nodes, r2.nodes)
        assert np.array_equal(r1.weights, r2.weights)

    @pytest.mark.parametrize("order", [0, -3, MAX_QUADRATURE_ORDER + 1])
    def test_bad_order_rejected(self, order):
        with pytest.raises(DomainError):
            gauss_legendre(order, -1.0, 1.0)

    def test_bad_interval_rejected(self):
        with pytest.raises(DomainError):
            gauss_legendre(4, 1.0, 1.0)


class TestEntropyTerm:
    def test_conventions(self):
        assert entropy_term(0.0) == 0.0
        assert entropy_term(1.0) == 0.0

    def test_maximum_at_inverse_e(self):
        assert abs(entropy_term(1.0 / math.e) - 1.0 / math.e) <= 1e-16

    def test_clamping_band(self):
        assert entropy_term(-1e-16) == 0.0
        assert entropy_term(1.0 + 1e-16) == 0.0

    @pytest.mark.parametrize("p", [-1e-13, -0.5, 1.001, 2.0])
    def test_outside_band_rejected(self, p):
        with pytest.raises(DomainError):
            entropy_term(p)

    def test_range(self):
        for p in np.linspace(0.0, 1.0, 1001):
            v = entropy_term(float(p))
            assert 0.0 <= v <= 1.0 / math.e

    def test_concavity(self):
        rng = np.random.default_rng(42)
        ps = rng.uniform(0.0, 1.0, size=200)
        qs = rng.uniform(0.0, 1.0, size=200)
        for p, q in zip(ps, qs):
            mid = entropy_term((p + q) / 2.0)
            avg = (entropy_term(float(p)) + entropy_term(float(q))) / 2.0
            assert mid >= avg - 1e-12
