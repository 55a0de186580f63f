import math

import mpmath
import numpy as np
import pytest
from scipy.special import gammaln

from covertfas.geometry import CorrelationMatrix, repair_to_psd
from covertfas.special import bessel_j0, cholesky_psd, student_t_cdf, student_t_quantile


def j0_series_hp(x: float) -> float:
    """Ascending-series J0 oracle in 40-digit arithmetic.

    The alternating series cancels catastrophically in float64 beyond
    |x| ~ 10, so the oracle sums in extended precision and rounds once.
    """
    with mpmath.workdps(40):
        xm = mpmath.mpf(x)
        s, term, m = mpmath.mpf(0), mpmath.mpf(1), 0
        q = -((xm / 2) ** 2)
        while abs(term) > mpmath.mpf("1e-40"):
            s += term
            m += 1
            term *= q / (m * m)
        return float(s)


def t_pdf(x: float, nu: float) -> float:
    return math.exp(
        gammaln((nu + 1) / 2)
        - gammaln(nu / 2)
        - 0.5 * math.log(nu * math.pi)
        - 0.5 * (nu + 1) * math.log1p(x * x / nu)
    )

# Frozen references (independent oracles, 30-digit arithmetic):
#   first J0 zero located by bisection on the ascending series
J0_FIRST_ZERO = 2.4048255576957727686
#   quantile of the t(40) law at 0.975 by root-finding on the
#   regularized-incomplete-beta CDF
T40_Q975 = 2.0210753903062734213
#   t(40) CDF at 2.0211 from the same oracle
T40_CDF_2_0211 = 0.97500132926331347085


class TestBesselJ0:
    def test_at_zero(self):
        assert bessel_j0(0.0) == 1.0

    def test_first_zero(self):
        assert abs(bessel_j0(2.404826)) < 1e-5
        assert bessel_j0(J0_FIRST_ZERO) == pytest.approx(0.0, abs=1e-14)

    def test_against_series_oracle(self):
        for x in np.linspace(-20.0, 20.0, 81):
            assert bessel_j0(float(x)) == pytest.approx(j0_series_hp(float(x)), abs=1e-12)

    def test_two_pi(self):
        assert bessel_j0(2 * math.pi) == pytest.approx(0.22027690853993446, abs=1e-12)

    def test_even(self):
        for x in (0.3, 1.7, 9.2):
            assert bessel_j0(x) == bessel_j0(-x)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            bessel_j0(float("nan"))
        with pytest.raises(ValueError):
            bessel_j0(np.array([1.0, np.inf]))

    def test_array_input(self):
        x = np.array([0.0, 2 * math.pi])
        out = bessel_j0(x)
        assert out.shape == (2,)
        assert out[0] == 1.0


class TestStudentTCdf:
    def test_median(self):
        for nu in (1.0, 2.5, 40.0, 1000.0):
            assert student_t_cdf(0.0, nu) == 0.5

    def test_cauchy_closed_form(self):
        # nu=1: CDF = 1/2 + arctan(x)/pi
        for x in (-3.0, -1.0, 1.0, 2.5):
            assert student_t_cdf(x, 1.0) == pytest.approx(
                0.5 + math.atan(x) / math.pi, abs=1e-13
            )
        assert student_t_cdf(1.0, 1.0) == pytest.approx(0.75, abs=1e-13)

    def test_frozen_beta_oracle_value(self):
        assert student_t_cdf(2.0211, 40.0) == pytest.approx(T40_CDF_2_0211, abs=1e-13)

    def test_infinities(self):
        assert student_t_cdf(math.inf, 5.0) == 1.0
        assert student_t_cdf(-math.inf, 5.0) == 0.0

    def test_rejects_bad_nu(self):
        with pytest.raises(ValueError):
            student_t_cdf(0.0, 0.0)
        with pytest.raises(ValueError):
            student_t_cdf(0.0, -3.0)


class TestStudentTQuantile:
    def test_median(self):
        for nu in (1.0, 7.0, 500.0):
            assert student_t_quantile(0.5, nu) == 0.0

    def test_cauchy_closed_form(self):
        # nu=1: quantile = tan(pi*(p - 1/2))
        for p in (0.6, 0.75, 0.9):
            assert student_t_quantile(p, 1.0) == pytest.approx(
                math.tan(math.pi * (p - 0.5)), abs=1e-12
            )
        assert student_t_quantile(0.75, 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_frozen_value_nu40(self):
        assert student_t_quantile(0.975, 40.0) == pytest.approx(T40_Q975, abs=1e-10)

    def test_residual_below_contract(self):
        for p in (1e-6, 0.01, 0.3, 0.7, 0.99, 1 - 1e-6):
            for nu in (1.0, 2.0, 5.0, 40.0, 1000.0):
                x = student_t_quantile(p, nu)
                assert abs(student_t_cdf(x, nu) - p) <= 1e-12

    def test_endpoints(self):
        assert student_t_quantile(0.0, 3.0) == -math.inf
        assert student_t_quantile(1.0, 3.0) == math.inf

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            student_t_quantile(-0.1, 3.0)
        with pytest.raises(ValueError):
            student_t_quantile(1.1, 3.0)
        with pytest.raises(ValueError):
            student_t_quantile(0.5, 0.0)

    def test_mutual_inverse_over_grid(self):
        # Routing the probability through a float64 caps the recoverable
        # tail resolution at spacing(p)/pdf(x); 1e-8 applies wherever that
        # limit allows (e.g. it is ~5e-3 at x=8, nu=1000 for any
        # implementation, since T(8) only leaves 6e-16 of headroom below 1).
        for nu in (1.0, 2.0, 5.0, 40.0, 1000.0):
            for x in np.linspace(-8.0, 8.0, 33):
                p = student_t_cdf(float(x), nu)
                back = student_t_quantile(p, nu)
                resolution = float(np.spacing(max(p, 1.0 - p))) / t_pdf(float(x), nu)
                assert back == pytest.approx(float(x), abs=1e-8 + 4.0 * resolution)

    def test_symmetry(self):
        for nu in (1.0, 5.0, 40.0):
            for p in (0.01, 0.2, 0.45):
                assert student_t_quantile(1 - p, nu) == pytest.approx(
                    -student_t_quantile(p, nu), abs=1e-10
                )


class TestCholeskyPsd:
    def test_identity(self):
        L = cholesky_psd(CorrelationMatrix(np.eye(3)))
        assert np.allclose(L, np.eye(3))

    def test_two_by_two_closed_form(self):
        rho = 0.6
        L = cholesky_psd(CorrelationMatrix(np.array([[1.0, rho], [rho, 1.0]])))
        want = np.array([[1.0, 0.0], [rho, math.sqrt(1 - rho * rho)]])
        assert np.allclose(L, want, atol=1e-14)

    def test_degenerate_all_ones(self):
        repaired = repair_to_psd(np.ones((3, 3)))
        L = cholesky_psd(CorrelationMatrix(repaired))
        assert np.linalg.norm(L @ L.T - repaired) <= 1e-8
        assert np.allclose(L @ L.T, np.ones((3, 3)), atol=1e-4)

    def test_deterministic(self):
        m = CorrelationMatrix(repair_to_psd(np.ones((4, 4))))
        a = cholesky_psd(m)
        b = cholesky_psd(m)
        assert np.array_equal(a, b)
