"""
Test the normalized Bessel function and the oscillatory Bessel-integral oracle
"""
from fractions import Fraction

import mpmath
import pytest

from walker.errors import DivergenceError, DomainError, PoleError
from walker.models_pydantic import QuadSpec
from walker.numcore import HalfInt
from walker.quadrature import (BoostedIntegrand, cdf_quad, default_boost, density_quad, euler_average,
                               hankel_coefficients, jnu, jnu_asymptotic, jnu_series, moment_boost, moment_quad,
                               residue_quad, truncated_power)


def test_normalized_bessel_small_and_large_arguments():
    assert jnu(1, 0) == 1
    assert abs(jnu("1/2", 3) - mpmath.sin(3) / 3) < 1e-25
    assert abs(jnu(1, 1) - 2 * mpmath.besselj(1, 1)) < 1e-25
    assert abs(jnu(0, 45) - mpmath.besselj(0, 45)) < 1e-20
    assert abs(jnu(2, -4) - jnu(2, 4)) < 1e-25


def test_series_and_asymptotic_overlap():
    t = mpmath.mpf(30)
    assert abs(jnu_series(1, t) - jnu_asymptotic(1, t)) < 1e-12


def test_hankel_coefficients_terminate_for_half_order():
    coeffs = hankel_coefficients("1/2", 4)
    assert coeffs[0] == 1
    assert all(c == 0 for c in coeffs[1:])


def test_truncated_power():
    # (1 + y)^3 up to y^2
    assert truncated_power([1, 1], 3, 2) == [1, 3, 3]


def test_boosted_integrand_at_zero():
    plain = BoostedIntegrand(n_steps=3, nu=HalfInt.of(0), k=0)
    assert plain.at_zero() == 1
    assert plain.term_count == 1
    boosted = BoostedIntegrand(n_steps=3, nu=HalfInt.of(1), k=2)
    assert boosted.term_count == 6
    t = mpmath.mpf("0.7")
    assert abs(boosted(t) - boosted._combine([jnu(1 + m, t) for m in range(3)])) < 1e-25


def test_boost_rules():
    assert default_boost(2, 0) == 4
    assert default_boost(5, "1/2") == 1
    assert moment_boost(3, 0, -1) == 0
    assert moment_boost(3, 0, 3) == 2
    with pytest.raises(DomainError):
        moment_boost(3, 0, -2)


def test_euler_average_of_alternating_sums():
    partial = [mpmath.fsum((-1) ** j / mpmath.mpf(j + 1) for j in range(m)) for m in range(10, 30)]
    value, error = euler_average(partial)
    assert abs(value - mpmath.log(2)) < 1e-10
    assert error < 1e-8


def test_density_against_piecewise_form():
    result = density_quad(3, "1/2", Fraction(3, 2))
    assert abs(result.value - mpmath.mpf(9) / 16) < 1e-8
    assert result.boost_k == default_boost(3, "1/2")
    assert density_quad(3, 0, 5).value == 0


def test_distribution_function_against_known_values():
    assert abs(cdf_quad(2, 0, 1).value - mpmath.mpf(1) / 3) < 1e-8
    assert abs(cdf_quad(3, "1/2", 1).value - mpmath.mpf(1) / 6) < 1e-8
    assert cdf_quad(2, 0, 3).value == 1


def test_moment_against_gamma_formula():
    result = moment_quad(2, 1, 1)
    assert abs(result.value - 192 / (45 * mpmath.pi)) < 1e-8
    assert abs(moment_quad(3, 0, 2).value - 3) < 1e-8


def test_quadrature_errors():
    with pytest.raises(PoleError):
        moment_quad(2, 0, -2)
    with pytest.raises(DomainError):
        moment_quad(3, 0, 3, QuadSpec(boost_k=1))
    with pytest.raises(DomainError):
        density_quad(2, 0, 1, QuadSpec(boost_k=0))
    with pytest.raises(DivergenceError):
        residue_quad(4, 0, 3)
    with pytest.raises(DomainError):
        residue_quad(3, 0, -1)
