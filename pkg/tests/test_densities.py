"""
Test densities and distribution functions on their exact and closed paths
"""
from fractions import Fraction

import mpmath
import pytest

from walker.densities import (cdf, cdf_odd_dim, cdf_p2_closed, chi_form, density, density_form, density_odd_dim,
                              density_regularity, p2, p2_at1, p2_functional_equation_residual, p3_at1,
                              p3_at1_cdf, p3_endpoint_asymptotics, p3_functional_equation_residual, p3_hyp, p4,
                              p4_at2_gamma, p4_dim_recursion_check, p4_domb, p5_eval, p5_taylor,
                              pn_derivative_at1_residual, pn_diffrel0_residual, q_chi_asymptotic, q_chi_moment)
from walker.errors import DomainError, ExcludedPointError, NearSingularityError, UnsupportedPathError
from walker.models_pydantic import DensityMethod, Representation
from walker.numcore import to_real


def test_odd_dimension_pieces():
    p3 = density_odd_dim(3, 1)
    assert p3(Fraction(1, 2)) == Fraction(1, 8)
    assert p3(2) == Fraction(1, 2)
    p4_half = density_odd_dim(4, 1)
    assert p4_half(1) == Fraction(5, 16)
    assert p4_half(3) == Fraction(3, 16)
    assert p4_half(0) == 0


def test_odd_dimension_densities_are_normalized():
    for n in range(2, 6):
        for m in (1, 2):
            assert density_odd_dim(n, m).total_integral() == 1
            assert cdf_odd_dim(n, m)(n) == 1


def test_odd_dimension_derivative_relations():
    for n in (4, 5):
        assert pn_derivative_at1_residual(n, "1/2") == 0
        assert pn_diffrel0_residual(n, "1/2") == 0
    with pytest.raises(DomainError):
        pn_derivative_at1_residual(3, "1/2")


def test_regularity_order():
    assert density_regularity(2, 0) == -1
    assert density_regularity(4, "1/2") == 1
    assert density_regularity(3, 1) == 1


def test_two_step_density():
    assert abs(p2(0, mpmath.sqrt(2)) - 2 / (mpmath.pi * mpmath.sqrt(2))) < 1e-25
    assert p2(1, 2) == 0
    assert p2(1, "5/2") == 0
    assert abs(p2_functional_equation_residual(1, mpmath.mpf("0.7"))) < 1e-25
    assert abs(p2("1/2", Fraction(7, 10)) - mpmath.mpf(7) / 20) < 1e-25


def test_two_step_distribution_function():
    assert abs(cdf_p2_closed("1/2", 1) - mpmath.mpf(1) / 4) < 1e-20
    assert abs(cdf_p2_closed(0, 1) - mpmath.mpf(1) / 3) < 1e-20
    assert abs(cdf_p2_closed(1, 1) - p2_at1(1).value()) < 1e-20
    assert abs(cdf_p2_closed(2, 2) - 1) < 1e-20
    assert cdf_p2_closed(1, 3) == 1


def test_three_step_density_at_one():
    assert abs(p3_hyp(1, 1) - 4 / mpmath.pi ** 2) < 1e-20
    assert abs(p3_at1(1) - 4 / mpmath.pi ** 2) < 1e-25
    for nu in (2, 3):
        assert abs(p3_at1(nu) - p3_hyp(nu, 1)) < 1e-15
    assert abs(p3_at1_cdf(2).value() - (mpmath.mpf(1) / 4 - 256 / (135 * mpmath.pi ** 2))) < 1e-25


def test_three_step_matches_piecewise_form():
    for x in (Fraction(1, 3), Fraction(2), Fraction(5, 2)):
        assert abs(p3_hyp("1/2", x) - to_real(density_odd_dim(3, 1)(x))) < 1e-15


def test_three_step_singularity_guard():
    with pytest.raises(NearSingularityError):
        p3_hyp(0, 1)
    with pytest.raises(NearSingularityError):
        density(3, 0, 1, method=DensityMethod.CLOSED)


def test_three_step_functional_equation():
    assert abs(p3_functional_equation_residual(1, mpmath.mpf("0.4"))) < 1e-15
    assert abs(p3_functional_equation_residual(2, mpmath.mpf("2.5"))) < 1e-15
    assert abs(p3_functional_equation_residual(1, 1)) < 1e-25


def test_three_step_endpoint_behaviour():
    got = p3_endpoint_asymptotics(1)
    assert got["slope0"] == pytest.approx(3, abs=0.05)
    assert got["slope3"] == pytest.approx(2, abs=0.05)
    assert got["ratio0"] == pytest.approx(1, abs=0.01)
    assert got["ratio3"] == pytest.approx(1, abs=0.01)


def test_four_step_forms():
    assert p4("1/2", Fraction(1)) == Fraction(5, 16)
    assert abs(p4_domb(2) - p4_at2_gamma()) < 1e-8
    with pytest.raises(DomainError):
        p4(1, 1, method=DensityMethod.CLOSED)
    with pytest.raises(ExcludedPointError):
        p4_dim_recursion_check("1/2", 2)


def test_five_step_series_coefficients():
    values = p5_taylor(2).values()
    assert abs(values[0] - mpmath.mpf("0.329934")) < 5e-7
    assert abs(values[1] - mpmath.mpf("0.00661673")) < 5e-9
    assert abs(values[2] - mpmath.mpf("0.000262333")) < 1e-9
    assert abs(values[2] - mpmath.mpf("0.000262332354")) < 5e-12
    assert abs(p5_eval(mpmath.mpf("0.3")) - p5_taylor(40)(mpmath.mpf("0.3"))) < 1e-15
    with pytest.raises(DomainError):
        p5_eval(1)
    with pytest.raises(DomainError):
        p5_taylor(1)


def test_chi_limit():
    # mass of the limiting density
    assert abs(mpmath.quad(lambda t: q_chi_asymptotic(3, 1, t), [0, mpmath.inf]) - 1) < 1e-15
    s = mpmath.mpf("1.5")
    direct = mpmath.quad(lambda t: t ** s * q_chi_asymptotic(3, 2, t), [0, mpmath.inf])
    assert abs(direct - q_chi_moment(3, 2, s)) < 1e-10
    assert abs(q_chi_moment(5, "1/2", 0) - 1) < 1e-25
    assert chi_form(3, 2).representation == Representation.CHI


def test_density_forms():
    assert density_form(4, "1/2").representation == Representation.PIECEWISE
    assert density_form(3, 1).representation == Representation.HYPERGEOMETRIC
    assert density_form(5, 0).representation == Representation.TAYLOR
    assert density_form(4, 1).domain == (2.0, 4.0)
    assert density_form(3, "1/2").total_mass() == 1
    with pytest.raises(UnsupportedPathError):
        density_form(6, 2)


def test_density_dispatch():
    point = density(3, "3/2", "1/2")
    assert point.method == Representation.PIECEWISE
    assert point.value == density_odd_dim(3, 2)(Fraction(1, 2))
    assert density(3, "1/2", 4).value == 0
    closed = density(2, 1, "1/2")
    assert closed.method == Representation.HYPERGEOMETRIC
    with pytest.raises(UnsupportedPathError):
        density(3, 1, 1, method=DensityMethod.EXACT)


def test_cdf_dispatch():
    assert cdf(3, "1/2", 3).value == 1
    assert cdf(3, "1/2", -1).value == 0
    assert cdf(4, "1/2", 2).value == density_odd_dim(4, 1).cumulative()(2)
    assert cdf(2, 1, 1).method == Representation.HYPERGEOMETRIC
    with pytest.raises(UnsupportedPathError):
        cdf(3, 1, 1, method=DensityMethod.CLOSED)
