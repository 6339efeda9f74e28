"""
Test special functions and the constant registry
"""
from fractions import Fraction
from math import comb

import mpmath
import pytest

from walker.errors import ConvergenceError, NonConvergenceError, PoleError, UnknownConstantError
from walker.models_pydantic import HypSeriesSpec
from walker.specfun import (A4_hypergeometric, B4_hypergeometric, agm, agm_iterates, constant, constants_table,
                            elliptic_K, elliptic_Kprime, gamma, gauss_sum, hyp, hyp2f1_pfaff, pfq_exact, pfq_terms)


def test_gamma_values_and_poles():
    assert gamma(5) == 24
    assert abs(gamma(Fraction(1, 2)) - mpmath.sqrt(mpmath.pi)) < 1e-25
    with pytest.raises(PoleError):
        gamma(-2)


def test_two_step_generating_function_series():
    x = mpmath.mpf("0.1")
    closed = hyp([1, mpmath.mpf(3) / 2], [3], 4 * x)
    # W_2(1; 2k) is the Catalan number C_{k+1}
    catalan = [comb(2 * k + 2, k + 1) // (k + 2) for k in range(80)]
    partial = mpmath.fsum(c * x ** k for k, c in enumerate(catalan))
    assert abs(closed - partial) < 1e-20


def test_terminating_series_is_exact():
    # 3F2(-k, -k-nu, nu+1/2; nu+1, 2nu+1; 4) at k=2, nu=1
    upper = [-2, -3, Fraction(3, 2)]
    lower = [2, 3]
    assert pfq_exact(upper, lower, 4) == 12
    assert float(hyp(upper, lower, 4)) == pytest.approx(12)


def test_improbable_five_f_four():
    value = hyp([Fraction(19, 11), 1, 1, 1, 1], [Fraction(8, 11), Fraction(4, 3), Fraction(3, 2), Fraction(5, 3)],
                Fraction(16, 27))
    assert abs(value - 3 * mpmath.pi ** 2 / 16) < 1e-10


def test_identity_at_zero_argument():
    assert hyp([Fraction(1, 3), Fraction(2, 3)], [2], 0) == 1


def test_convergence_errors():
    with pytest.raises(ConvergenceError):
        hyp([1, 1], [1], 2)
    with pytest.raises(ConvergenceError):
        hyp([1, 1], [2], 1)
    with pytest.raises(NonConvergenceError):
        pfq_terms(HypSeriesSpec(upper=[1, 1], lower=[2], argument=mpmath.mpf("0.999"), max_terms=10))


def test_pfaff_transformation_for_negative_arguments():
    a, b, c, z = Fraction(1, 6), Fraction(1, 3), 1, mpmath.mpf("-0.4")
    assert abs(hyp2f1_pfaff(a, b, c, z) - mpmath.hyp2f1(a, b, c, z)) < 1e-20


def test_gauss_sum():
    assert abs(gauss_sum(Fraction(1, 3), Fraction(2, 3), 2) - mpmath.hyp2f1(Fraction(1, 3), Fraction(2, 3), 2, 1)) < 1e-20


def test_agm_and_complete_elliptic_integral():
    steps = agm_iterates(1, mpmath.mpf("0.5"))
    gaps = [abs(a - b) for a, b in steps]
    assert gaps[-1] < gaps[1] ** 2
    assert agm(1, 1) == 1
    k = 1 / mpmath.sqrt(2)
    assert abs(elliptic_Kprime(k) - mpmath.gamma(mpmath.mpf(1) / 4) ** 2 / (4 * mpmath.sqrt(mpmath.pi))) < 1e-20
    m = mpmath.mpf("0.6")
    assert abs(elliptic_K(m) - mpmath.ellipk(m ** 2)) < 1e-20
    assert abs(elliptic_K(m) - elliptic_Kprime(mpmath.mpf("0.8"))) < 1e-20


def test_registry_constants():
    A = constant("A")
    assert abs(A + 6 / (mpmath.pi ** 2 * A) - mpmath.mpf("1.5746")) < 1e-4
    cl = constant("Cl_pi_3")
    assert abs(cl - mpmath.clsin(2, mpmath.pi / 3)) < 1e-20
    assert abs(constant("zeta3") - mpmath.zeta(3)) < 1e-25
    with pytest.raises(UnknownConstantError):
        constant("tau")


def test_registry_tracks_precision():
    with mpmath.workdps(60):
        fine = constant("r50")
    coarse = constant("r50")
    assert abs(fine - coarse) < 1e-25
    assert constant("r50") == coarse


def test_four_step_constants_agree_with_hypergeometric_forms():
    with mpmath.workdps(20):
        assert abs(constant("A4") - A4_hypergeometric()) < 1e-10
        assert abs(constant("B4") - B4_hypergeometric()) < 1e-10


def test_constants_table_names():
    table = constants_table()
    assert set(table) == {"pi", "sqrt3", "A", "A4", "B4", "r50", "Cl_pi_3", "zeta3"}
