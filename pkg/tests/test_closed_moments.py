"""
Test closed-form moments, odd-moment ladders and the moment dispatcher
"""
from fractions import Fraction

import mpmath
import pytest

from walker.closed_moments import (moment, odd_dim_moment, odd_dim_moment_exact, w2_closed, w3_derivative_at0,
                                   w3_half_closed, w3_odd, w3_residue, w4_derivative_at0, w4_half_closed, w4_odd)
from walker.errors import PoleError, UnsupportedPathError
from walker.exact_moments import even_moment_conv, w2_even_exact
from walker.models_pydantic import ConstBasis, DensityMethod
from walker.numcore import ConstCombo, to_real


def test_two_step_gamma_formula():
    assert abs(w2_closed(0, 6) - 20) < 1e-25
    assert abs(w2_closed("5/2", 0) - 1) < 1e-25
    assert abs(w2_closed(1, 1) - 192 / (45 * mpmath.pi)) < 1e-25
    for k in range(5):
        assert abs(w2_closed("3/2", 2 * k) - to_real(w2_even_exact("3/2", k))) < 1e-20


def test_two_step_pole():
    with pytest.raises(PoleError) as info:
        w2_closed(0, -1)
    assert info.value.details["sign"] in (1, -1)


def test_odd_dimension_moments():
    assert odd_dim_moment_exact(4, "1/2", 2) == 4
    assert odd_dim_moment_exact(4, "1/2", 1) == Fraction(28, 15)
    assert odd_dim_moment_exact(3, "1/2", 0) == 1
    assert odd_dim_moment_exact(3, "3/2", 4) == even_moment_conv(3, "3/2", 2)
    for s in (-1, 0, 1, 3, 5):
        assert odd_dim_moment_exact(4, "1/2", s) == w4_half_closed(s)
        assert odd_dim_moment_exact(3, "1/2", s) == w3_half_closed(s)


def test_odd_dimension_moment_at_real_order():
    s = mpmath.mpf("0.5")
    expected = mpmath.power(2, s + 3) * (mpmath.power(2, s + 2) - 1) / ((s + 2) * (s + 3) * (s + 4))
    assert abs(odd_dim_moment(4, "1/2", s) - expected) < 1e-20
    assert abs(odd_dim_moment(4, "1/2", -2) - mpmath.log(2)) < 1e-25


def test_odd_dimension_pole():
    with pytest.raises(PoleError):
        odd_dim_moment_exact(3, "1/2", -3)


def test_three_step_odd_moments():
    assert w3_odd(0, 1) == ConstCombo.of(ConstBasis.W3, 1, 6)
    assert w3_odd(0, -1) == ConstCombo.of(ConstBasis.W3, 1, 0)
    assert w3_odd(1, 1) == ConstCombo.of(ConstBasis.W3, "476/525", "52/7")
    assert w3_odd(1, -3) == ConstCombo.of(ConstBasis.W3, "4/3", -4)
    assert abs(w3_odd(0, 1).value() - mpmath.mpf("1.5746")) < 5e-5


def test_four_step_odd_moments():
    assert w4_odd(0, 1) == ConstCombo.of(ConstBasis.W4, 16, -48)
    assert w4_odd(0, -1) == ConstCombo.of(ConstBasis.W4, 4, 0)
    assert w4_odd(1, 1) == ConstCombo.of(ConstBasis.W4, "3334144/165375", "-11608064/165375")


def test_ladder_routes_agree():
    for getter in (w3_odd, w4_odd):
        assert getter(1, 1, route="s_first") == getter(1, 1, route="nu_first")


def test_derivatives_at_zero():
    assert w3_derivative_at0(0) == ConstCombo.of(ConstBasis.CLAUSEN, 0, 0, 1)
    assert w3_derivative_at0(1) == ConstCombo.of(ConstBasis.CLAUSEN, "1/2", "-11/16", 1)
    assert w3_derivative_at0(2) == ConstCombo.of(ConstBasis.CLAUSEN, "17/36", "-181/320", 1)
    assert w4_derivative_at0(0) == ConstCombo.of(ConstBasis.ZETA3, 0, 0, "7/2")
    assert w4_derivative_at0(1) == ConstCombo.of(ConstBasis.ZETA3, "3/4", "-53/9", "7/2")
    assert w4_derivative_at0(2) == ConstCombo.of(ConstBasis.ZETA3, "13/24", "-48467/14175", "7/2")


def test_three_step_residues():
    assert w3_residue(0, 0) == ConstCombo.of(ConstBasis.CLAUSEN, 0, "2/3", 0)
    assert abs(w3_residue(0, 0).value() - 2 / (mpmath.sqrt(3) * mpmath.pi)) < 1e-25


def test_moment_dispatch_paths():
    point = moment(4, 1, 4)
    assert point.exact == 22
    assert point.method == "exact"
    assert moment(1, 2, "1/2").exact == 1
    assert moment(2, 1, 1).method == "two-step-gamma"
    odd = moment(4, "1/2", 1)
    assert odd.exact == Fraction(28, 15)
    assert odd.method == "odd-dimension"
    combo = moment(3, 0, 1, method=DensityMethod.CLOSED)
    assert combo.method == "constant-basis"
    assert combo.combo == ConstCombo.of(ConstBasis.W3, 1, 6)


def test_moment_closed_refuses_quadrature():
    with pytest.raises(UnsupportedPathError):
        moment(3, 0, "1/2", method=DensityMethod.CLOSED)
