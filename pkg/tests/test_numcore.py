"""
Test exact arithmetic: rationals, half-integers, Laurent and piecewise polynomials
"""
from fractions import Fraction

import pytest

from walker.errors import DomainError, UnsupportedPathError
from walker.models_pydantic import ConstBasis, Parity
from walker.numcore import (ConstCombo, HalfInt, LaurentPoly, PiecewiseFn, apply_half_derivative_operator,
                            convolve, eval_piecewise, format_rational, kernel_power, parse_rational)


def test_parse_and_format_rational():
    assert parse_rational("3/2") == Fraction(3, 2)
    assert parse_rational("0.25") == Fraction(1, 4)
    assert parse_rational("1e-3") == Fraction(1, 1000)
    assert parse_rational(-7) == -7
    assert format_rational(Fraction(6, 4)) == "3/2"
    assert format_rational(Fraction(8, 4)) == "2"
    with pytest.raises(DomainError):
        parse_rational("one half")


def test_half_int_dimension_mapping():
    nu = HalfInt.from_dim(5)
    assert nu.nu == Fraction(3, 2)
    assert nu.dim == 5
    assert not nu.is_integer
    assert str(nu) == "3/2"
    assert int(HalfInt.from_dim(4)) == 1
    assert HalfInt.of("1/2").shifted(1) == HalfInt.from_dim(5)
    with pytest.raises(UnsupportedPathError):
        int(nu)
    with pytest.raises(DomainError):
        HalfInt.of("1/3")
    with pytest.raises(DomainError):
        HalfInt.from_dim(1)


def test_laurent_poly_arithmetic():
    p = LaurentPoly({0: 3, 2: -1})
    q = LaurentPoly({-1: 2, 1: 1})
    assert (p + q) - q == p
    assert p * LaurentPoly.constant(0) == LaurentPoly()
    assert (p * q).coefficient(-1) == 6
    assert p.derivative() == LaurentPoly({1: -2})
    assert p.integrate(0, 1) == Fraction(8, 3)
    assert p.reflect() == p
    assert LaurentPoly({1: 1}).substitute_linear(2, 3) == LaurentPoly({0: 3, 1: 2})


def test_laurent_poly_rejects_logarithmic_antiderivative():
    with pytest.raises(UnsupportedPathError):
        LaurentPoly({-1: 1}).antiderivative()


def test_laurent_poly_is_distributive():
    a = LaurentPoly({0: Fraction(1, 3), 3: -2})
    b = LaurentPoly({-2: 5, 1: Fraction(7, 4)})
    c = LaurentPoly({2: Fraction(-1, 6)})
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)


def test_box_convolution_is_a_triangle():
    box = kernel_power(1)
    tri = convolve(box, box)
    assert tri(0) == Fraction(1, 2)
    assert tri(1) == Fraction(1, 4)
    assert tri(-1) == Fraction(1, 4)
    assert tri(Fraction(3, 2)) == Fraction(1, 8)
    assert tri.total_integral() == 1


def test_three_box_convolution_pieces():
    box = kernel_power(1)
    f = convolve(box, convolve(box, box))
    assert f(0) == Fraction(3, 8)
    assert f(Fraction(1, 2)) == Fraction(3 - Fraction(1, 4), 8)
    assert f(2) == Fraction(1, 16)
    assert f(-2) == Fraction(1, 16)
    assert f.total_integral() == 1


def test_convolution_commutes_and_keeps_mass():
    k1, k2 = kernel_power(1), kernel_power(2)
    left, right = convolve(k1, k2), convolve(k2, k1)
    for x in (Fraction(0), Fraction(1, 3), Fraction(1), Fraction(3, 2)):
        assert left(x) == right(x)
    assert left.total_integral() == 1


def test_kernel_powers_are_normalized():
    for m in range(1, 5):
        assert kernel_power(m).total_integral() == 1


def test_half_derivative_operator():
    f = PiecewiseFn(breaks=(0, 1), pieces=(LaurentPoly({0: Fraction(3, 8), 2: Fraction(-1, 8)}),))
    assert apply_half_derivative_operator(f, 1).pieces[0] == LaurentPoly.constant(Fraction(1, 8))
    flat = PiecewiseFn(breaks=(0, 1), pieces=(LaurentPoly.constant(5),))
    assert apply_half_derivative_operator(flat, 1).pieces[0].is_zero
    quartic = PiecewiseFn(breaks=(0, 1), pieces=(LaurentPoly.monomial(4),))
    assert apply_half_derivative_operator(quartic, 2).pieces[0] == LaurentPoly.constant(2)


def test_piecewise_left_piece_owns_breakpoint():
    f = PiecewiseFn(breaks=(0, 1, 2), pieces=(LaurentPoly.constant(1), LaurentPoly.constant(2)))
    assert eval_piecewise(f, 1) == 1
    assert eval_piecewise(f, Fraction(3, 2)) == 2
    with pytest.raises(DomainError):
        f(3)


def test_piecewise_layout_validation():
    with pytest.raises(ValueError):
        PiecewiseFn(breaks=(0, 2, 1), pieces=(LaurentPoly(), LaurentPoly()))
    with pytest.raises(ValueError):
        PiecewiseFn(breaks=(1, 2), pieces=(LaurentPoly(),), parity=Parity.EVEN)


def test_piecewise_cumulative_and_json():
    f = PiecewiseFn(breaks=(0, 1, 2), pieces=(LaurentPoly({1: 1}), LaurentPoly({0: 2, 1: -1})))
    F = f.cumulative()
    assert F(1) == Fraction(1, 2)
    assert F(2) == 1
    again = PiecewiseFn.from_json(f.to_json())
    assert again(Fraction(3, 2)) == f(Fraction(3, 2))


def test_const_combo_arithmetic_and_text():
    a = ConstCombo.of(ConstBasis.W3, 1, 6)
    b = ConstCombo.of(ConstBasis.W3, "476/525", "52/7")
    assert (a + b).coeffs == (Fraction(1001, 525), Fraction(94, 7))
    assert (a * 2 - a) == a
    assert str(a) == "(1)*A + (6)*1/(pi^2 A)"
    assert a.to_dict() == {"basis": "w3", "coeffs": {"A": "1", "1/(pi^2 A)": "6"}}
    with pytest.raises(DomainError):
        a + ConstCombo.of(ConstBasis.W4, 1, 1)
    with pytest.raises(ValueError):
        ConstCombo.of(ConstBasis.CLAUSEN, 1)
