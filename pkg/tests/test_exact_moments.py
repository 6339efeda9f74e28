"""
Test exact even moments, Narayana matrices, recursions and residues
"""
from fractions import Fraction

import pytest

from walker.errors import DomainError, UnsupportedPathError
from walker.exact_moments import (even_moment_conv, even_moment_multinomial, gf3_principal_part, moment_poly_in_n,
                                  moment_poly_value, moment_table, narayana_matrix, narayana_power_rowsums,
                                  residues_v3, validate_dim_recursion, validate_recursion_w3,
                                  validate_recursion_w4, validate_recursion_w5, w2_even_exact,
                                  w3_even_hypergeometric)
from walker.numcore import LaurentPoly


def test_even_moment_examples():
    assert even_moment_multinomial(2, 0, 3) == 20
    assert even_moment_multinomial(2, 1, 3) == 14
    assert even_moment_multinomial(4, 0, 4) == 2716
    assert even_moment_conv(3, 2, 3) == Fraction(139, 3)
    assert even_moment_conv(5, 1, 2) == 35
    for n in range(1, 6):
        assert even_moment_conv(n, "3/2", 0) == 1


def test_multinomial_matches_convolution():
    for nu in range(3):
        for n in range(1, 6):
            for k in range(8):
                assert even_moment_multinomial(n, nu, k) == even_moment_conv(n, nu, k)


def test_multinomial_rejects_half_odd_nu():
    with pytest.raises(UnsupportedPathError):
        even_moment_multinomial(3, "1/2", 2)


def test_moment_table_rows():
    table = moment_table(4, 1, 4)
    assert list(table.values) == [1, 4, 22, 148, 1144]
    assert table.rows()[2] == {"k": 2, "s": 4, "value": "22"}
    assert list(moment_table(3, 0, 4).values) == [1, 3, 15, 93, 639]
    with pytest.raises(DomainError):
        moment_table(0, 1, 3)


def test_integrality_and_denominators():
    for nu in (0, 1):
        for n in range(2, 6):
            assert all(v.denominator == 1 and v > 0 for v in moment_table(n, nu, 8).values)
    for v in moment_table(4, 2, 8).values:
        d = v.denominator
        while d % 3 == 0:
            d //= 3
        assert d == 1


def test_second_moment_is_n():
    for n in range(1, 7):
        for nu in ("0", "1/2", "5/2"):
            assert even_moment_conv(n, nu, 1) == n


def test_two_step_closed_forms():
    for k in range(6):
        assert w2_even_exact(1, k) == even_moment_conv(2, 1, k)
        assert w2_even_exact("3/2", k) == even_moment_conv(2, "3/2", k)


def test_three_step_hypergeometric_form():
    assert w3_even_hypergeometric(1, 2) == 12
    for nu in (0, 1, 2):
        for k in range(6):
            assert w3_even_hypergeometric(nu, k) == even_moment_conv(3, nu, k)


def test_narayana_row_sums():
    assert narayana_power_rowsums(1, 3, 4) == [1, 4, 22, 148]
    assert narayana_power_rowsums(1, 1, 3) == [1, 2, 5]
    assert narayana_power_rowsums("1/2", 2, 1) == [1]
    assert narayana_power_rowsums(2, 2, 5) == list(moment_table(3, 2, 4).values)
    m = narayana_matrix(1, 3)
    assert m.entries[0] == (1, 0, 0)
    assert m.entries[2][2] == 1


def test_moment_recursions():
    assert validate_recursion_w3(0, 8)
    assert validate_recursion_w3(1, 8)
    assert validate_recursion_w4(0, 8, [1, 4, 28, 256, 2716, 31504, 387136, 4951552, 65218204, 878536624])
    assert validate_recursion_w5(0, 3, [1, 5, 45, 545, 7885])
    for nu in (1, 2, 3):
        assert validate_recursion_w4(nu, 6)
        assert validate_recursion_w5(nu, 6)


def test_recursion_falsification():
    values = list(moment_table(3, 0, 9).values)
    values[4] += 1
    assert not validate_recursion_w3(0, 8, values)
    with pytest.raises(DomainError):
        validate_recursion_w3(0, 8, values[:5])


def test_dimensional_recursions():
    for n in (3, 4, 5):
        for nu in (1, 2, 3):
            assert validate_dim_recursion(n, nu, 5)
    with pytest.raises(DomainError):
        validate_dim_recursion(3, "1/2", 3)


def test_residue_sequences():
    assert list(residues_v3(2, 8).values) == [1, -5, 6, 2, 6, 18, 66, 278, 1296]
    assert residues_v3(3, 4).values[4] == 0
    assert list(residues_v3(0, 4).values) == [1, 3, 15, 93, 639]
    assert residues_v3(1, 2).rows()[1] == {"k": 1, "value": "-2"}
    with pytest.raises(UnsupportedPathError):
        residues_v3("1/2", 3)


def test_three_step_principal_parts():
    q2, tail = gf3_principal_part(2, 6)
    assert q2 == LaurentPoly({0: Fraction(1, 6), 1: Fraction(-5, 6), 2: 1, 3: Fraction(1, 3), 4: 1})
    assert tail == list(moment_table(3, 2, 6).values)
    q0, tail0 = gf3_principal_part(0, 3)
    assert q0.is_zero
    assert tail0 == [1, 3, 15, 93]
    assert gf3_principal_part(1, 3)[1] == [1, 3, 12, 57]


def test_polynomials_in_n():
    assert moment_poly_value(4, 1, 2) == 22
    assert moment_poly_value(7, "5/2", 1) == 7
    assert moment_poly_value(3, 0, 3) == 93
    for nu in (0, 1, 2):
        for k in (1, 2, 3):
            assert moment_poly_in_n(nu, k)["agree"]
    with pytest.raises(DomainError):
        moment_poly_value(3, 0, 4)
