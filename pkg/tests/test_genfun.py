"""
Test generating functions of the even moments against their truncated series
"""
import mpmath
import pytest

from walker.errors import DomainError
from walker.genfun import gf_check, w2_closed, w4dim2_closed
from walker.models_pydantic import GFKind
from walker.numcore import HalfInt


@pytest.mark.parametrize("kind,nu,x,tol", [
    ("w2", 1, 0.05, 1e-10),
    ("w2", "1/2", -0.1, 1e-10),
    ("w3", 0, 0.05, 1e-8),
    ("w3", 2, 0.05, 1e-8),
    ("w4dim2", None, 0.02, 1e-8),
    ("w4dim4", None, 0.02, 1e-8),
    ("w4dim4", 1, 0.01, 1e-8),
])
def test_closed_form_matches_series(kind, nu, x, tol):
    result = gf_check(kind, nu, x, 40)
    assert result.residual <= tol
    assert result.truncation_bound < tol
    assert result.kind == GFKind(kind)


def test_two_step_closed_form_is_catalan_generating_function():
    x = mpmath.mpf("0.1")
    expected = (1 - 2 * x - mpmath.sqrt(1 - 4 * x)) / (2 * x ** 2)
    assert abs(w2_closed(HalfInt.of(1), x) - expected) < 1e-20


def test_planar_four_step_value_at_zero_limit():
    assert abs(w4dim2_closed(mpmath.mpf("1e-8")) - 1) < 1e-6


def test_radius_and_parameter_errors():
    with pytest.raises(DomainError):
        gf_check("w2", 0, 0.3)
    with pytest.raises(DomainError):
        gf_check("w3", 1, 0)
    with pytest.raises(DomainError):
        gf_check("w3", "1/2", 0.05)
    with pytest.raises(DomainError):
        gf_check("w4dim4", 0, 0.02)
    with pytest.raises(DomainError):
        gf_check("w2", None, 0.05)
    with pytest.raises(DomainError):
        gf_check("w2", 0, 0.05, kmax=-1)
