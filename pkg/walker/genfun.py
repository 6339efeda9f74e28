"""
Generating functions of the even moments
Closed hypergeometric forms of sum_k W_n(nu; 2k) x^k compared with the
truncated exact series
"""
from __future__ import annotations

import logging
from fractions import Fraction
from math import comb
from typing import Any, Callable, Dict, Optional, Tuple

import mpmath

from .errors import DomainError
from .exact_moments import gf3_principal_part, moment_table, principal_part_terms
from .models_pydantic import GFCheck, GFKind
from .numcore import HalfInt, to_real
from .specfun import hyp, hyp2f1_pfaff

logger = logging.getLogger(__name__)

# Series radius 1/n^2 for w2/w3; the four-step closed forms are used well inside
# 1/16 so that 108x/(16x-1)^3 stays below one for negative x as well.
RADIUS: Dict[GFKind, Fraction] = {
    GFKind.W2: Fraction(1, 4),
    GFKind.W3: Fraction(1, 9),
    GFKind.W4DIM4: Fraction(1, 32),
    GFKind.W4DIM2: Fraction(1, 32),
}

STEPS: Dict[GFKind, int] = {GFKind.W2: 2, GFKind.W3: 3, GFKind.W4DIM4: 4, GFKind.W4DIM2: 4}

# =============================================================================
# CLOSED FORMS
# =============================================================================

def w2_closed(nu: HalfInt, x: mpmath.mpf) -> mpmath.mpf:
    """2F1(1, nu+1/2; 2nu+1; 4x)"""
    v = nu.real()
    return hyp2f1_pfaff(1, v + mpmath.mpf(1) / 2, 2 * v + 1, 4 * x)


def w3_closed(nu: HalfInt, x: mpmath.mpf) -> mpmath.mpf:
    """Hypergeometric side minus its principal part sum_{k<0} H(nu; k) x^k."""
    v = int(nu)
    z = 27 * x * (1 - x) ** 2 / (1 + 3 * x) ** 3
    third = mpmath.mpf(1) / 3
    f = hyp([third, 2 * third], [1 + v], z) if z >= 0 else hyp2f1_pfaff(third, 2 * third, 1 + v, z)
    head = (-1) ** v / mpmath.mpf(comb(2 * v, v)) * (1 - 1 / x) ** (2 * v) / (1 + 3 * x)
    principal = mpmath.fsum(to_real(c) * x ** k for k, c in principal_part_terms(v).items())
    return head * f - principal


def _domb_argument(x: mpmath.mpf) -> Tuple[mpmath.mpf, mpmath.mpf]:
    """y = 108x/(16x-1)^3 and dy/dx."""
    u = 16 * x - 1
    return 108 * x / u ** 3, -108 * (32 * x + 1) / u ** 4


def _domb_hyp(y: mpmath.mpf, shift: int = 0) -> mpmath.mpf:
    a, b = mpmath.mpf(1) / 6, mpmath.mpf(1) / 3
    return hyp2f1_pfaff(a + shift, b + shift, 1 + shift, y)


def w4dim2_closed(x: mpmath.mpf) -> mpmath.mpf:
    """(1-16x)^-1 2F1(1/6, 1/3; 1; 108x/(16x-1)^3)^2"""
    y, _ = _domb_argument(x)
    return _domb_hyp(y) ** 2 / (1 - 16 * x)


def w4dim4_closed(x: mpmath.mpf) -> mpmath.mpf:
    """Four-dimensional form built from F_0 and F_1, with 1/(2x^2) - 1/x added back."""
    y, dy = _domb_argument(x)
    f = _domb_hyp(y)
    # d/dx 2F1(a, b; 1; y(x)) = ab 2F1(a+1, b+1; 2; y) y'(x)
    df = _domb_hyp(y, 1) * dy / 18
    f0 = f / (2 * x * (16 * x - 1))
    f1 = df / (6 * x)
    rhs = (32 * x - 7) * f0 ** 2 - (4 * x - 1) * ((32 * x + 3) * f0 * f1 - (16 * x ** 2 + 10 * x + mpmath.mpf(1) / 4) * f1 ** 2)
    return rhs + 1 / (2 * x ** 2) - 1 / x

# =============================================================================
# CHECK
# =============================================================================

def _resolve_nu(kind: GFKind, nu: Optional[Any]) -> HalfInt:
    fixed = {GFKind.W4DIM4: HalfInt(twice=2), GFKind.W4DIM2: HalfInt(twice=0)}
    if kind in fixed:
        if nu is not None and HalfInt.of(nu) != fixed[kind]:
            raise DomainError(f"{kind.value} is defined for nu={fixed[kind]} only", nu=str(nu))
        return fixed[kind]
    if nu is None:
        raise DomainError(f"{kind.value} needs nu")
    nu = HalfInt.of(nu)
    if kind == GFKind.W3 and not nu.is_integer:
        raise DomainError("the three-step generating function needs an integer nu", nu=str(nu))
    return nu


def closed_side(kind: GFKind, nu: HalfInt, x: mpmath.mpf) -> mpmath.mpf:
    closed: Dict[GFKind, Callable[[], mpmath.mpf]] = {
        GFKind.W2: lambda: w2_closed(nu, x),
        GFKind.W3: lambda: w3_closed(nu, x),
        GFKind.W4DIM4: lambda: w4dim4_closed(x),
        GFKind.W4DIM2: lambda: w4dim2_closed(x),
    }
    return closed[kind]()


def gf_check(kind: Any, nu: Optional[Any], x: Any, kmax: int = 40) -> GFCheck:
    """Closed generating function at x against sum_{k <= kmax} W_n(nu; 2k) x^k.

    The truncation bound uses W_n(nu; 2k) <= n^(2k).
    """
    kind = GFKind(kind)
    nu = _resolve_nu(kind, nu)
    xr = to_real(x)
    if xr == 0 or abs(xr) >= to_real(RADIUS[kind]):
        raise DomainError(f"{kind.value} needs 0 < |x| < {RADIUS[kind]}", x=str(x))
    if kmax < 0:
        raise DomainError("kmax must be nonnegative", kmax=kmax)
    n = STEPS[kind]
    if kind == GFKind.W3:
        _, coeffs = gf3_principal_part(int(nu), kmax)
    else:
        coeffs = list(moment_table(n, nu, kmax).values)
    with mpmath.extradps(10):
        series = mpmath.fsum(to_real(c) * xr ** k for k, c in enumerate(coeffs))
        closed = closed_side(kind, nu, xr)
    ratio = float(n * n * abs(xr))
    bound = ratio ** (kmax + 1) / (1 - ratio)
    result = GFCheck(kind=kind, nu=str(nu), x=float(xr), kmax=kmax, closed=+closed, series=+series,
                     truncation_bound=bound)
    logger.debug("gf %s nu=%s x=%s residual %.3e (bound %.3e)", kind.value, nu, x, result.residual, bound)
    return result
