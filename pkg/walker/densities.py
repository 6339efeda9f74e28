"""
Densities p_n(nu; x) and distribution functions P_n(nu; x)
Exact piecewise forms in odd dimensions, hypergeometric forms for two to four
steps, the planar five-step Taylor series at 0 and the large-dimension limit
"""
from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Any, Callable, Dict, List, Optional, Tuple

import mpmath
import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .errors import DomainError, ExcludedPointError, NearSingularityError, UnsupportedPathError
from .models_pydantic import ConstBasis, DensityMethod, DensityPoint, Parity, QuadSpec, Representation
from .numcore import (ConstCombo, HalfInt, LaurentPoly, PiecewiseFn, apply_half_derivative_operator,
                      assert_polynomial, convolve, kernel_power, parse_rational, to_real)
from .quadrature import cdf_quad, density_quad
from .specfun import constant, gamma, gauss_sum, hyp

logger = logging.getLogger(__name__)

P3_EXCLUSION = mpmath.mpf("1e-3")
P4_EXCLUSION = mpmath.mpf("1e-2")
FD_STEP = mpmath.mpf("1e-3")
SERIES_SWITCH = mpmath.mpf("0.9")

# =============================================================================
# MODELS
# =============================================================================

class DensityClosedForm(BaseModel):
    """A density together with the representation used to evaluate it"""
    n_steps: int = Field(..., ge=2)
    nu: HalfInt
    representation: Representation
    domain: Tuple[float, float] = Field(..., description="Interval on which the representation is valid")

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    def __call__(self, x: Any) -> Any:
        lo, hi = self.domain
        xr = to_real(x)
        if xr < lo or xr > hi:
            raise DomainError(f"{self.representation.value} form of p_{self.n_steps}({self.nu}; x) "
                              f"is valid on [{lo}, {hi}]", x=str(x))
        rep = self.representation
        if rep == Representation.PIECEWISE:
            return density_odd_dim(self.n_steps, _odd_m(self.nu))(x)
        if rep == Representation.CHI:
            return q_chi_asymptotic(self.n_steps, self.nu, x)
        if rep == Representation.TAYLOR:
            return p5_eval(x)
        if self.n_steps == 2:
            return p2(self.nu, x)
        if self.n_steps == 3:
            return p3_hyp(self.nu, x)
        return p4(self.nu, x, method=DensityMethod.CLOSED)

    def total_mass(self) -> Any:
        """Integral over the domain: exact for piecewise forms, mpmath.quad otherwise."""
        if self.representation == Representation.PIECEWISE:
            return density_odd_dim(self.n_steps, _odd_m(self.nu)).total_integral()
        lo, hi = self.domain
        cuts = [lo] + [c for c in range(1, self.n_steps) if lo < c < hi] + [hi if hi != float("inf") else mpmath.inf]
        return mpmath.quad(lambda t: self(t), cuts)


class TaylorDensity(BaseModel):
    """p(x) = sum_k coeffs[k] x^(2k+1) with coefficients over a constant basis"""
    coeffs: Tuple[ConstCombo, ...] = Field(..., description="Coefficient of x^(2k+1) at index k")
    radius: float = Field(1.0, description="Series is used on [0, radius)")

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    def values(self) -> List[mpmath.mpf]:
        return [c.value() for c in self.coeffs]

    def __call__(self, x: Any) -> mpmath.mpf:
        x = to_real(x)
        if not 0 <= x < self.radius:
            raise DomainError(f"series valid on [0, {self.radius}), got x={mpmath.nstr(x, 10)}")
        return mpmath.fsum(v * x ** (2 * k + 1) for k, v in enumerate(self.values()))

# =============================================================================
# ODD DIMENSIONS
# =============================================================================

def _odd_m(nu: Any) -> int:
    nu = HalfInt.of(nu)
    if nu.is_integer:
        raise UnsupportedPathError("exact piecewise densities need an odd dimension", nu=str(nu))
    return (nu.twice + 1) // 2


@lru_cache(maxsize=128)
def density_odd_dim(n: int, m: int) -> PiecewiseFn:
    """Exact density of n steps in dimension 2m+1.

    p_n(m-1/2; x) = (2x)^(2m) (m-1)!/(2m-1)! (-1/(2x) d/dx)^m P(x), where P
    is the n-fold convolution of the one-dimensional projection density
    c (1 - x^2)^(m-1) of a uniform unit vector.
    """
    if n < 2:
        raise DomainError("densities need n >= 2 steps", n=n)
    if m < 1:
        raise DomainError("odd dimension 2m+1 needs m >= 1", m=m)
    kernel = kernel_power(m)
    conv = kernel
    for _ in range(n - 1):
        conv = convolve(conv, kernel)
    reduced = apply_half_derivative_operator(conv, m)
    prefactor = Fraction(2 ** (2 * m) * factorial(m - 1), factorial(2 * m - 1))
    out = reduced.multiply(LaurentPoly.monomial(2 * m, prefactor), parity=Parity.NONE)
    return assert_polynomial(out, f"density_odd_dim({n}, {m})").merged()


@lru_cache(maxsize=128)
def cdf_odd_dim(n: int, m: int) -> PiecewiseFn:
    return density_odd_dim(n, m).cumulative()


def density_regularity(n: int, nu: Any) -> int:
    """Largest r such that p_n(nu; .) is r times continuously differentiable."""
    t = (n - 1) * (HalfInt.of(nu).nu + Fraction(1, 2)) - 1
    return -((-t.numerator) // t.denominator) - 1


def _piece_at(f: PiecewiseFn, x: Fraction) -> LaurentPoly:
    return f.pieces[f.piece_index(x)]


def pn_derivative_at1_residual(n: int, nu: Any) -> Fraction:
    """p_n'(nu; 1) - (2n nu + n - 1)/(n + 1) p_n(nu; 1), exactly."""
    nu = HalfInt.of(nu)
    if n < 3 or (n == 3 and nu.twice == 1):
        raise DomainError("the derivative relation at 1 needs n >= 3 and (n, nu) != (3, 1/2)", n=n, nu=str(nu))
    piece = _piece_at(density_odd_dim(n, _odd_m(nu)), Fraction(1))
    ratio = (2 * n * nu.nu + n - 1) / Fraction(n + 1)
    return piece.derivative()(Fraction(1)) - ratio * piece(Fraction(1))


def pn_diffrel0_residual(n: int, nu: Any) -> Fraction:
    """p_n^(2nu+1)(nu; 0+)/(2nu+1)! - p_{n-1}(nu; 1), exactly."""
    nu = HalfInt.of(nu)
    if n < 4:
        raise DomainError("the derivative relation at 0 needs n >= 4", n=n)
    m = _odd_m(nu)
    first = density_odd_dim(n, m).pieces[0]
    # the (2m)-th derivative at 0 over (2m)! is the x^(2m) coefficient
    return first.coefficient(2 * m) - density_odd_dim(n - 1, m)(Fraction(1))

# =============================================================================
# TWO STEPS
# =============================================================================

def central_binomial(nu: Any) -> mpmath.mpf:
    """binomial(2nu, nu) through Gamma for half-integer nu."""
    v = HalfInt.of(nu).real()
    return mpmath.gamma(2 * v + 1) / mpmath.gamma(v + 1) ** 2


def p2(nu: Any, x: Any) -> mpmath.mpf:
    """2/(pi binom(2nu, nu)) x^(2nu) (4 - x^2)^(nu - 1/2) on (0, 2), zero elsewhere."""
    v = HalfInt.of(nu).real()
    x = to_real(x)
    if x <= 0 or x >= 2:
        if x == 0 or x == 2:
            logger.warning("p2 evaluated at the support endpoint x=%s; returning 0", mpmath.nstr(x, 5))
        return mpmath.mpf(0)
    return 2 / (mpmath.pi * central_binomial(nu)) * x ** (2 * v) * (4 - x * x) ** (v - mpmath.mpf(1) / 2)


def p2_functional_equation_residual(nu: Any, x: Any) -> mpmath.mpf:
    """p2(x)/x - p2(y)/y with y = sqrt(4 - x^2)."""
    x = to_real(x)
    y = mpmath.sqrt(4 - x * x)
    return p2(nu, x) / x - p2(nu, y) / y


def _hyp_switch(upper: List[Any], lower: List[Any], z: mpmath.mpf) -> mpmath.mpf:
    """Direct series away from z = 1, mpmath's transformations near it."""
    if z <= SERIES_SWITCH:
        return hyp(upper, lower, z)
    return mpmath.hyper([to_real(a) for a in upper], [to_real(b) for b in lower], z)


def cdf_p2_closed(nu: Any, x: Any) -> mpmath.mpf:
    """P_2(nu; x) = x^(2nu+1)/(2 sqrt(pi)) Gamma(nu+1)/Gamma(nu+3/2) 2F1(1/2+nu, 1/2-nu; 3/2+nu; x^2/4)."""
    v = HalfInt.of(nu).real()
    x = to_real(x)
    if x <= 0:
        return mpmath.mpf(0)
    if x > 2:
        return mpmath.mpf(1)
    half = mpmath.mpf(1) / 2
    a, b, c = half + v, half - v, 3 * half + v
    pref = x ** (2 * v + 1) / (2 * mpmath.sqrt(mpmath.pi)) * mpmath.gamma(v + 1) / mpmath.gamma(v + 3 * half)
    z = x * x / 4
    if z == 1:
        return pref * gauss_sum(a, b, c)
    return pref * _hyp_switch([a, b], [c], z)


def p2_at1(nu: int) -> ConstCombo:
    """P_2(nu; 1) = 1/3 - sqrt3/(4 pi) sum_{k<nu} 3^k / ((2k+1) binom(2k, k))."""
    if int(nu) != nu or nu < 0:
        raise DomainError("P_2(nu; 1) closed sum needs an integer nu >= 0", nu=str(nu))
    total = sum((Fraction(3 ** k, (2 * k + 1) * comb(2 * k, k)) for k in range(int(nu))), Fraction(0))
    return ConstCombo.of(ConstBasis.CLAUSEN, Fraction(1, 3), -total / 4, 0)

# =============================================================================
# THREE STEPS
# =============================================================================

def p3_argument(x: Any) -> mpmath.mpf:
    x = to_real(x)
    return x * x * (9 - x * x) ** 2 / (3 + x * x) ** 3


def p3_hyp(nu: Any, x: Any) -> mpmath.mpf:
    """p_3(nu; x) from its 2F1(1/3, 2/3; 1+nu; z(x)) form on [0, 3]."""
    nu = HalfInt.of(nu)
    v = nu.real()
    x = to_real(x)
    if x <= 0 or x > 3:
        return mpmath.mpf(0)
    if nu.twice == 0 and abs(x - 1) < P3_EXCLUSION:
        raise NearSingularityError("p_3(0; x) has a logarithmic singularity at x=1; use quadrature",
                                   x=mpmath.nstr(x, 15), radius=mpmath.nstr(P3_EXCLUSION, 3))
    third = mpmath.mpf(1) / 3
    pref = (2 * mpmath.sqrt(3) / mpmath.pi) * mpmath.power(3, -3 * v) / central_binomial(nu)
    algebraic = x ** (2 * v) * (9 - x * x) ** (2 * v) / (3 + x * x)
    z = p3_argument(x)
    if z == 1:
        series = gauss_sum(third, 2 * third, 1 + v)
    else:
        series = _hyp_switch([third, 2 * third], [1 + v], z)
    return x * pref * algebraic * series


def p3_at1(nu: Any) -> mpmath.mpf:
    """(3/(4 pi^2)) (2^(6nu)/nu) (nu!)^5 / ((2nu)! (3nu)!) for nu > 0."""
    v = HalfInt.of(nu).real()
    if v <= 0:
        raise DomainError("p_3(nu; 1) Gamma formula needs nu > 0", nu=str(nu))
    g = mpmath.gamma
    return 3 / (4 * mpmath.pi ** 2) * mpmath.power(2, 6 * v) / v * g(v + 1) ** 5 / (g(2 * v + 1) * g(3 * v + 1))


def p3_at1_cdf(nu: int) -> ConstCombo:
    """P_3(nu; 1) = 1/4 - 1/(3 pi^2) sum_{k=1}^{nu} 2^(6(k-1)) (11k-3) Gamma(k)^5/(Gamma(2k) Gamma(3k))."""
    if int(nu) != nu or nu < 0:
        raise DomainError("P_3(nu; 1) closed sum needs an integer nu >= 0", nu=str(nu))
    total = Fraction(0)
    for k in range(1, int(nu) + 1):
        total += Fraction(2 ** (6 * (k - 1)) * (11 * k - 3) * factorial(k - 1) ** 5,
                          factorial(2 * k - 1) * factorial(3 * k - 1))
    return ConstCombo.of(ConstBasis.ZETA3, Fraction(1, 4), -total / 3, 0)


def p3_functional_equation_residual(nu: Any, x: Any) -> mpmath.mpf:
    """F(x) - ((1+x)/2)^(6nu-2) F((3-x)/(1+x)) with F = p_3/x."""
    v = HalfInt.of(nu).real()
    x = to_real(x)
    if not 0 < x < 3:
        raise DomainError("the functional equation is checked on (0, 3)", x=mpmath.nstr(x, 10))
    y = (3 - x) / (1 + x)
    return p3_hyp(nu, x) / x - ((1 + x) / 2) ** (6 * v - 2) * p3_hyp(nu, y) / y


def p3_dim_recursion_check(nu: Any, x: Any) -> mpmath.mpf:
    """Residual of the recursion giving p_3(nu+1) from p_3(nu) and p_3(nu-1)."""
    nu = HalfInt.of(nu)
    v = nu.real()
    if v < 1:
        raise DomainError("the three-step dimensional recursion needs nu >= 1", nu=str(nu))
    x = to_real(x)
    x2 = x * x
    c1 = v * (v + 1) ** 2 / (6 * (2 * v + 1) * (3 * v + 1) * (3 * v + 2))
    c2 = v ** 2 * (v + 1) ** 2 / (12 * (2 * v - 1) * (2 * v + 1) * (3 * v + 1) * (3 * v + 2))
    rhs = (c1 * (x2 - 3) * (x2 - 6 * x - 3) * (x2 + 6 * x - 3) * p3_hyp(nu, x)
           + c2 * x2 * (x2 - 1) ** 2 * (x2 - 9) ** 2 * p3_hyp(nu.shifted(-1), x))
    return p3_hyp(nu.shifted(1), x) - rhs


def p3_asymptotic_prefactors(nu: Any) -> Tuple[mpmath.mpf, mpmath.mpf]:
    """Leading constants of p_3 at 0 (times x^(2nu+1)) and at 3 (times (3-x)^(2nu))."""
    v = HalfInt.of(nu).real()
    c = central_binomial(nu)
    at0 = 2 / (mpmath.sqrt(3) * mpmath.pi) * mpmath.power(3, v) / c
    at3 = mpmath.sqrt(3) / (2 * mpmath.pi) * mpmath.power(4, v) * mpmath.power(3, v) / c
    return at0, at3


def loglog_slope(fn: Callable[[mpmath.mpf], Any], lo: float = 1e-3, hi: float = 1e-2, points: int = 9) -> float:
    """Least-squares slope of log fn(u) against log u on a geometric grid."""
    grid = np.geomspace(lo, hi, points)
    values = np.array([float(fn(mpmath.mpf(u))) for u in grid])
    slope, _ = np.polyfit(np.log(grid), np.log(values), 1)
    return float(slope)


def p3_endpoint_asymptotics(nu: Any) -> Dict[str, float]:
    """Observed endpoint exponents and the ratio to the leading terms at u = 1e-3."""
    nu = HalfInt.of(nu)
    v = nu.real()
    at0, at3 = p3_asymptotic_prefactors(nu)
    u = mpmath.mpf("1e-3")
    return {
        "slope0": loglog_slope(lambda t: p3_hyp(nu, t)),
        "slope3": loglog_slope(lambda t: p3_hyp(nu, 3 - t)),
        "ratio0": float(p3_hyp(nu, u) / (at0 * u ** (2 * v + 1))),
        "ratio3": float(p3_hyp(nu, 3 - u) / (at3 * u ** (2 * v))),
    }


def _richardson(estimate: Callable[[mpmath.mpf], mpmath.mpf], h: mpmath.mpf) -> mpmath.mpf:
    return (4 * estimate(h / 2) - estimate(h)) / 3


def fd_derivatives(f: Callable[[mpmath.mpf], Any], x: Any, h: Any = FD_STEP) -> Tuple[mpmath.mpf, mpmath.mpf, mpmath.mpf]:
    """First three derivatives by central differences with one Richardson step."""
    x, h = to_real(x), to_real(h)
    d1 = lambda s: (f(x + s) - f(x - s)) / (2 * s)
    d2 = lambda s: (f(x + s) - 2 * f(x) + f(x - s)) / (s * s)
    d3 = lambda s: (f(x + 2 * s) - 2 * f(x + s) + 2 * f(x - s) - f(x - 2 * s)) / (2 * s ** 3)
    return _richardson(d1, h), _richardson(d2, h), _richardson(d3, h)


def p3_third_derivative_residual(nu: Any, h: Any = FD_STEP) -> mpmath.mpf:
    """p3'''(1) - (9/2) nu p3''(1) + (3/8)(3nu-1)(6nu^2+5nu+2) p3(1), numerically."""
    nu = HalfInt.of(nu)
    v = nu.real()
    if v <= 1:
        raise DomainError("the third-derivative relation at 1 needs nu > 1", nu=str(nu))
    _, d2, d3 = fd_derivatives(lambda t: p3_hyp(nu, t), 1, h)
    return d3 - 9 * v / 2 * d2 + mpmath.mpf(3) / 8 * (3 * v - 1) * (6 * v * v + 5 * v + 2) * p3_at1(nu)

# =============================================================================
# FOUR STEPS
# =============================================================================

def _p4_argument(x: mpmath.mpf) -> mpmath.mpf:
    return (16 - x * x) ** 3 / (108 * x ** 4)


def _g_lambda(lam: int, w: mpmath.mpf) -> mpmath.mpf:
    half = mpmath.mpf(1) / 2
    upper = [half + lam] * 3
    lower = [mpmath.mpf(5) / 6 + lam, mpmath.mpf(7) / 6 + lam]
    return _hyp_switch(upper, lower, w)


def p4_domb(x: Any) -> mpmath.mpf:
    """p_4(0; x) = (2/pi^2) sqrt(16-x^2)/x 3F2(1/2,1/2,1/2; 5/6,7/6; w) on [2, 4]."""
    x = to_real(x)
    if not 2 <= x <= 4:
        raise DomainError("the planar four-step 3F2 form is used on [2, 4]", x=mpmath.nstr(x, 10))
    return 2 / mpmath.pi ** 2 * mpmath.sqrt(16 - x * x) / x * _g_lambda(0, _p4_argument(x))


def p4_dim4(x: Any) -> mpmath.mpf:
    """p_4(1; x) on (2, 4) from three contiguous 3F2 functions."""
    x = to_real(x)
    if not 2 < x <= 4:
        raise DomainError("the four-dimensional four-step form is used on (2, 4]", x=mpmath.nstr(x, 10))
    y = x * x
    w = _p4_argument(x)
    r = y ** 5 + 55 * y ** 4 + 1456 * y ** 3 + 25664 * y ** 2 - 90112 * y - 262144
    s = (y - 4) * (y + 32) ** 2 * (y ** 2 + 40 * y + 64)
    bracket = (-(y + 8) ** 2 * _g_lambda(0, w)
               + r / (105 * x ** 4) * _g_lambda(1, w)
               + (16 - y) ** 3 * s / (135135 * mpmath.mpf(16) / 81 * x ** 8) * _g_lambda(2, w))
    return (16 - y) ** mpmath.mpf(2.5) / ((24 * mpmath.pi) ** 2 * x) * bracket


def p4_at2_gamma() -> mpmath.mpf:
    """p_4(0; 2) = 2^(7/3) pi / (3 sqrt3) Gamma(2/3)^-6."""
    return mpmath.power(2, mpmath.mpf(7) / 3) * mpmath.pi / (3 * mpmath.sqrt(3)) * gamma(mpmath.mpf(2) / 3) ** -6


def _p4_closed_available(nu: HalfInt, x: mpmath.mpf) -> bool:
    return (nu.twice == 0 and 2 <= x < 4) or (nu.twice == 2 and 2 < x < 4)


def p4(nu: Any, x: Any, method: DensityMethod = DensityMethod.AUTO, spec: Optional[QuadSpec] = None) -> Any:
    """Four-step density through the exact, closed or quadrature path."""
    nu = HalfInt.of(nu)
    method = DensityMethod(method)
    if method == DensityMethod.QUADRATURE:
        return density_quad(4, nu, x, spec).value
    if not nu.is_integer:
        if method == DensityMethod.CLOSED and nu.twice != 1:
            raise DomainError("closed four-step forms in odd dimensions exist for nu = 1/2", nu=str(nu))
        return density_odd_dim(4, _odd_m(nu))(x)
    if method == DensityMethod.EXACT:
        raise UnsupportedPathError("exact four-step densities need an odd dimension", nu=str(nu))
    xr = to_real(x)
    if xr <= 0 or xr >= 4:
        return mpmath.mpf(0)
    if _p4_closed_available(nu, xr):
        return p4_domb(xr) if nu.twice == 0 else p4_dim4(xr)
    if method == DensityMethod.CLOSED:
        raise DomainError("closed four-step forms need nu in {0, 1/2, 1} and x in (2, 4) for integer nu",
                          nu=str(nu), x=mpmath.nstr(xr, 10))
    return density_quad(4, nu, xr, spec).value


def _p4_dim_polys(v: mpmath.mpf, y: mpmath.mpf) -> Tuple[mpmath.mpf, mpmath.mpf, mpmath.mpf]:
    a = ((4 * v - 1) * (6 * v - 1) * y ** 4 + 2 * (100 * v ** 2 - 23 * v - 1) * y ** 3
         + 2 * (2 * v + 3) * (12 * v + 1) * y ** 2 - 2 * (60 * v ** 2 + 13 * v + 1) * y
         + (2 * v + 1) * (4 * v + 1))
    b = ((10 * v - 3) * y ** 4 + 5 * (12 * v - 1) * y ** 3 - mpmath.mpf(21) / 2 * (8 * v - 1) * y ** 2
         - 20 * v * y + 6 * v + 1)
    c = 4 * y * (y - 2) * (2 * y - 1) * (y ** 2 + 5 * y + 1)
    return a, b, c


def p4_dim_recursion_check(nu: Any, x: Any, spec: Optional[QuadSpec] = None) -> mpmath.mpf:
    """Residual of the recursion giving p_4(nu+1) from p_4(nu), p_4' and p_4''."""
    nu = HalfInt.of(nu)
    v = nu.real()
    x = to_real(x)
    if abs(x - 2) < P4_EXCLUSION:
        raise ExcludedPointError("the four-step dimensional recursion degenerates at x=2",
                                 x=mpmath.nstr(x, 10), radius=mpmath.nstr(P4_EXCLUSION, 3))
    if not 0 < x < 4:
        raise DomainError("the four-step dimensional recursion is checked on (0, 4)", x=mpmath.nstr(x, 10))
    if nu.is_integer:
        value = p4(nu, x, spec=spec)
        d1, d2, _ = fd_derivatives(lambda t: p4(nu, t, spec=spec), x)
    else:
        exact = density_odd_dim(4, _odd_m(nu))
        piece = exact.pieces[exact.piece_index(x)]
        value, d1, d2 = piece(x), piece.derivative()(x), piece.derivative().derivative()(x)
    a, b, c = _p4_dim_polys(v, x * x / 8)
    lead = 3 * (2 * v + 1) * (3 * v + 1) * (3 * v + 2) * (4 * v + 1) * (4 * v + 3) / (64 * (v + 1) ** 3)
    return lead * to_real(p4(nu.shifted(1), x, spec=spec)) - (-a * value + x * b * d1 - c * d2)


_P4_AT2_COMBOS: Dict[int, Tuple[Fraction, Fraction]] = {
    0: (Fraction(1), Fraction(0)),
    1: (Fraction(-14, 3), Fraction(10, 3)),
    2: (Fraction(6656, 315), Fraction(-704, 63)),
}


def p4_at2_combo_check(nu: int, spec: Optional[QuadSpec] = None) -> mpmath.mpf:
    """(pi/sqrt3) p_4(nu; 2) minus its rational combination of W_3(0; -1) and W_3(0; 1)."""
    from .closed_moments import w3_odd

    if nu not in _P4_AT2_COMBOS:
        raise DomainError("p_4(nu; 2) combinations are tabulated for nu in {0, 1, 2}", nu=nu)
    lo, hi = _P4_AT2_COMBOS[nu]
    combo = to_real(lo) * w3_odd(0, -1).value() + to_real(hi) * w3_odd(0, 1).value()
    value = density_quad(4, nu, 2, spec).value
    return mpmath.pi / mpmath.sqrt(3) * value - combo

# =============================================================================
# FIVE STEPS IN THE PLANE
# =============================================================================

def _r5_step(k: int, r_next: Any, r: Any, r_prev: Any) -> Any:
    """r_{5,k+2} from r_{5,k+1}, r_{5,k}, r_{5,k-1}."""
    lead = (15 * (2 * k + 2) * (2 * k + 4)) ** 2
    a = 259 * (2 * k + 2) ** 4 + 104 * (2 * k + 2) ** 2
    b = 35 * (2 * k + 1) ** 4 + 42 * (2 * k + 1) ** 2 + 3
    c = (2 * k) ** 4
    return (r_next * a - r * b + r_prev * c) / lead


def p5_taylor(kmax: int) -> TaylorDensity:
    """Exact coefficients r_{5,0..kmax} over {r50, 1/(pi^4 r50)}."""
    if kmax < 2:
        raise DomainError("p5_taylor needs kmax >= 2", kmax=kmax)
    coeffs = [ConstCombo.of(ConstBasis.R5, 1, 0), ConstCombo.of(ConstBasis.R5, Fraction(13, 225), Fraction(-2, 5))]
    prev = ConstCombo.zero(ConstBasis.R5)
    for k in range(kmax - 1):
        nxt = _r5_step(k, coeffs[k + 1], coeffs[k], prev if k == 0 else coeffs[k - 1])
        coeffs.append(nxt)
    return TaylorDensity(coeffs=tuple(coeffs[:kmax + 1]))


def p5_eval(x: Any, max_terms: int = 5000) -> mpmath.mpf:
    """Planar five-step density on [0, 1) by summing the Taylor series numerically."""
    x = to_real(x)
    if not 0 <= x < 1:
        raise DomainError("the five-step series is used on [0, 1)", x=mpmath.nstr(x, 10))
    r0 = constant("r50")
    r1 = mpmath.mpf(13) / 225 * r0 - mpmath.mpf(2) / 5 / (mpmath.pi ** 4 * r0)
    rs = [mpmath.mpf(0), r0, r1]
    x2 = x * x
    total = r0 * x + r1 * x * x2
    power = x * x2
    tol = mpmath.mpf(10) ** (-mpmath.mp.dps)
    small = 0
    for k in range(max_terms):
        nxt = _r5_step(k, rs[-1], rs[-2], rs[-3])
        rs = [rs[-2], rs[-1], nxt]
        power *= x2
        term = nxt * power
        total += term
        small = small + 1 if abs(term) <= tol * abs(total) else 0
        if small >= 3:
            return total
    logger.warning("p5 series stopped after %d terms at x=%s", max_terms, mpmath.nstr(x, 8))
    return total

# =============================================================================
# LARGE DIMENSIONS
# =============================================================================

def q_chi_asymptotic(n: int, nu: Any, x: Any) -> mpmath.mpf:
    """(2^-nu/nu!) ((2nu+1)/n)^(nu+1) x^(2nu+1) exp(-(2nu+1) x^2/(2n))."""
    v = HalfInt.of(nu).real()
    x = to_real(x)
    if x < 0:
        return mpmath.mpf(0)
    scale = (2 * v + 1) / n
    return mpmath.power(2, -v) / mpmath.gamma(v + 1) * scale ** (v + 1) * x ** (2 * v + 1) * mpmath.exp(-scale * x * x / 2)


def q_chi_moment(n: int, nu: Any, s: Any) -> mpmath.mpf:
    """(2n/(2nu+1))^(s/2) Gamma(nu + s/2 + 1)/Gamma(nu + 1) for s > -2nu - 2."""
    v = HalfInt.of(nu).real()
    s = to_real(s)
    return (2 * n / (2 * v + 1)) ** (s / 2) * mpmath.gamma(v + s / 2 + 1) / mpmath.gamma(v + 1)

# =============================================================================
# DISPATCH
# =============================================================================

def density_form(n: int, nu: Any) -> DensityClosedForm:
    """Best closed representation available for p_n(nu; .)."""
    nu = HalfInt.of(nu)
    if not nu.is_integer:
        return DensityClosedForm(n_steps=n, nu=nu, representation=Representation.PIECEWISE, domain=(0.0, float(n)))
    if n in (2, 3):
        return DensityClosedForm(n_steps=n, nu=nu, representation=Representation.HYPERGEOMETRIC, domain=(0.0, float(n)))
    if n == 4 and nu.twice in (0, 2):
        return DensityClosedForm(n_steps=4, nu=nu, representation=Representation.HYPERGEOMETRIC, domain=(2.0, 4.0))
    if n == 5 and nu.twice == 0:
        return DensityClosedForm(n_steps=5, nu=nu, representation=Representation.TAYLOR, domain=(0.0, 1.0))
    raise UnsupportedPathError(f"no closed form for p_{n}({nu}; x)", n=n, nu=str(nu))


def chi_form(n: int, nu: Any) -> DensityClosedForm:
    return DensityClosedForm(n_steps=n, nu=HalfInt.of(nu), representation=Representation.CHI,
                             domain=(0.0, float("inf")))


def _exact_x(x: Any) -> Any:
    if isinstance(x, str):
        return parse_rational(x)
    return x


def density(n: int, nu: Any, x: Any, method: DensityMethod = DensityMethod.AUTO,
            spec: Optional[QuadSpec] = None) -> DensityPoint:
    """p_n(nu; x) through the requested path; AUTO prefers exact, then closed, then quadrature."""
    nu = HalfInt.of(nu)
    method = DensityMethod(method)
    x = _exact_x(x)
    if method in (DensityMethod.AUTO, DensityMethod.EXACT) and not nu.is_integer:
        fn = density_odd_dim(n, _odd_m(nu))
        lo, hi = fn.domain
        inside = to_real(lo) <= to_real(x) <= to_real(hi)
        value = fn(x) if inside else Fraction(0)
        return DensityPoint(x=x, value=value, method=Representation.PIECEWISE)
    if method == DensityMethod.EXACT:
        raise UnsupportedPathError("exact densities need an odd dimension", nu=str(nu))
    if method in (DensityMethod.AUTO, DensityMethod.CLOSED):
        try:
            value = _closed_density(n, nu, to_real(x))
            return DensityPoint(x=x, value=value, method=Representation.HYPERGEOMETRIC)
        except (UnsupportedPathError, NearSingularityError, DomainError):
            if method == DensityMethod.CLOSED:
                raise
    result = density_quad(n, nu, x, spec)
    return DensityPoint(x=x, value=result.value, method=Representation.QUADRATURE, est_error=result.error)


def _closed_density(n: int, nu: HalfInt, x: mpmath.mpf) -> mpmath.mpf:
    if n == 2:
        return p2(nu, x)
    if n == 3:
        return p3_hyp(nu, x)
    if n == 4:
        return p4(nu, x, method=DensityMethod.CLOSED)
    if n == 5 and nu.twice == 0:
        return p5_eval(x)
    raise UnsupportedPathError(f"no closed form for p_{n}({nu}; x)", n=n, nu=str(nu))


def cdf(n: int, nu: Any, x: Any, method: DensityMethod = DensityMethod.AUTO,
        spec: Optional[QuadSpec] = None) -> DensityPoint:
    """P_n(nu; x) through the exact piecewise CDF, the two-step 2F1 form or quadrature."""
    nu = HalfInt.of(nu)
    method = DensityMethod(method)
    x = _exact_x(x)
    if method in (DensityMethod.AUTO, DensityMethod.EXACT) and not nu.is_integer:
        fn = cdf_odd_dim(n, _odd_m(nu))
        xr = to_real(x)
        if xr <= 0:
            value: Any = Fraction(0)
        elif xr >= n:
            value = Fraction(1)
        else:
            value = fn(x)
        return DensityPoint(x=x, value=value, method=Representation.PIECEWISE)
    if method == DensityMethod.EXACT:
        raise UnsupportedPathError("exact distribution functions need an odd dimension", nu=str(nu))
    if n == 2 and method in (DensityMethod.AUTO, DensityMethod.CLOSED):
        return DensityPoint(x=x, value=cdf_p2_closed(nu, x), method=Representation.HYPERGEOMETRIC)
    if method == DensityMethod.CLOSED:
        raise UnsupportedPathError(f"no closed distribution function for P_{n}({nu}; x)", n=n, nu=str(nu))
    result = cdf_quad(n, nu, x, spec)
    return DensityPoint(x=x, value=result.value, method=Representation.QUADRATURE, est_error=result.error)
