"""
Closed-form moment functions W_n(nu; s)
Two-step Gamma formula, odd-dimension rational forms and odd moments over
constant bases built by exact recursion ladders
"""
from __future__ import annotations

import logging
import threading
from fractions import Fraction
from math import comb
from typing import Any, Callable, Dict, List, Literal, Optional, Tuple

import mpmath
from pydantic import BaseModel, ConfigDict, Field

from .densities import density_odd_dim
from .errors import DomainError, InvariantViolation, LadderDegenerateError, PoleError, UnsupportedPathError
from .exact_moments import _moment_rows, dim_recursion_residual, rec3_residual, rec4_residual, residues_v3
from .models_pydantic import ConstBasis, DensityMethod, MomentPoint, QuadSpec
from .numcore import ConstCombo, HalfInt, LaurentPoly, PiecewiseFn, is_exact, parse_rational, to_real

logger = logging.getLogger(__name__)

Route = Literal["s_first", "nu_first"]

# =============================================================================
# TWO STEPS
# =============================================================================

def w2_closed(nu: Any, s: Any) -> mpmath.mpf:
    """nu! Gamma(s+2nu+1) / (Gamma(s/2+nu+1) Gamma(s/2+2nu+1))"""
    v = HalfInt.of(nu).real()
    s = to_real(parse_rational(s) if isinstance(s, str) else s)
    num = [v + 1, s + 2 * v + 1]
    den = [s / 2 + v + 1, s / 2 + 2 * v + 1]
    value = mpmath.gammaprod(num, den)
    if mpmath.isinf(value):
        # sign of the blow-up just right of the pole
        t = s + mpmath.mpf(10) ** (-(mpmath.mp.dps // 2))
        nearby = mpmath.gammaprod([v + 1, t + 2 * v + 1], [t / 2 + v + 1, t / 2 + 2 * v + 1])
        raise PoleError(f"W_2(nu; s) has a pole at s={mpmath.nstr(s, 10)}", pole=mpmath.nstr(s, 10),
                        sign=1 if nearby > 0 else -1)
    return value

# =============================================================================
# ODD DIMENSIONS
# =============================================================================

class OddDimMomentForm(BaseModel):
    """Moments of an odd-dimensional density by exact per-piece integration"""
    n_steps: int = Field(..., ge=2)
    nu: HalfInt
    density: PiecewiseFn

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    def _terms(self, s: Any):
        for a, b, piece in self.density.segments():
            for e, c in piece.items():
                yield a, b, e, c

    def exact(self, s: Any) -> Fraction:
        """Exact value at an integer s; logarithms or non-integer s raise UnsupportedPathError."""
        s = parse_rational(s)
        if s.denominator != 1:
            raise UnsupportedPathError("exact odd-dimension moments need an integer s", s=str(s))
        total = Fraction(0)
        for a, b, e, c in self._terms(s):
            p = int(s) + e + 1
            if p == 0:
                if a == 0:
                    raise PoleError(f"W_{self.n_steps}({self.nu}; s) has a pole at s={s}", pole=str(s))
                raise UnsupportedPathError("moment contains a logarithm", s=str(s))
            total += c * (Fraction(b) ** p - Fraction(a) ** p) / p
        return total

    def evaluate(self, s: Any) -> mpmath.mpf:
        if is_exact(s) or isinstance(s, str):
            try:
                return to_real(self.exact(s))
            except UnsupportedPathError:
                pass
        s = to_real(parse_rational(s) if isinstance(s, str) else s)
        terms = []
        for a, b, e, c in self._terms(s):
            p = s + e + 1
            cr = to_real(c)
            if p == 0:
                if a == 0:
                    raise PoleError(f"W_{self.n_steps}({self.nu}; s) has a pole at s={mpmath.nstr(s, 10)}",
                                    pole=mpmath.nstr(s, 10))
                terms.append(cr * mpmath.log(to_real(b) / to_real(a)))
            elif a == 0:
                terms.append(cr * to_real(b) ** p / p)
            else:
                terms.append(cr * (to_real(b) ** p - to_real(a) ** p) / p)
        return mpmath.fsum(terms)


def odd_dim_moment_form(n: int, nu: Any) -> OddDimMomentForm:
    nu = HalfInt.of(nu)
    if nu.is_integer:
        raise DomainError("odd-dimension moments need a half-odd nu", nu=str(nu))
    m = (nu.twice + 1) // 2
    return OddDimMomentForm(n_steps=n, nu=nu, density=density_odd_dim(n, m))


def odd_dim_moment(n: int, nu: Any, s: Any) -> mpmath.mpf:
    return odd_dim_moment_form(n, nu).evaluate(s)


def odd_dim_moment_exact(n: int, nu: Any, s: Any) -> Fraction:
    return odd_dim_moment_form(n, nu).exact(s)


def w3_half_closed(s: Any) -> Any:
    """(3^(s+3) - 3) / (4 (s+2)(s+3)) for three steps in three dimensions."""
    s = parse_rational(s) if isinstance(s, str) else s
    if is_exact(s) and Fraction(s).denominator == 1:
        s = int(s)
        return (Fraction(3) ** (s + 3) - 3) / (4 * (s + 2) * (s + 3))
    s = to_real(s)
    return (mpmath.power(3, s + 3) - 3) / (4 * (s + 2) * (s + 3))


def w4_half_closed(s: Any) -> Any:
    """2^(s+3) (2^(s+2) - 1) / ((s+2)(s+3)(s+4)) for four steps in three dimensions."""
    s = parse_rational(s) if isinstance(s, str) else s
    if s == -2:
        # removable singularity
        return mpmath.log(2)
    if is_exact(s) and Fraction(s).denominator == 1:
        s = int(s)
        return Fraction(2) ** (s + 3) * (Fraction(2) ** (s + 2) - 1) / ((s + 2) * (s + 3) * (s + 4))
    s = to_real(s)
    return mpmath.power(2, s + 3) * (mpmath.power(2, s + 2) - 1) / ((s + 2) * (s + 3) * (s + 4))

# =============================================================================
# RECURSION LADDERS
# =============================================================================

def _solve_linear(fn: Callable[..., Any], unknown: int, args: List[Any], zero: Any, where: Dict[str, Any]) -> Any:
    """Solve fn(*args) = 0 for args[unknown]; fn is homogeneous linear in its arguments."""
    probe = [Fraction(0)] * len(args)
    probe[unknown] = Fraction(1)
    lead = fn(*probe)
    if lead == 0:
        raise LadderDegenerateError("leading recursion coefficient vanishes", **where)
    trial = list(args)
    trial[unknown] = zero
    rest = fn(*trial)
    return rest * (-1 / Fraction(lead))


class _Family(BaseModel):
    n_steps: int
    basis: ConstBasis
    seeds: Dict[int, Tuple[int, ...]]
    model_config = ConfigDict(frozen=True)

    def rec(self, nu: Fraction, k: Fraction, w_next: Any, w: Any, w_prev: Any) -> Any:
        fn = rec3_residual if self.n_steps == 3 else rec4_residual
        return fn(nu, k, w_next, w, w_prev)


_FAMILIES = {
    3: _Family(n_steps=3, basis=ConstBasis.W3, seeds={-1: (1, 0), 1: (1, 6)}),
    4: _Family(n_steps=4, basis=ConstBasis.W4, seeds={-1: (4, 0), 1: (16, -48)}),
}


class OddMomentLadder(BaseModel):
    """Memo of W_n(nu; s) at odd s as exact combos, with the relation each entry came from"""
    n_steps: int = Field(..., ge=3, le=4)
    basis: ConstBasis
    table: Dict[Tuple[str, int, int], ConstCombo] = Field(default_factory=dict)
    provenance: Dict[Tuple[str, int, int], Tuple[Any, ...]] = Field(default_factory=dict)

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @property
    def family(self) -> _Family:
        return _FAMILIES[self.n_steps]

    def _store(self, key, value: ConstCombo, origin: Tuple[Any, ...]) -> ConstCombo:
        self.table[key] = value
        self.provenance[key] = origin
        return value

    def _read(self, key) -> ConstCombo:
        value = self.table[key]
        origin = self.provenance[key]
        route, nu, s = key
        if origin[0] == "s":
            k = Fraction(s - 2, 2)
            res = self.family.rec(Fraction(nu), k, value, self.table[(route, nu, s - 2)], self.table[(route, nu, s - 4)])
        elif origin[0] == "nu":
            lower = lambda j: self.table[(route, nu - 1, s + 2 * j)]
            res = dim_recursion_residual(self.n_steps, Fraction(nu), s, lower, value)
        else:
            return value
        if not res.is_zero:
            raise InvariantViolation(f"stored W_{self.n_steps}({nu}; {s}) fails its recursion", nu=nu, s=s)
        return value

    def _from_dim(self, route: str, nu: int, s: int) -> ConstCombo:
        lower = [self.get_at(route, nu - 1, s + 2 * j) for j in (1, 2)]
        zero = ConstCombo.zero(self.basis)
        fn = lambda here, l1, l2: dim_recursion_residual(self.n_steps, Fraction(nu), s, lambda j: (l1, l2)[j - 1], here)
        value = _solve_linear(fn, 0, [zero] + lower, zero, {"nu": nu, "s": s})
        return self._store((route, nu, s), value, ("nu",))

    def _climb(self, route: str, nu: int, s: int) -> ConstCombo:
        lo = -2 * nu - 1
        for t in (lo, lo + 2):
            key = (route, nu, t)
            if key in self.table:
                continue
            if nu == 0:
                self._store(key, ConstCombo(basis=self.basis, coeffs=self.family.seeds[t]), ("seed",))
            else:
                self._from_dim(route, nu, t)
        t = lo + 2
        while t < s:
            key = (route, nu, t + 2)
            if key not in self.table:
                k = Fraction(t, 2)
                zero = ConstCombo.zero(self.basis)
                fn = lambda nxt, cur, prev: self.family.rec(Fraction(nu), k, nxt, cur, prev)
                args = [zero, self.table[(route, nu, t)], self.table[(route, nu, t - 2)]]
                self._store(key, _solve_linear(fn, 0, args, zero, {"nu": nu, "s": t + 2}), ("s",))
            t += 2
        return self.table[(route, nu, s)]

    def get_at(self, route: str, nu: int, s: int) -> ConstCombo:
        key = (route, nu, s)
        if key in self.table:
            return self._read(key)
        if route == "nu_first" or nu == 0:
            return self._climb(route, nu, s)
        return self._from_dim(route, nu, s)

    def get(self, nu: int, s: int, route: Route = "s_first") -> ConstCombo:
        if route not in ("s_first", "nu_first"):
            raise DomainError(f"unknown ladder route {route!r}")
        if int(nu) != nu or nu < 0:
            raise DomainError("odd moments over constant bases need an integer nu >= 0", nu=nu)
        nu, s = int(nu), int(s)
        if s % 2 == 0:
            raise DomainError("odd moments need an odd s", s=s)
        if s <= -(2 * nu + 2):
            raise DomainError(f"s={s} is at or below the first pole s=-{2 * nu + 2}", s=s, nu=nu)
        return self.get_at(route, nu, s)


_LADDERS: Dict[int, OddMomentLadder] = {}
_LADDER_LOCK = threading.Lock()


def odd_moment_ladder(n: int) -> OddMomentLadder:
    if n not in _FAMILIES:
        raise UnsupportedPathError(f"odd-moment ladders exist for n in (3, 4), got {n}")
    with _LADDER_LOCK:
        if n not in _LADDERS:
            _LADDERS[n] = OddMomentLadder(n_steps=n, basis=_FAMILIES[n].basis)
        return _LADDERS[n]


def w3_odd(nu: int, s: int, route: Route = "s_first") -> ConstCombo:
    ladder = odd_moment_ladder(3)
    with _LADDER_LOCK:
        return ladder.get(nu, s, route)


def w4_odd(nu: int, s: int, route: Route = "s_first") -> ConstCombo:
    ladder = odd_moment_ladder(4)
    with _LADDER_LOCK:
        return ladder.get(nu, s, route)

# =============================================================================
# DERIVATIVES AT ZERO
# =============================================================================

def _derivative_table(n: int, nu: int, kmax: int) -> Dict[int, ConstCombo]:
    """D(nu; 2k) = dW_n/ds at s = 2k for 0 <= k <= kmax, as exact combos."""
    basis = ConstBasis.CLAUSEN if n == 3 else ConstBasis.ZETA3
    combo = lambda *c: ConstCombo(basis=basis, coeffs=c)
    w = lambda mu, k: _moment_rows(n, HalfInt(twice=2 * mu), k + 1)[k]
    lift = lambda value: combo(value, 0, 0)
    if nu == 0:
        if n == 3:
            table = {0: combo(0, 0, 1), 1: combo(2, Fraction(-3, 2), 3)}
        else:
            table = {0: combo(0, 0, Fraction(7, 2)), 1: combo(3, -12, 14)}
        for k in range(1, kmax):
            h = k + Fraction(1, 2)
            if n == 3:
                rhs = (lift(20 * h * w(0, k)) + table[k] * (20 * h * h + 1) - lift(18 * k * w(0, k - 1))
                       - table[k - 1] * (18 * k * k) - lift(2 * (k + 1) * w(0, k + 1)))
                table[k + 1] = rhs / (2 * (k + 1) ** 2)
            else:
                rhs = (lift((60 * h * h + 3) * w(0, k)) + table[k] * (2 * h * (20 * h * h + 3))
                       - lift(192 * k * k * w(0, k - 1)) - table[k - 1] * (128 * k ** 3)
                       - lift(3 * (k + 1) ** 2 * w(0, k + 1)))
                table[k + 1] = rhs / (2 * (k + 1) ** 3)
        return {k: table[k] for k in range(kmax + 1)}
    below = _derivative_table(n, nu - 1, kmax + 2)
    v = Fraction(nu)
    table = {}
    for k in range(kmax + 1):
        s = 2 * k
        if n == 3:
            lead = (s + 2) * (s + 6 * v)
            rhs = (lift(-(2 * s + 2 + 6 * v) * w(nu, k)) - below[k + 1] * (6 * v * v) + below[k + 2] * (2 * v * v))
        else:
            P = (LaurentPoly({1: 1, 0: 2}) * LaurentPoly({1: 1, 0: 6 * v}) * LaurentPoly({1: 1, 0: 8 * v})
                 * LaurentPoly({1: 1, 0: 8 * v - 2})).scale(3)
            lead = P(Fraction(s))
            rhs = (lift(-P.derivative()(Fraction(s)) * w(nu, k))
                   - lift(256 * v ** 3 * w(nu - 1, k + 1)) - below[k + 1] * (256 * v ** 3 * (s + 4 * v))
                   + lift(40 * v ** 3 * w(nu - 1, k + 2)) + below[k + 2] * (8 * v ** 3 * (5 * s + 32 * v - 6)))
        if lead == 0:
            raise LadderDegenerateError("derivative ladder hit a zero leading coefficient", nu=nu, s=s)
        table[k] = rhs / lead
    return table


def w3_derivative_at0(nu: int) -> ConstCombo:
    """W_3'(nu; 0) over {1, sqrt3/pi, Cl(pi/3)/pi}."""
    if int(nu) != nu or nu < 0:
        raise DomainError("w3_derivative_at0 needs an integer nu >= 0", nu=nu)
    return _derivative_table(3, int(nu), 0)[0]


def w4_derivative_at0(nu: int) -> ConstCombo:
    """W_4'(nu; 0) over {1, 1/pi^2, zeta(3)/pi^2}."""
    if int(nu) != nu or nu < 0:
        raise DomainError("w4_derivative_at0 needs an integer nu >= 0", nu=nu)
    return _derivative_table(4, int(nu), 0)[0]


def w3_derivative_quad(nu: Any, h: float = 1e-3) -> mpmath.mpf:
    """Numeric W_3'(nu; 0) from the Bessel-integral oracle."""
    from .quadrature import moment_quad_derivative
    return moment_quad_derivative(3, nu, 0, h=h)


def w3_residue(nu: int, m: int) -> ConstCombo:
    """Residue of W_3(nu; s) at s = -2nu-2-2m over {1, sqrt3/pi, Cl(pi/3)/pi}."""
    seq = residues_v3(nu, m)
    nu = int(HalfInt.of(nu))
    coeff = Fraction(2, 3) * Fraction(3 ** nu, comb(2 * nu, nu)) * seq.values[m] / Fraction(9) ** m
    return ConstCombo(basis=ConstBasis.CLAUSEN, coeffs=(0, coeff, 0))

# =============================================================================
# DISPATCH
# =============================================================================

def moment(n: int, nu: Any, s: Any, method: DensityMethod = DensityMethod.AUTO,
           spec: Optional[QuadSpec] = None) -> MomentPoint:
    """W_n(nu; s) by the most exact path available, quadrature otherwise."""
    nu = HalfInt.of(nu)
    method = DensityMethod(method)
    s = parse_rational(s) if isinstance(s, str) else s
    point = lambda value, how, **extra: MomentPoint(n_steps=n, nu=str(nu), s=s, value=value, method=how, **extra)
    if method != DensityMethod.QUADRATURE:
        integral = is_exact(s) and Fraction(s).denominator == 1
        if n == 1:
            return point(mpmath.mpf(1), "exact", exact=Fraction(1))
        if integral and s >= 0 and s % 2 == 0:
            value = _moment_rows(n, nu, int(s) // 2)[int(s) // 2]
            return point(to_real(value), "exact", exact=value)
        if not nu.is_integer:
            form = odd_dim_moment_form(n, nu)
            if integral:
                try:
                    value = form.exact(s)
                    return point(to_real(value), "odd-dimension", exact=value)
                except UnsupportedPathError:
                    pass
            return point(form.evaluate(s), "odd-dimension")
        if n == 2:
            return point(w2_closed(nu, s), "two-step-gamma")
        if n in (3, 4) and integral and s % 2 == 1:
            combo = (w3_odd if n == 3 else w4_odd)(int(nu), int(s))
            return point(combo.value(), "constant-basis", combo=combo)
        if method in (DensityMethod.CLOSED, DensityMethod.EXACT):
            raise UnsupportedPathError(f"no closed form for W_{n}({nu}; {s})", n=n, nu=str(nu), s=str(s))
    from .quadrature import moment_quad
    result = moment_quad(n, nu, s, spec)
    return point(result.value, "quadrature", est_error=result.error)
