"""
Bessel-integral oracle
Densities, distribution functions, moments and residues as oscillatory
integrals of powers of the normalized Bessel function j_nu, summed zone by
zone up to a cutoff and closed with an analytic Hankel tail
"""
from __future__ import annotations

import logging
from functools import lru_cache
from math import ceil, comb, factorial, floor
from typing import Any, Callable, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field

from .config import get_settings
from .errors import AccuracyError, DivergenceError, DomainError, PoleError
from .models_pydantic import QuadResult, QuadSpec
from .numcore import HalfInt, to_real
from .specfun import hyp

logger = logging.getLogger(__name__)

JNU_SWITCH = 30
CUTOFF_LADDER = tuple(range(8, 82, 2)) + tuple(range(90, 410, 10))
MAX_HANKEL_ORDER = 60

# =============================================================================
# NORMALIZED BESSEL FUNCTION
# =============================================================================

def hankel_coefficients(mu: Any, qmax: int) -> List[mpmath.mpf]:
    """a_q(mu) = prod_{j<=q} (4mu^2 - (2j-1)^2) / (q! 8^q) for q = 0..qmax."""
    mu = to_real(mu)
    out = [mpmath.mpf(1)]
    for q in range(1, qmax + 1):
        out.append(out[-1] * (4 * mu * mu - (2 * q - 1) ** 2) / (8 * q))
    return out


def _phase(mu: mpmath.mpf) -> mpmath.mpf:
    return mu * mpmath.pi / 2 + mpmath.pi / 4


_I_POWERS = (mpmath.mpc(1, 0), mpmath.mpc(0, 1), mpmath.mpc(-1, 0), mpmath.mpc(0, -1))


def jnu_series(nu: Any, t: Any) -> mpmath.mpf:
    """0F1(; nu+1; -t^2/4) with guard digits for the cancellation of large t."""
    v, t = to_real(nu), to_real(t)
    guard = int(mpmath.ceil(t * mpmath.log10(mpmath.e))) + 5
    with mpmath.extradps(guard):
        value = hyp([], [v + 1], -t * t / 4)
    return +value


def _hankel_sum(mu: mpmath.mpf, z: mpmath.mpf) -> Tuple[mpmath.mpf, mpmath.mpf]:
    """J_mu(z) from the large-argument expansion; returns (value, smallest term used)."""
    chi = z - _phase(mu)
    total = mpmath.mpc(0)
    coeff = mpmath.mpf(1)
    last = mpmath.inf
    for q in range(MAX_HANKEL_ORDER + 1):
        if q:
            coeff = coeff * (4 * mu * mu - (2 * q - 1) ** 2) / (8 * q)
        term = _I_POWERS[q % 4] * coeff / z ** q
        size = abs(term)
        if size > last:
            break
        total += term
        last = size
        if size == 0:
            break
    value = mpmath.sqrt(2 / (mpmath.pi * z)) * mpmath.re(mpmath.expj(chi) * total)
    return value, last


def jnu_asymptotic(nu: Any, t: Any) -> mpmath.mpf:
    """nu! (2/t)^nu J_nu(t) from the Hankel expansion, summed to its smallest term."""
    v, t = to_real(nu), to_real(t)
    value, _ = _hankel_sum(v, t)
    return mpmath.gamma(v + 1) * (2 / t) ** v * value


def jnu(nu: Any, t: Any) -> mpmath.mpf:
    """Normalized Bessel function j_nu(t) = nu! (2/t)^nu J_nu(t), j_nu(0) = 1."""
    v, t = to_real(nu), to_real(t)
    if t == 0:
        return mpmath.mpf(1)
    t = abs(t)
    if v == mpmath.mpf(1) / 2:
        return mpmath.sin(t) / t
    if t <= JNU_SWITCH:
        return jnu_series(v, t)
    value, last = _hankel_sum(v, t)
    if last < mpmath.mpf(10) ** (-mpmath.mp.dps):
        return mpmath.gamma(v + 1) * (2 / t) ** v * value
    return mpmath.gamma(v + 1) * (2 / t) ** v * mpmath.besselj(v, t)

# =============================================================================
# BOOSTED INTEGRAND
# =============================================================================

class BoostedIntegrand(BaseModel):
    """g_k(t) = (-(1/t) d/dt)^k j_nu(t)^n as a sum of products of j_{nu+m}.

    With D = -(1/t) d/dt one has D j_mu = j_{mu+1} / (2(mu+1)), so
    g_k = 2^-k k! [y^k] (sum_m nu!/(m! (nu+m)!) j_{nu+m}(t) y^m)^n.
    """
    n_steps: int = Field(..., ge=1)
    nu: HalfInt
    k: int = Field(0, ge=0)

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @computed_field
    @property
    def term_count(self) -> int:
        """Compositions k_1 + ... + k_n = k."""
        return comb(self.k + self.n_steps - 1, self.n_steps - 1)

    def weights(self) -> Tuple[mpmath.mpf, ...]:
        return _boost_weights(self.nu.twice, self.k, mpmath.mp.dps)

    def _combine(self, values: Sequence[mpmath.mpf]) -> mpmath.mpf:
        series = [w * j for w, j in zip(self.weights(), values)]
        power = truncated_power(series, self.n_steps, self.k)
        return power[self.k] * mpmath.factorial(self.k) / mpmath.power(2, self.k)

    def at_zero(self) -> mpmath.mpf:
        return self._combine([mpmath.mpf(1)] * (self.k + 1))

    def __call__(self, t: Any) -> mpmath.mpf:
        v = self.nu.real()
        return self._combine([jnu(v + m, t) for m in range(self.k + 1)])


@lru_cache(maxsize=256)
def _boost_weights(twice_nu: int, k: int, dps: int) -> Tuple[mpmath.mpf, ...]:
    v = mpmath.mpf(twice_nu) / 2
    return tuple(mpmath.gamma(v + 1) / (mpmath.factorial(m) * mpmath.gamma(v + m + 1)) for m in range(k + 1))


def truncated_power(series: Sequence[Any], n: int, degree: int) -> List[Any]:
    """Coefficients 0..degree of (sum series[m] y^m)^n."""
    out: List[Any] = [mpmath.mpf(1)] + [mpmath.mpf(0)] * degree
    for _ in range(n):
        out = [mpmath.fsum(out[i] * series[d - i] for i in range(d + 1) if d - i < len(series))
               for d in range(degree + 1)]
    return out


def default_boost(n: int, nu: Any) -> int:
    """Smallest boost making the density integrand decay like t^-2, plus one."""
    twice_nu = HalfInt.of(nu).twice
    return max(0, 3 - floor((n - 1) * (twice_nu + 1) / 2)) + 1

# =============================================================================
# ANALYTIC TAIL
# =============================================================================

def _poly_mul(a: Sequence[Any], b: Sequence[Any], degree: int) -> List[Any]:
    out = [mpmath.mpc(0)] * (degree + 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b[:degree + 1 - i]):
            out[i + j] += x * y
    return out


def _bivariate_mul(a: List[List[Any]], b: List[List[Any]], ydeg: int, udeg: int) -> List[List[Any]]:
    out = [[mpmath.mpc(0)] * (udeg + 1) for _ in range(ydeg + 1)]
    for i in range(ydeg + 1):
        for j in range(ydeg + 1 - i):
            prod = _poly_mul(a[i], b[j], udeg)
            out[i + j] = [x + y for x, y in zip(out[i + j], prod)]
    return out


def tail_integral(p: mpmath.mpf, omega: mpmath.mpf, T: mpmath.mpf) -> mpmath.mpc:
    """int_T^inf t^-p e^(i omega t) dt = T^(1-p) E_p(-i omega T)."""
    if omega == 0:
        if p <= 1:
            raise DivergenceError("non-oscillating tail term does not decay fast enough",
                                  power=mpmath.nstr(p, 10))
        return mpmath.mpc(T ** (1 - p) / (p - 1))
    return T ** (1 - p) * mpmath.expint(p, mpmath.mpc(0, -omega * T))


class TailExpansion:
    """Terms c t^-p e^(i omega t) of the integrand beyond the cutoff."""

    def __init__(self, terms: List[Tuple[mpmath.mpf, mpmath.mpf, mpmath.mpc]]):
        self.terms = terms

    def __call__(self, T: mpmath.mpf) -> mpmath.mpf:
        return mpmath.re(mpmath.fsum(c * tail_integral(p, w, T) for w, p, c in self.terms))

# =============================================================================
# INTEGRAL PROBLEMS
# =============================================================================

class BesselIntegral(BaseModel):
    """prefactor * int_0^inf t^-extra [kernel(t x)] g_k(t) dt.

    The optional kernel is (t x)^a J_mu(t x).
    """
    integrand: BoostedIntegrand
    prefactor: Any = Field(1, description="Constant in front of the integral")
    extra: Any = Field(0, description="Integrand carries t^(-extra)")
    kernel_a: Optional[Any] = None
    kernel_mu: Optional[Any] = None
    x: Optional[Any] = None

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @property
    def has_kernel(self) -> bool:
        return self.kernel_mu is not None

    def kernel(self, t: mpmath.mpf) -> mpmath.mpf:
        a, mu, x = to_real(self.kernel_a), to_real(self.kernel_mu), to_real(self.x)
        z = t * x
        if z == 0:
            return mpmath.mpf(0)
        # (z)^a J_mu(z) = z^(a+mu) j_mu(z) / (mu! 2^mu)
        return z ** (a + mu) * jnu(mu, z) / (mpmath.gamma(mu + 1) * mpmath.power(2, mu))

    def __call__(self, t: Any) -> mpmath.mpf:
        t = to_real(t)
        value = self.integrand(t)
        if self.has_kernel:
            value *= self.kernel(t)
        extra = to_real(self.extra)
        if extra != 0:
            value *= t ** (-extra)
        return value

    def step_orders(self) -> List[mpmath.mpf]:
        v = self.integrand.nu.real()
        return [v + m for m in range(self.integrand.k + 1)]

    def frequencies(self) -> Tuple[mpmath.mpf, mpmath.mpf]:
        """(zone frequency, fastest frequency) of the oscillation."""
        n = self.integrand.n_steps
        if self.has_kernel:
            x = to_real(self.x)
            return (x if x >= 1 else mpmath.mpf(1)), x + n
        return mpmath.mpf(1), mpmath.mpf(n)

    def zone_phase(self) -> mpmath.mpf:
        if self.has_kernel and to_real(self.x) >= 1:
            return _phase(to_real(self.kernel_mu))
        return _phase(self.integrand.nu.real())

    def tail(self, order: int) -> TailExpansion:
        """Hankel expansion of the integrand truncated at u^(k+order), u = 1/t."""
        g = self.integrand
        n, k, v = g.n_steps, g.k, g.nu.real()
        D = k + order
        half = mpmath.mpf(1) / 2
        amp = half * mpmath.sqrt(2 / mpmath.pi)
        rows = []
        for m in range(k + 1):
            mu = v + m
            a = hankel_coefficients(mu, order)
            base = amp * mpmath.gamma(v + 1) / mpmath.factorial(m) * mpmath.power(2, mu) * mpmath.expjpi(-(mu / 2 + half / 2))
            poly = [mpmath.mpc(0)] * (D + 1)
            for q in range(order + 1):
                if m + q <= D:
                    poly[m + q] = base * _I_POWERS[q % 4] * a[q]
            rows.append(poly)
        conj_rows = [[mpmath.conj(c) for c in poly] for poly in rows]
        one = [[mpmath.mpc(1)] + [mpmath.mpc(0)] * D] + [[mpmath.mpc(0)] * (D + 1) for _ in range(k)]
        powers, conj_powers = [one], [one]
        for _ in range(n):
            powers.append(_bivariate_mul(powers[-1], rows, k, D))
            conj_powers.append(_bivariate_mul(conj_powers[-1], conj_rows, k, D))
        scale = mpmath.factorial(k) / mpmath.power(2, k)
        groups = []
        for j in range(n + 1):
            acc = [mpmath.mpc(0)] * (D + 1)
            for r in range(k + 1):
                prod = _poly_mul(powers[j][r], conj_powers[n - j][k - r], D)
                acc = [x + y for x, y in zip(acc, prod)]
            groups.append((mpmath.mpf(2 * j - n), [scale * comb(n, j) * c for c in acc]))
        base_power = n * (v + half) + to_real(self.extra)
        if self.has_kernel:
            a, mu, x = to_real(self.kernel_a), to_real(self.kernel_mu), to_real(self.x)
            coeffs = hankel_coefficients(mu, order)
            kplus = [amp * x ** (a - half) * mpmath.expj(-_phase(mu)) * _I_POWERS[q % 4] * coeffs[q] / x ** q
                     for q in range(order + 1)]
            kminus = [mpmath.conj(c) for c in kplus]
            expanded = []
            for omega, poly in groups:
                expanded.append((omega + x, _poly_mul(poly, kplus, D)))
                expanded.append((omega - x, _poly_mul(poly, kminus, D)))
            groups = expanded
            base_power -= a - half
        terms = [(omega, base_power + d, c) for omega, poly in groups for d, c in enumerate(poly) if c != 0]
        return TailExpansion(terms)


def _terms_needed(mu: mpmath.mpf, z: mpmath.mpf, eps: mpmath.mpf) -> Optional[int]:
    coeff = mpmath.mpf(1)
    previous = mpmath.inf
    for q in range(MAX_HANKEL_ORDER + 1):
        if q:
            coeff = coeff * (4 * mu * mu - (2 * q - 1) ** 2) / (8 * q)
        size = abs(coeff) / z ** q
        if size < eps:
            return q
        if size > previous:
            return None
        previous = size
    return None


def choose_cutoff(problem: BesselIntegral, eps: mpmath.mpf) -> Tuple[mpmath.mpf, int]:
    """Smallest ladder cutoff where every Hankel expansion is accurate to eps, and its order."""
    factors = [(mu, mpmath.mpf(1)) for mu in problem.step_orders()]
    if problem.has_kernel:
        factors.append((to_real(problem.kernel_mu), to_real(problem.x)))
    cutoff = mpmath.mpf(0)
    for mu, scale in factors:
        for z in CUTOFF_LADDER:
            if _terms_needed(mu, mpmath.mpf(z), eps) is not None:
                cutoff = max(cutoff, mpmath.mpf(z) / scale)
                break
        else:
            raise AccuracyError("no cutoff reaches the requested tolerance", best=None, error=None,
                                mu=mpmath.nstr(mu, 5))
    order = max(_terms_needed(mu, cutoff * scale, eps) for mu, scale in factors)
    return cutoff, order + 1

# =============================================================================
# ZONE SUMMATION
# =============================================================================

@lru_cache(maxsize=16)
def _legendre_rule(nodes: int) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
    x, w = np.polynomial.legendre.leggauss(nodes)
    return tuple(float(v) for v in x), tuple(float(v) for v in w)


def _panel(f: Callable[[mpmath.mpf], mpmath.mpf], a: mpmath.mpf, b: mpmath.mpf, nodes: int) -> mpmath.mpf:
    xs, ws = _legendre_rule(nodes)
    half, mid = (b - a) / 2, (a + b) / 2
    return half * mpmath.fsum(mpmath.mpf(w) * f(mid + half * mpmath.mpf(x)) for x, w in zip(xs, ws))


def euler_average(values: Sequence[mpmath.mpf]) -> Tuple[mpmath.mpf, mpmath.mpf]:
    """Iterated pairwise averaging; error is the spread of the last two averages."""
    level = list(values)
    if len(level) == 1:
        return level[0], mpmath.mpf(0)
    while len(level) > 2:
        level = [(a + b) / 2 for a, b in zip(level, level[1:])]
    return (level[0] + level[1]) / 2, abs(level[1] - level[0])


def integrate(problem: BesselIntegral, spec: QuadSpec, regularized: bool = False) -> QuadResult:
    """Near range by zones and Gauss-Legendre panels, far range by the Hankel tail."""
    eps = mpmath.mpf(spec.tol) * mpmath.mpf("1e-3")
    cutoff, order = choose_cutoff(problem, eps)
    zone_freq, fast_freq = problem.frequencies()
    phase = problem.zone_phase()
    boundaries = []
    j = 0
    while True:
        b = ((j + mpmath.mpf(1) / 2) * mpmath.pi + phase) / zone_freq
        boundaries.append(b)
        if b >= cutoff:
            break
        j += 1
    for _ in range(spec.extra_zones - 1):
        j += 1
        boundaries.append(((j + mpmath.mpf(1) / 2) * mpmath.pi + phase) / zone_freq)
    if len(boundaries) > spec.max_zones:
        raise AccuracyError(f"{len(boundaries)} zones needed, max_zones={spec.max_zones}",
                            best=None, error=None, zones=len(boundaries))
    logger.debug("quadrature cutoff %s with %d zones, Hankel order %d",
                 mpmath.nstr(cutoff, 6), len(boundaries), order)
    tail = problem.tail(order)
    period = 2 * mpmath.pi / fast_freq
    running = mpmath.quad(problem, [0, boundaries[0]])
    estimates = []
    first_tail = len(boundaries) - spec.extra_zones
    for idx in range(len(boundaries)):
        if idx:
            a, b = boundaries[idx - 1], boundaries[idx]
            panels = max(1, int(mpmath.ceil((b - a) / period)))
            width = (b - a) / panels
            running += mpmath.fsum(_panel(problem, a + i * width, a + (i + 1) * width, spec.nodes)
                                   for i in range(panels))
        if idx >= first_tail:
            estimates.append(running + tail(boundaries[idx]))
    value, error = euler_average(estimates)
    pref = to_real(problem.prefactor)
    value, error = pref * value, abs(pref) * error
    error = max(error, mpmath.mpf(10) ** (-mpmath.mp.dps + 3) * abs(value))
    if error > 1000 * mpmath.mpf(spec.tol) * max(1, abs(value)):
        raise AccuracyError("zone sums did not settle", best=mpmath.nstr(value, 15), error=mpmath.nstr(error, 5))
    return QuadResult(value=value, error=error, boost_k=problem.integrand.k, zones=len(boundaries),
                      cutoff=float(cutoff), regularized=regularized)


def _working_dps(spec: QuadSpec) -> int:
    return spec.dps if spec.dps is not None else get_settings().quad_dps


def _finish(result: QuadResult) -> QuadResult:
    return result.model_copy(update={"value": +result.value, "error": +result.error})

# =============================================================================
# PUBLIC INTEGRALS
# =============================================================================

def density_quad(n: int, nu: Any, x: Any, spec: Optional[QuadSpec] = None) -> QuadResult:
    """p_n(nu; x) = 2^-nu/nu! x^-2k int (t x)^(nu+k+1) J_(nu+k)(t x) g_k(t) dt."""
    spec = spec or QuadSpec()
    nu = HalfInt.of(nu)
    xr = to_real(x)
    if xr <= 0 or xr >= n:
        return QuadResult(value=mpmath.mpf(0), error=mpmath.mpf(0))
    k = spec.boost_k if spec.boost_k is not None else default_boost(n, nu)
    if (n - 1) * (2 * nu.twice + 2) + 4 * k < 8:
        raise DomainError("boost too small: need (n-1)(nu+1/2) + k >= 2", n=n, nu=str(nu), boost_k=k)
    guard = int(ceil(2 * k * float(mpmath.log10(1 / xr)))) if xr < 1 else 0
    with mpmath.workdps(_working_dps(spec) + guard):
        v = nu.real()
        x = to_real(x)
        problem = BesselIntegral(
            integrand=BoostedIntegrand(n_steps=n, nu=nu, k=k),
            prefactor=mpmath.power(2, -v) / mpmath.gamma(v + 1) / x ** (2 * k),
            kernel_a=v + k + 1, kernel_mu=v + k, x=x)
        result = integrate(problem, spec)
    return _finish(result)


def cdf_quad(n: int, nu: Any, x: Any, spec: Optional[QuadSpec] = None) -> QuadResult:
    """P_n(nu; x) = 2^-nu/nu! int (t x)^(nu+1) J_(nu+1)(t x) j_nu(t)^n dt/t."""
    spec = spec or QuadSpec()
    nu = HalfInt.of(nu)
    xr = to_real(x)
    if xr <= 0:
        return QuadResult(value=mpmath.mpf(0), error=mpmath.mpf(0))
    if xr > n:
        return QuadResult(value=mpmath.mpf(1), error=mpmath.mpf(0))
    with mpmath.workdps(_working_dps(spec)):
        v = nu.real()
        problem = BesselIntegral(
            integrand=BoostedIntegrand(n_steps=n, nu=nu, k=0),
            prefactor=mpmath.power(2, -v) / mpmath.gamma(v + 1),
            extra=1, kernel_a=v + 1, kernel_mu=v + 1, x=to_real(x))
        result = integrate(problem, spec)
    return _finish(result)


def moment_boost(n: int, nu: Any, s: Any) -> int:
    """Smallest k with k - n(nu+1/2) < s < 2k."""
    v, s = HalfInt.of(nu).real(), to_real(s)
    if s <= -n * (v + mpmath.mpf(1) / 2):
        raise DomainError("no boost reaches s <= -n(nu+1/2)", n=n, s=mpmath.nstr(s, 10))
    k = max(0, int(mpmath.floor(s / 2)) + 1)
    if k - n * (v + mpmath.mpf(1) / 2) >= s:
        raise DomainError("no boost strip contains s", n=n, s=mpmath.nstr(s, 10))
    return k


def moment_quad(n: int, nu: Any, s: Any, spec: Optional[QuadSpec] = None) -> QuadResult:
    """W_n(nu; s) = 2^(s-k+1) Gamma(s/2+nu+1) / (Gamma(nu+1) Gamma(k-s/2)) int t^(2k-s-1) g_k(t) dt."""
    spec = spec or QuadSpec()
    nu = HalfInt.of(nu)
    with mpmath.workdps(_working_dps(spec)):
        v, sr = nu.real(), to_real(s)
        top = sr / 2 + v + 1
        if top <= 0 and top == mpmath.floor(top):
            raise PoleError(f"W_{n}({nu}; s) has a pole at s={mpmath.nstr(sr, 10)}", pole=mpmath.nstr(sr, 10))
        if spec.boost_k is None:
            k = moment_boost(n, nu, sr)
        else:
            k = spec.boost_k
            if not (k - n * (v + mpmath.mpf(1) / 2) < sr < 2 * k):
                raise DomainError("s lies outside the strip of the requested boost", s=mpmath.nstr(sr, 10), boost_k=k)
        problem = BesselIntegral(
            integrand=BoostedIntegrand(n_steps=n, nu=nu, k=k),
            prefactor=mpmath.power(2, sr - k + 1) * mpmath.gamma(top) / (mpmath.gamma(v + 1) * mpmath.gamma(k - sr / 2)),
            extra=sr + 1 - 2 * k)
        result = integrate(problem, spec)
    return _finish(result)


def moment_quad_derivative(n: int, nu: Any, s: Any, h: Any = "1/1000", spec: Optional[QuadSpec] = None) -> mpmath.mpf:
    """d/ds W_n(nu; s) by the five-point central difference at a fixed boost."""
    spec = spec or QuadSpec(tol=1e-14)
    sr, hr = to_real(s), to_real(h)
    if spec.boost_k is None:
        spec = spec.model_copy(update={"boost_k": moment_boost(n, nu, sr)})
    f = lambda u: moment_quad(n, nu, u, spec).value
    with mpmath.workdps(_working_dps(spec)):
        return (8 * (f(sr + hr) - f(sr - hr)) - (f(sr + 2 * hr) - f(sr - 2 * hr))) / (12 * hr)


def residue_window(n: int, nu: Any) -> mpmath.mpf:
    """Residue integrals converge for m below (n/2)(d/2 - 1/2) - d/2."""
    d = HalfInt.of(nu).dim
    return mpmath.mpf(n) / 2 * (mpmath.mpf(d) / 2 - mpmath.mpf(1) / 2) - mpmath.mpf(d) / 2


def residue_quad(n: int, nu: Any, m: int, spec: Optional[QuadSpec] = None) -> QuadResult:
    """Res_{s=-d-2m} W_n(nu; s) = 2^(-2nu-2m)/(nu! (nu+m)!) (-1)^m/m! int t^(2nu+2m+1) j_nu(t)^n dt.

    Outside the convergence window odd n is continued through the analytic
    tail; even n has a non-oscillating tail term and raises.
    """
    spec = spec or QuadSpec()
    nu = HalfInt.of(nu)
    if m < 0:
        raise DomainError("residue index m must be >= 0", m=m)
    outside = m >= residue_window(n, nu)
    if outside and n % 2 == 0:
        raise DivergenceError(f"residue integral diverges for m={m}", n=n, nu=str(nu), m=m)
    with mpmath.workdps(_working_dps(spec)):
        v = nu.real()
        problem = BesselIntegral(
            integrand=BoostedIntegrand(n_steps=n, nu=nu, k=0),
            prefactor=mpmath.power(2, -2 * v - 2 * m) / (mpmath.gamma(v + 1) * mpmath.gamma(v + m + 1))
            * (-1) ** m / factorial(m),
            extra=-(2 * v + 2 * m + 1))
        result = integrate(problem, spec, regularized=outside)
    if outside:
        logger.warning("residue m=%d for n=%d continued past the convergence window", m, n)
    return _finish(result)
