"""
Special functions and named constants
Gamma, generalized hypergeometric series, AGM elliptic integrals and the
registry of constants that odd moments and densities are built from
"""
from __future__ import annotations

import logging
import threading
from fractions import Fraction
from typing import Any, Callable, Dict, List, Sequence, Tuple

import mpmath

from .errors import ConvergenceError, DomainError, NonConvergenceError, PoleError, UnknownConstantError
from .models_pydantic import ConstBasis, HypSeriesSpec
from .numcore import to_real

logger = logging.getLogger(__name__)

# =============================================================================
# GAMMA
# =============================================================================

def gamma(x: Any) -> mpmath.mpf:
    """Gamma function; nonpositive integers raise PoleError."""
    xr = to_real(x)
    if xr <= 0 and xr == mpmath.floor(xr):
        raise PoleError(f"Gamma has a pole at {x}", pole=x)
    return mpmath.gamma(xr)


def rgamma_product(num: Sequence[Any], den: Sequence[Any]) -> mpmath.mpf:
    """prod Gamma(num) / prod Gamma(den) with poles in ``den`` giving zero."""
    return mpmath.gammaprod([to_real(a) for a in num], [to_real(b) for b in den])

# =============================================================================
# HYPERGEOMETRIC SERIES
# =============================================================================

def _check_convergence(spec: HypSeriesSpec) -> None:
    if spec.terminating_index is not None:
        return
    p, q = len(spec.upper), len(spec.lower)
    z = abs(to_real(spec.argument))
    if z == 0 or p <= q:
        return
    if p == q + 1:
        if z < 1:
            return
        if z == 1:
            margin = mpmath.fsum(to_real(b) for b in spec.lower) - mpmath.fsum(to_real(a) for a in spec.upper)
            if margin > 0:
                return
            raise ConvergenceError(f"{p}F{q} at |z|=1 needs sum(lower)-sum(upper) > 0, got {mpmath.nstr(margin, 8)}")
        raise ConvergenceError(f"{p}F{q} diverges for |z|={mpmath.nstr(z, 8)} > 1")
    raise ConvergenceError(f"{p}F{q} with p > q+1 diverges unless it terminates")


def pfq_terms(spec: HypSeriesSpec) -> Tuple[mpmath.mpf, int]:
    """Sum pFq by forward term recurrence; returns (value, terms used)."""
    _check_convergence(spec)
    stop = spec.terminating_index
    with mpmath.extradps(10):
        a = [to_real(x) for x in spec.upper]
        b = [to_real(x) for x in spec.lower]
        z = to_real(spec.argument)
        tol = to_real(spec.tol) if spec.tol is not None else mpmath.mpf(10) ** (-mpmath.mp.dps + 8)
        term = mpmath.mpf(1)
        total = mpmath.mpf(1)
        small = 0
        for m in range(spec.max_terms):
            if stop is not None and m >= stop:
                return +total, m + 1
            num = mpmath.fprod(ai + m for ai in a)
            den = mpmath.fprod(bj + m for bj in b) * (m + 1)
            term = term * num / den * z
            total += term
            if abs(term) <= tol * abs(total):
                small += 1
                if small >= 3:
                    return +total, m + 2
            else:
                small = 0
        raise NonConvergenceError(f"pFq did not converge in {spec.max_terms} terms",
                                  partial=mpmath.nstr(total, 15), terms=spec.max_terms)


def pfq(spec: HypSeriesSpec) -> mpmath.mpf:
    return pfq_terms(spec)[0]


def hyp(upper: Sequence[Any], lower: Sequence[Any], z: Any, **kwargs: Any) -> mpmath.mpf:
    return pfq(HypSeriesSpec(upper=list(upper), lower=list(lower), argument=z, **kwargs))


def pfq_exact(upper: Sequence[Any], lower: Sequence[Any], z: Any) -> Fraction:
    """Exact sum of a terminating series with rational parameters."""
    spec = HypSeriesSpec(upper=[Fraction(a) for a in upper], lower=[Fraction(b) for b in lower], argument=Fraction(z))
    stop = spec.terminating_index
    if stop is None:
        raise ConvergenceError("exact evaluation needs a terminating series")
    z = Fraction(z)
    term = Fraction(1)
    total = Fraction(1)
    for m in range(stop):
        num = Fraction(1)
        for a in spec.upper:
            num *= a + m
        den = Fraction(m + 1)
        for bj in spec.lower:
            den *= bj + m
        term = term * num / den * z
        total += term
    return total


def hyp2f1_pfaff(a: Any, b: Any, c: Any, z: Any) -> mpmath.mpf:
    """2F1 for z < 1/2 via (1-z)^-a 2F1(a, c-b; c; z/(z-1)) when z is negative."""
    z = to_real(z)
    if z >= 0:
        return hyp([a, b], [c], z)
    w = z / (z - 1)
    return (1 - z) ** (-to_real(a)) * hyp([a, to_real(c) - to_real(b)], [c], w)


def gauss_sum(a: Any, b: Any, c: Any) -> mpmath.mpf:
    """2F1(a, b; c; 1) = Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b))."""
    a, b, c = to_real(a), to_real(b), to_real(c)
    if c - a - b <= 0:
        raise ConvergenceError("Gauss sum needs c - a - b > 0")
    return rgamma_product([c, c - a - b], [c - a, c - b])

# =============================================================================
# AGM & ELLIPTIC INTEGRALS
# =============================================================================

def agm_iterates(a: Any, b: Any, max_steps: int = 200) -> List[Tuple[mpmath.mpf, mpmath.mpf]]:
    a, b = to_real(a), to_real(b)
    if a <= 0 or b <= 0:
        raise DomainError("AGM needs positive arguments")
    steps = [(a, b)]
    eps = mpmath.mpf(10) ** (-mpmath.mp.dps)
    for _ in range(max_steps):
        a, b = (a + b) / 2, mpmath.sqrt(a * b)
        steps.append((a, b))
        if abs(a - b) <= eps * a:
            return steps
    raise NonConvergenceError("AGM iteration did not settle", partial=mpmath.nstr(a, 15), terms=max_steps)


def agm(a: Any, b: Any) -> mpmath.mpf:
    return agm_iterates(a, b)[-1][0]


def elliptic_K(k: Any) -> mpmath.mpf:
    """K(k) = pi / (2 agm(1, k')) with modulus k."""
    k = to_real(k)
    if not 0 <= k < 1:
        raise DomainError(f"K(k) needs 0 <= k < 1, got {k}")
    return mpmath.pi / (2 * agm(1, mpmath.sqrt(1 - k * k)))


def elliptic_Kprime(k: Any) -> mpmath.mpf:
    """K'(k) = K(sqrt(1 - k^2)) = pi / (2 agm(1, k))."""
    k = to_real(k)
    if not 0 < k < 1:
        raise DomainError(f"K'(k) needs 0 < k < 1, got {k}")
    return mpmath.pi / (2 * agm(1, k))

# =============================================================================
# CONSTANT REGISTRY
# =============================================================================

def _const_A() -> mpmath.mpf:
    return mpmath.mpf(3) / 16 * mpmath.cbrt(2) * gamma(mpmath.mpf(1) / 3) ** 6 / mpmath.pi ** 4


def _const_r50() -> mpmath.mpf:
    g = mpmath.fprod(gamma(mpmath.mpf(j) / 15) for j in (1, 2, 4, 8))
    return mpmath.sqrt(5) / 40 * g / mpmath.pi ** 4


def _const_clausen() -> mpmath.mpf:
    """Cl2(pi/3) from Hurwitz zeta values of the period-6 sine pattern."""
    z = lambda a: mpmath.zeta(2, mpmath.mpf(a) / 6)
    return mpmath.sqrt(3) / 72 * (z(1) + z(2) - z(4) - z(5))


def _kprime_moment(weight: Callable[[mpmath.mpf], mpmath.mpf]) -> mpmath.mpf:
    # k = sin(theta): dk = cos(theta) d(theta); the log blow-up of K' at k=0 becomes mild
    def integrand(theta):
        kprime = mpmath.pi / (2 * agm(1, mpmath.sin(theta)))
        return kprime ** 2 * weight(theta) * mpmath.cos(theta)
    return mpmath.quad(integrand, [0, mpmath.pi / 4, mpmath.pi / 2]) / mpmath.pi ** 3


def _const_A4() -> mpmath.mpf:
    return _kprime_moment(lambda theta: mpmath.mpf(1))


def _const_B4() -> mpmath.mpf:
    return _kprime_moment(lambda theta: mpmath.sin(theta) ** 2)


def A4_hypergeometric() -> mpmath.mpf:
    half = mpmath.mpf(1) / 2
    return mpmath.pi / 16 * mpmath.hyper([mpmath.mpf(5) / 4] + [half] * 6, [mpmath.mpf(1) / 4] + [1] * 5, 1)


def B4_hypergeometric() -> mpmath.mpf:
    half = mpmath.mpf(1) / 2
    upper = [mpmath.mpf(7) / 4, 3 * half, 3 * half] + [half] * 4
    lower = [mpmath.mpf(3) / 4, 2, 2, 2, 2, 1]
    return 3 * mpmath.pi / 256 * mpmath.hyper(upper, lower, 1)


_DEFINITIONS: Dict[str, Callable[[], mpmath.mpf]] = {
    "pi": lambda: +mpmath.pi,
    "sqrt3": lambda: mpmath.sqrt(3),
    "A": _const_A,
    "A4": _const_A4,
    "B4": _const_B4,
    "r50": _const_r50,
    "Cl_pi_3": _const_clausen,
    "zeta3": lambda: mpmath.zeta(3),
}

_CACHE: Dict[Tuple[str, int], mpmath.mpf] = {}
_LOCK = threading.Lock()


def constant_names() -> List[str]:
    return list(_DEFINITIONS)


def constant(name: str) -> mpmath.mpf:
    """Registry value at the current working precision, computed once and cached."""
    if name not in _DEFINITIONS:
        raise UnknownConstantError(f"unknown constant {name!r}", known=constant_names())
    key = (name, mpmath.mp.dps)
    with _LOCK:
        cached = _CACHE.get(key)
    if cached is not None:
        return +cached
    logger.debug("computing constant %s at %d digits", name, mpmath.mp.dps)
    with mpmath.extradps(10):
        value = _DEFINITIONS[name]()
    with _LOCK:
        _CACHE.setdefault(key, value)
    return +value


def constants_table() -> Dict[str, mpmath.mpf]:
    return {name: constant(name) for name in _DEFINITIONS}


def basis_values(basis: ConstBasis) -> Tuple[mpmath.mpf, ...]:
    """Numeric values of the elements of a constant basis."""
    pi = constant("pi")
    basis = ConstBasis(basis)
    if basis == ConstBasis.ONE:
        return (mpmath.mpf(1),)
    if basis == ConstBasis.W3:
        A = constant("A")
        return (A, 1 / (pi ** 2 * A))
    if basis == ConstBasis.W4:
        return (constant("A4"), constant("B4"))
    if basis == ConstBasis.R5:
        r = constant("r50")
        return (r, 1 / (pi ** 4 * r))
    if basis == ConstBasis.CLAUSEN:
        return (mpmath.mpf(1), constant("sqrt3") / pi, constant("Cl_pi_3") / pi)
    if basis == ConstBasis.ZETA3:
        return (mpmath.mpf(1), 1 / pi ** 2, constant("zeta3") / pi ** 2)
    raise UnknownConstantError(f"unknown basis {basis}")
