"""
Exact arithmetic substrate
Half-integers, rationals, Laurent polynomials, piecewise functions and
rational combinations over named constant bases
"""
from __future__ import annotations

import json
from bisect import bisect_left
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import mpmath
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .errors import DomainError, InvariantViolation, UnsupportedPathError
from .models_pydantic import BASIS_LABELS, ConstBasis, Parity

RationalLike = Union[int, Fraction, str]

# =============================================================================
# RATIONALS & REALS
# =============================================================================

def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """Parse '3/2', '-7', '0.25' or '1e-3' into an exact Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a rational number: {text!r}") from exc


def format_rational(value: Union[int, Fraction]) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def is_exact(value: Any) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def to_real(value: Any) -> mpmath.mpf:
    """Convert ints, Fractions, rational strings, HalfInts and mpmath values to mpf."""
    if isinstance(value, HalfInt):
        value = value.nu
    if isinstance(value, str):
        value = parse_rational(value)
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value)


def pochhammer(a: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= a + i
    return out


def factorial_ratio(k: int, j: int, nu: Fraction) -> Fraction:
    """(k+nu)! nu! / ((k-j+nu)! (j+nu)!) as a product of j rational factors."""
    out = Fraction(1)
    for i in range(1, j + 1):
        out *= (k - j + nu + i) / (nu + i)
    return out

# =============================================================================
# HALF-INTEGERS
# =============================================================================

class HalfInt(BaseModel):
    """A half-integer nu >= 0 stored as twice its value; dimension d = 2 nu + 2"""
    twice: int = Field(..., ge=0, description="2*nu")

    model_config = ConfigDict(frozen=True)

    @property
    def nu(self) -> Fraction:
        return Fraction(self.twice, 2)

    @property
    def dim(self) -> int:
        return self.twice + 2

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __int__(self) -> int:
        if not self.is_integer:
            raise UnsupportedPathError(f"nu={self} is not an integer")
        return self.twice // 2

    def __str__(self) -> str:
        return format_rational(self.nu)

    def shifted(self, k: int) -> "HalfInt":
        return HalfInt(twice=self.twice + 2 * k)

    def real(self) -> mpmath.mpf:
        return to_real(self.nu)

    @classmethod
    def of(cls, value: Any) -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, float):
            if (2 * value) != int(2 * value):
                raise DomainError(f"nu={value} is not a half-integer")
            value = Fraction(int(2 * value), 2)
        q = parse_rational(value)
        if (2 * q).denominator != 1 or q < 0:
            raise DomainError(f"nu={value} is not a nonnegative half-integer")
        return cls(twice=int(2 * q))

    @classmethod
    def from_dim(cls, dim: int) -> "HalfInt":
        if int(dim) != dim or dim < 2:
            raise DomainError(f"dimension must be an integer >= 2, got {dim}")
        return cls(twice=int(dim) - 2)


def half(value: Any) -> HalfInt:
    return HalfInt.of(value)

# =============================================================================
# LAURENT POLYNOMIALS
# =============================================================================

class LaurentPoly:
    """Finite sum of c x^e with integer e and Fraction c; immutable, zero terms dropped."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[int, RationalLike]] = None):
        clean: Dict[int, Fraction] = {}
        for exp, coeff in (terms or {}).items():
            c = Fraction(coeff)
            if c:
                clean[int(exp)] = clean.get(int(exp), Fraction(0)) + c
        self._terms = {e: c for e, c in sorted(clean.items()) if c}
        self._hash = None

    @classmethod
    def monomial(cls, exp: int, coeff: RationalLike = 1) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def constant(cls, coeff: RationalLike) -> "LaurentPoly":
        return cls({0: coeff})

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[RationalLike]) -> "LaurentPoly":
        """c0 + c1 x + c2 x^2 + ..."""
        return cls({i: c for i, c in enumerate(coeffs)})

    @property
    def terms(self) -> Dict[int, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, exp: int) -> Fraction:
        return self._terms.get(exp, Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def min_exponent(self) -> Optional[int]:
        return min(self._terms) if self._terms else None

    @property
    def degree(self) -> Optional[int]:
        return max(self._terms) if self._terms else None

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if is_exact(other):
            return self._terms == LaurentPoly.constant(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        if not self._terms:
            return "LaurentPoly(0)"
        body = " + ".join(f"({format_rational(c)})x^{e}" for e, c in self._terms.items())
        return f"LaurentPoly({body})"

    def __add__(self, other: Any) -> "LaurentPoly":
        other = _as_poly(other)
        out = dict(self._terms)
        for e, c in other.items():
            out[e] = out.get(e, Fraction(0)) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.items()})

    def __sub__(self, other: Any) -> "LaurentPoly":
        return self + (-_as_poly(other))

    def __rsub__(self, other: Any) -> "LaurentPoly":
        return _as_poly(other) - self

    def __mul__(self, other: Any) -> "LaurentPoly":
        if is_exact(other):
            return self.scale(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out: Dict[int, Fraction] = {}
        for e1, c1 in self.items():
            for e2, c2 in other.items():
                out[e1 + e2] = out.get(e1 + e2, Fraction(0)) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "LaurentPoly":
        if power < 0:
            raise DomainError("negative powers of a Laurent polynomial are not polynomials")
        out = LaurentPoly.constant(1)
        for _ in range(power):
            out = out * self
        return out

    def scale(self, factor: RationalLike) -> "LaurentPoly":
        factor = Fraction(factor)
        return LaurentPoly({e: c * factor for e, c in self.items()})

    def shift_exponent(self, k: int) -> "LaurentPoly":
        """Multiply by x^k."""
        return LaurentPoly({e + k: c for e, c in self.items()})

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly({e - 1: c * e for e, c in self.items() if e != 0})

    def half_derivative(self) -> "LaurentPoly":
        """p -> -p'/(2x)"""
        return LaurentPoly({e - 2: -c * e / 2 for e, c in self.items() if e != 0})

    def reflect(self) -> "LaurentPoly":
        """p(-x)"""
        return LaurentPoly({e: c if e % 2 == 0 else -c for e, c in self.items()})

    def antiderivative(self) -> "LaurentPoly":
        if -1 in self._terms:
            raise UnsupportedPathError("antiderivative of x^-1 is not a Laurent polynomial")
        return LaurentPoly({e + 1: c / (e + 1) for e, c in self.items()})

    def integrate(self, a: RationalLike, b: RationalLike) -> Fraction:
        anti = self.antiderivative()
        return anti(Fraction(b)) - anti(Fraction(a))

    def substitute_linear(self, alpha: RationalLike, beta: RationalLike) -> "LaurentPoly":
        """p(alpha x + beta) for polynomials (no negative exponents)."""
        if self._terms and self.min_exponent < 0:
            raise DomainError("linear substitution needs a polynomial")
        alpha, beta = Fraction(alpha), Fraction(beta)
        out: Dict[int, Fraction] = {}
        for e, c in self.items():
            for r in range(e + 1):
                out[r] = out.get(r, Fraction(0)) + c * comb(e, r) * alpha ** r * beta ** (e - r)
        return LaurentPoly(out)

    def __call__(self, x: Any) -> Any:
        if is_exact(x):
            x = Fraction(x)
            if x == 0 and self._terms and self.min_exponent < 0:
                raise DomainError("Laurent polynomial with negative exponents evaluated at 0")
            return sum((c * x ** e for e, c in self.items()), Fraction(0))
        x = to_real(x)
        return mpmath.fsum(to_real(c) * x ** e for e, c in self.items())

    def to_pairs(self) -> List[list]:
        return [[e, format_rational(c)] for e, c in self.items()]

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[Any]]) -> "LaurentPoly":
        return cls({int(e): parse_rational(c) for e, c in pairs})


def _as_poly(value: Any) -> LaurentPoly:
    if isinstance(value, LaurentPoly):
        return value
    if is_exact(value):
        return LaurentPoly.constant(value)
    raise TypeError(f"cannot combine LaurentPoly with {type(value).__name__}")

# =============================================================================
# PIECEWISE FUNCTIONS
# =============================================================================

class PiecewiseFn(BaseModel):
    """Piecewise Laurent polynomial with rational breakpoints.

    With parity EVEN the function lives on [-b, b] and only x >= 0 is stored;
    breaks then start at 0. At an interior breakpoint the left piece owns x.
    """
    breaks: Tuple[Fraction, ...] = Field(..., description="Strictly increasing breakpoints")
    pieces: Tuple[LaurentPoly, ...] = Field(..., description="One Laurent polynomial per interval")
    parity: Parity = Field(Parity.NONE, description="EVEN when stored for x >= 0 only")

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("breaks", mode="before")
    @classmethod
    def _exact_breaks(cls, value):
        return tuple(parse_rational(b) for b in value)

    @field_validator("pieces", mode="before")
    @classmethod
    def _poly_pieces(cls, value):
        return tuple(p if isinstance(p, LaurentPoly) else LaurentPoly.from_pairs(p) for p in value)

    @model_validator(mode="after")
    def _check_layout(self):
        if len(self.breaks) < 2:
            raise ValueError("a piecewise function needs at least two breakpoints")
        if any(b >= c for b, c in zip(self.breaks, self.breaks[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(self.pieces) != len(self.breaks) - 1:
            raise ValueError("piece count must equal breakpoint count - 1")
        if self.parity == Parity.EVEN and self.breaks[0] != 0:
            raise ValueError("even functions are stored from 0")
        return self

    @property
    def domain(self) -> Tuple[Fraction, Fraction]:
        if self.parity == Parity.EVEN:
            return (-self.breaks[-1], self.breaks[-1])
        return (self.breaks[0], self.breaks[-1])

    @property
    def min_exponent(self) -> int:
        return min((p.min_exponent for p in self.pieces if not p.is_zero), default=0)

    def piece_index(self, y: Any) -> int:
        if is_exact(y):
            breaks: Sequence[Any] = self.breaks
        else:
            breaks = [to_real(b) for b in self.breaks]
        if y == breaks[0]:
            return 0
        return max(0, bisect_left(breaks, y) - 1)

    def __call__(self, x: Any) -> Any:
        if isinstance(x, str):
            x = parse_rational(x)
        if not is_exact(x):
            x = to_real(x)
        lo, hi = self.domain
        if x < (lo if is_exact(x) else to_real(lo)) or x > (hi if is_exact(x) else to_real(hi)):
            raise DomainError(f"x={x} outside [{lo}, {hi}]", x=x)
        y = -x if (self.parity == Parity.EVEN and x < 0) else x
        return self.pieces[self.piece_index(y)](y)

    def segments(self) -> List[Tuple[Fraction, Fraction, LaurentPoly]]:
        return [(self.breaks[i], self.breaks[i + 1], p) for i, p in enumerate(self.pieces)]

    def total_integral(self) -> Fraction:
        total = sum((p.integrate(a, b) for a, b, p in self.segments()), Fraction(0))
        return 2 * total if self.parity == Parity.EVEN else total

    def map_pieces(self, fn) -> "PiecewiseFn":
        return PiecewiseFn(breaks=self.breaks, pieces=tuple(fn(p) for p in self.pieces), parity=self.parity)

    def scale(self, factor: RationalLike) -> "PiecewiseFn":
        return self.map_pieces(lambda p: p.scale(factor))

    def multiply(self, poly: LaurentPoly, parity: Optional[Parity] = None) -> "PiecewiseFn":
        out = self.map_pieces(lambda p: p * poly)
        if parity is not None:
            out = out.model_copy(update={"parity": parity})
        return out

    def derivative(self) -> "PiecewiseFn":
        return self.map_pieces(LaurentPoly.derivative).model_copy(update={"parity": Parity.NONE})

    def cumulative(self) -> "PiecewiseFn":
        """Exact running integral from the left end of the stored domain."""
        if self.parity == Parity.EVEN:
            raise UnsupportedPathError("cumulative() needs a function stored on its full domain")
        pieces = []
        acc = Fraction(0)
        for a, b, p in self.segments():
            anti = p.antiderivative()
            pieces.append(anti - anti(a) + acc)
            acc += anti(b) - anti(a)
        return PiecewiseFn(breaks=self.breaks, pieces=tuple(pieces), parity=Parity.NONE)

    def merged(self) -> "PiecewiseFn":
        breaks = [self.breaks[0]]
        pieces: List[LaurentPoly] = []
        for (a, b, p) in self.segments():
            if pieces and pieces[-1] == p:
                breaks[-1] = b
            else:
                pieces.append(p)
                breaks.append(b)
        return PiecewiseFn(breaks=tuple(breaks), pieces=tuple(pieces), parity=self.parity)

    def to_json(self) -> str:
        return json.dumps({
            "breaks": [format_rational(b) for b in self.breaks],
            "pieces": [p.to_pairs() for p in self.pieces],
            "parity": self.parity.value if isinstance(self.parity, Parity) else self.parity,
        })

    @classmethod
    def from_json(cls, text: str) -> "PiecewiseFn":
        data = json.loads(text)
        return cls(breaks=data["breaks"], pieces=data["pieces"], parity=Parity(data.get("parity", "none")))


def eval_piecewise(f: PiecewiseFn, x: Any) -> Any:
    return f(x)


def _full_segments(f: PiecewiseFn) -> List[Tuple[Fraction, Fraction, LaurentPoly]]:
    segs = f.segments()
    if f.parity == Parity.EVEN:
        mirrored = [(-b, -a, p.reflect()) for a, b, p in reversed(segs)]
        segs = mirrored + segs
    return segs


@lru_cache(maxsize=4096)
def _convolution_antiderivative(p: LaurentPoly, q: LaurentPoly) -> Dict[Tuple[int, int], Fraction]:
    """Antiderivative in t of p(t) q(x - t), keyed by (power of t, power of x)."""
    out: Dict[Tuple[int, int], Fraction] = {}
    for e, pc in p.items():
        for f, qc in q.items():
            for r in range(f + 1):
                key = (e + r + 1, f - r)
                out[key] = out.get(key, Fraction(0)) + pc * qc * comb(f, r) * (-1) ** r / (e + r + 1)
    return out


def _at_limit(anti: Mapping[Tuple[int, int], Fraction], slope: int, offset: Fraction) -> LaurentPoly:
    """Evaluate a bivariate antiderivative at t = slope*x + offset."""
    out: Dict[int, Fraction] = {}
    for (i, j), c in anti.items():
        if slope == 0:
            out[j] = out.get(j, Fraction(0)) + c * offset ** i
        else:
            for r in range(i + 1):
                out[r + j] = out.get(r + j, Fraction(0)) + c * comb(i, r) * offset ** (i - r)
    return LaurentPoly(out)


def convolve(f: PiecewiseFn, g: PiecewiseFn) -> PiecewiseFn:
    """Exact convolution of two compactly supported piecewise polynomials."""
    for h in (f, g):
        if h.min_exponent < 0:
            raise DomainError("convolution needs polynomial pieces (no negative exponents)")
    F, G = _full_segments(f), _full_segments(g)
    even = f.parity == Parity.EVEN and g.parity == Parity.EVEN
    cands = {a + c for a, b, _ in F for c, d, _ in G}
    cands |= {b + d for a, b, _ in F for c, d, _ in G}
    cands |= {a + d for a, b, _ in F for c, d, _ in G}
    cands |= {b + c for a, b, _ in F for c, d, _ in G}
    if even:
        cands = {c for c in cands if c > 0} | {Fraction(0)}
    knots = sorted(cands)
    pieces: List[LaurentPoly] = []
    for u, v in zip(knots, knots[1:]):
        w = (u + v) / 2
        acc = LaurentPoly()
        for a, b, P in F:
            for c, d, Q in G:
                lower_fixed = a >= w - d
                upper_fixed = b <= w - c
                lo = a if lower_fixed else w - d
                hi = b if upper_fixed else w - c
                if lo >= hi:
                    continue
                anti = _convolution_antiderivative(P, Q)
                top = _at_limit(anti, 0, b) if upper_fixed else _at_limit(anti, 1, -c)
                bottom = _at_limit(anti, 0, a) if lower_fixed else _at_limit(anti, 1, -d)
                acc = acc + top - bottom
        pieces.append(acc)
    out = PiecewiseFn(breaks=tuple(knots), pieces=tuple(pieces),
                      parity=Parity.EVEN if even else Parity.NONE)
    return _trim_zero_ends(out).merged()


def _trim_zero_ends(f: PiecewiseFn) -> PiecewiseFn:
    breaks, pieces = list(f.breaks), list(f.pieces)
    while len(pieces) > 1 and pieces[-1].is_zero:
        pieces.pop()
        breaks.pop()
    if f.parity != Parity.EVEN:
        while len(pieces) > 1 and pieces[0].is_zero:
            pieces.pop(0)
            breaks.pop(0)
    return PiecewiseFn(breaks=tuple(breaks), pieces=tuple(pieces), parity=f.parity)


def apply_half_derivative_operator(f: PiecewiseFn, m: int) -> PiecewiseFn:
    """Apply p -> -p'/(2x) m times to every piece."""
    if m < 1:
        raise DomainError("the operator power m must be >= 1", m=m)
    out = f
    for _ in range(m):
        out = out.map_pieces(LaurentPoly.half_derivative)
    return out


def kernel_power(m: int) -> PiecewiseFn:
    """Even density c_m (1 - x^2)^(m-1) on [-1, 1], normalized to total mass 1."""
    if m < 1:
        raise DomainError("kernel order m must be >= 1", m=m)
    base = LaurentPoly({0: 1, 2: -1}) ** (m - 1)
    mass = 2 * base.integrate(0, 1)
    return PiecewiseFn(breaks=(0, 1), pieces=(base.scale(1 / mass),), parity=Parity.EVEN)


def assert_polynomial(f: PiecewiseFn, what: str) -> PiecewiseFn:
    if f.min_exponent < 0:
        raise InvariantViolation(f"{what}: negative exponent {f.min_exponent} survived", exponent=f.min_exponent)
    return f

# =============================================================================
# CONSTANT COMBINATIONS
# =============================================================================

class ConstCombo(BaseModel):
    """Exact rational combination sum(c_i * basis_i) over a named constant basis"""
    basis: ConstBasis = Field(..., description="Constant basis tag")
    coeffs: Tuple[Fraction, ...] = Field(..., description="One rational per basis element")

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("coeffs", mode="before")
    @classmethod
    def _exact_coeffs(cls, value):
        return tuple(parse_rational(c) for c in value)

    @model_validator(mode="after")
    def _check_arity(self):
        arity = len(BASIS_LABELS[ConstBasis(self.basis).value])
        if len(self.coeffs) != arity:
            raise ValueError(f"basis {self.basis} expects {arity} coefficients, got {len(self.coeffs)}")
        return self

    @classmethod
    def of(cls, basis: ConstBasis, *coeffs: RationalLike) -> "ConstCombo":
        return cls(basis=basis, coeffs=coeffs)

    @classmethod
    def zero(cls, basis: ConstBasis) -> "ConstCombo":
        return cls(basis=basis, coeffs=(0,) * len(BASIS_LABELS[ConstBasis(basis).value]))

    @property
    def labels(self) -> List[str]:
        return BASIS_LABELS[ConstBasis(self.basis).value]

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _same_basis(self, other: "ConstCombo") -> None:
        if ConstBasis(other.basis) != ConstBasis(self.basis):
            raise DomainError(f"cannot combine bases {self.basis} and {other.basis}")

    def __add__(self, other: "ConstCombo") -> "ConstCombo":
        self._same_basis(other)
        return ConstCombo(basis=self.basis, coeffs=tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "ConstCombo") -> "ConstCombo":
        return self + other.scale(-1)

    def __neg__(self) -> "ConstCombo":
        return self.scale(-1)

    def scale(self, factor: RationalLike) -> "ConstCombo":
        factor = Fraction(factor)
        return ConstCombo(basis=self.basis, coeffs=tuple(c * factor for c in self.coeffs))

    def __mul__(self, factor: RationalLike) -> "ConstCombo":
        return self.scale(factor)

    __rmul__ = __mul__

    def __truediv__(self, factor: RationalLike) -> "ConstCombo":
        return self.scale(1 / Fraction(factor))

    def value(self) -> mpmath.mpf:
        from .specfun import basis_values
        return mpmath.fsum(to_real(c) * v for c, v in zip(self.coeffs, basis_values(ConstBasis(self.basis))))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "basis": ConstBasis(self.basis).value,
            "coeffs": {label: format_rational(c) for label, c in zip(self.labels, self.coeffs)},
        }

    def __str__(self) -> str:
        parts = [f"({format_rational(c)})*{label}" for c, label in zip(self.coeffs, self.labels) if c]
        return " + ".join(parts) if parts else "0"
