"""
Exact even moments W_n(nu; 2k)
Multinomial and convolution formulas, the Narayana-type matrix, holonomic
recursion validators, residue sequences and three-step principal parts
"""
from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import DomainError, UnresolvedCoefficientError, UnsupportedPathError
from .numcore import HalfInt, LaurentPoly, factorial_ratio, format_rational, pochhammer
from .specfun import pfq_exact

logger = logging.getLogger(__name__)

# =============================================================================
# MODELS
# =============================================================================

class MomentTable(BaseModel):
    """W_n(nu; 2k) for k = 0..len(values)-1"""
    n_steps: int = Field(..., ge=1)
    nu: HalfInt
    values: Tuple[Fraction, ...]

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def _normalized(self):
        if self.values and self.values[0] != 1:
            raise ValueError("W_n(nu; 0) must be 1")
        if len(self.values) > 1 and self.values[1] != self.n_steps:
            raise ValueError("W_n(nu; 2) must equal n")
        return self

    def rows(self) -> List[Dict[str, Any]]:
        return [{"k": k, "s": 2 * k, "value": format_rational(v)} for k, v in enumerate(self.values)]


class NarayanaMatrix(BaseModel):
    """Lower triangular A_{k,j}(nu) = C(k,j) (k+nu)! nu! / ((k-j+nu)! (j+nu)!)"""
    nu: HalfInt
    size: int = Field(..., ge=1)
    entries: Tuple[Tuple[Fraction, ...], ...]

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    def power(self, n: int) -> List[List[Fraction]]:
        result = [[Fraction(int(i == j)) for j in range(self.size)] for i in range(self.size)]
        for _ in range(n):
            result = _matmul(result, self.entries)
        return result


class ResidueSeq(BaseModel):
    """V_3(nu; k) for k = 0.. (residue numerators of W_3 at s = -d - 2k)"""
    nu: HalfInt
    values: Tuple[Fraction, ...]

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    def rows(self) -> List[Dict[str, Any]]:
        return [{"k": k, "value": format_rational(v)} for k, v in enumerate(self.values)]

# =============================================================================
# EVEN MOMENTS
# =============================================================================

def even_moment_multinomial(n: int, nu: Any, k: int) -> Fraction:
    """Multinomial double sum; integer nu only."""
    nu = HalfInt.of(nu)
    _check_nk(n, k)
    if not nu.is_integer:
        raise UnsupportedPathError("half-odd nu needs even_moment_conv (factorials become Gamma values)", nu=str(nu))
    v = int(nu)
    # dp[j] = sum over compositions of j into the parts seen so far of prod 1/(m! (m+v)!)
    term = [Fraction(1, factorial(m) * factorial(m + v)) for m in range(k + 1)]
    dp = term[:]
    for _ in range(n - 1):
        dp = [sum((dp[j - m] * term[m] for m in range(j + 1)), Fraction(0)) for j in range(k + 1)]
    return factorial(k + v) * factorial(v) ** (n - 1) * factorial(k) * dp[k]


def even_moment_conv(n: int, nu: Any, k: int) -> Fraction:
    """Convolution recursion W_n(2k) = sum_j C(k,j) R(k,j,nu) W_{n-1}(2j); any half-integer nu."""
    nu = HalfInt.of(nu)
    _check_nk(n, k)
    return _moment_rows(n, nu, k)[k]


@lru_cache(maxsize=512)
def _moment_rows(n: int, nu: HalfInt, kmax: int) -> Tuple[Fraction, ...]:
    if n == 1:
        return tuple(Fraction(1) for _ in range(kmax + 1))
    prev = _moment_rows(n - 1, nu, kmax)
    A = _narayana_entries(nu, kmax + 1)
    return tuple(sum((A[k][j] * prev[j] for j in range(k + 1)), Fraction(0)) for k in range(kmax + 1))


def moment_table(n: int, nu: Any, kmax: int) -> MomentTable:
    nu = HalfInt.of(nu)
    _check_nk(n, kmax)
    return MomentTable(n_steps=n, nu=nu, values=_moment_rows(n, nu, kmax))


def w2_even_exact(nu: Any, k: int) -> Fraction:
    """2^(2k) (nu+1/2)_k / (2nu+1)_k"""
    nu = HalfInt.of(nu).nu
    return 4 ** k * pochhammer(nu + Fraction(1, 2), k) / pochhammer(2 * nu + 1, k)


def w3_even_hypergeometric(nu: Any, k: int) -> Fraction:
    """Terminating 3F2(-k, -k-nu, nu+1/2; nu+1, 2nu+1; 4)."""
    v = HalfInt.of(nu).nu
    if k == 0:
        return Fraction(1)
    return pfq_exact([-k, -k - v, v + Fraction(1, 2)], [v + 1, 2 * v + 1], 4)


def _check_nk(n: int, k: int) -> None:
    if n < 1:
        raise DomainError(f"number of steps must be >= 1, got {n}", n=n)
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}", k=k)

# =============================================================================
# NARAYANA MATRIX
# =============================================================================

@lru_cache(maxsize=128)
def _narayana_entries(nu: HalfInt, size: int) -> Tuple[Tuple[Fraction, ...], ...]:
    v = nu.nu
    return tuple(
        tuple(Fraction(comb(k, j)) * factorial_ratio(k, j, v) if j <= k else Fraction(0) for j in range(size))
        for k in range(size)
    )


def narayana_matrix(nu: Any, size: int) -> NarayanaMatrix:
    nu = HalfInt.of(nu)
    if size < 1:
        raise DomainError("matrix size must be >= 1")
    return NarayanaMatrix(nu=nu, size=size, entries=_narayana_entries(nu, size))


def _matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    size = len(a)
    # both factors are lower triangular
    return [[sum((a[i][t] * b[t][j] for t in range(j, i + 1)), Fraction(0)) if j <= i else Fraction(0)
             for j in range(size)] for i in range(size)]


def narayana_power_rowsums(nu: Any, n: int, size: int) -> List[Fraction]:
    if n < 1:
        raise DomainError("matrix power n must be >= 1")
    power = narayana_matrix(nu, size).power(n)
    return [sum(row, Fraction(0)) for row in power]

# =============================================================================
# RECURSION VALIDATORS
# =============================================================================

def _values_or_table(n: int, nu: HalfInt, kmax: int, values: Optional[Sequence[Any]]) -> List[Fraction]:
    if values is None:
        return list(_moment_rows(n, nu, kmax + 1))
    if len(values) < kmax + 2:
        raise DomainError(f"need W(2k) for k <= {kmax + 1}, got {len(values)} values")
    return [Fraction(v) for v in values]


def rec3_residual(nu: Fraction, k: Any, w_next: Any, w: Any, w_prev: Any) -> Any:
    """(k+2nu+1)(k+3nu+1)W(2k+2) - 1/2(20(k+1/2)^2+60(k+1/2)nu+36nu^2+1)W(2k) + 9k(k+nu)W(2k-2)"""
    h = k + Fraction(1, 2)
    return ((k + 2 * nu + 1) * (k + 3 * nu + 1) * w_next
            - Fraction(1, 2) * (20 * h * h + 60 * h * nu + 36 * nu * nu + 1) * w
            + 9 * k * (k + nu) * w_prev)


def rec4_residual(nu: Fraction, k: Any, w_next: Any, w: Any, w_prev: Any) -> Any:
    h = k + Fraction(1, 2)
    return ((k + 2 * nu + 1) * (k + 3 * nu + 1) * (k + 4 * nu + 1) * w_next
            - (h + 2 * nu) * (20 * h * h + 80 * h * nu + 48 * nu * nu + 3) * w
            + 64 * k * (k + nu) * (k + 2 * nu) * w_prev)


def _w5_a(nu: Fraction, m: Any) -> Any:
    return (35 * m ** 4 + 350 * nu * m ** 3 + (1183 * nu ** 2 + Fraction(21, 2)) * m ** 2
            + (1540 * nu ** 2 + Fraction(105, 2)) * nu * m
            + 600 * nu ** 4 + Fraction(237, 4) * nu ** 2 + Fraction(3, 16))


def _w5_b(nu: Fraction, k: Any) -> Any:
    return k * (k + nu) * (259 * k * k + 1295 * k * nu + 1450 * nu * nu + 26)


def rec5_residual(nu: Fraction, k: Any, w_next: Any, w: Any, w_prev: Any, w_prev2: Any) -> Any:
    lead = (k + 2 * nu + 1) * (k + 3 * nu + 1) * (k + 4 * nu + 1) * (k + 5 * nu + 1)
    return (lead * w_next - _w5_a(nu, k + Fraction(1, 2)) * w + _w5_b(nu, k) * w_prev
            - 225 * k * (k - 1) * (k + nu) * (k - 1 + nu) * w_prev2)


def validate_recursion_w3(nu: Any, kmax: int, values: Optional[Sequence[Any]] = None) -> bool:
    nu = HalfInt.of(nu)
    w = _values_or_table(3, nu, kmax, values)
    return all(rec3_residual(nu.nu, k, w[k + 1], w[k], w[k - 1]) == 0 for k in range(1, kmax + 1))


def validate_recursion_w4(nu: Any, kmax: int, values: Optional[Sequence[Any]] = None) -> bool:
    nu = HalfInt.of(nu)
    w = _values_or_table(4, nu, kmax, values)
    return all(rec4_residual(nu.nu, k, w[k + 1], w[k], w[k - 1]) == 0 for k in range(1, kmax + 1))


def validate_recursion_w5(nu: Any, kmax: int, values: Optional[Sequence[Any]] = None) -> bool:
    nu = HalfInt.of(nu)
    w = _values_or_table(5, nu, kmax, values)
    return all(
        rec5_residual(nu.nu, k, w[k + 1], w[k], w[k - 1], w[k - 2] if k >= 2 else 0) == 0
        for k in range(1, kmax + 1)
    )


def dim_recursion_residual(n: int, nu: Fraction, s: Any, lower: Callable[[int], Any], here: Any) -> Any:
    """Residual of the relation between W_n(nu; s) (``here``) and W_n(nu-1; s+2j) (``lower(j)``)."""
    if n == 3:
        return (s + 2) * (s + 6 * nu) * here + 6 * nu ** 2 * lower(1) - 2 * nu ** 2 * lower(2)
    if n == 4:
        return (3 * (s + 2) * (s + 6 * nu) * (s + 8 * nu) * (s + 8 * nu - 2) * here
                + 256 * nu ** 3 * (s + 4 * nu) * lower(1)
                - 8 * nu ** 3 * (5 * s + 32 * nu - 6) * lower(2))
    if n == 5:
        a = 107 * s * s + 2 * (445 * nu + 152) * s + 2 * (550 * nu * nu + 1165 * nu - 78)
        b = (s + 4 * nu + 2) * (13 * s + 110 * nu - 16)
        return (3 * (s + 2) * (s + 4) * (s + 2 * nu + 2) * (s + 8 * nu) * (s + 10 * nu - 2) * (s + 10 * nu) * here
                - 450 * nu ** 4 * (s + 4) * (s + 2 * nu + 2) * lower(1)
                + 4 * nu ** 4 * a * lower(2)
                - 2 * nu ** 4 * b * lower(3))
    raise UnsupportedPathError(f"no dimensional recursion for n={n}")


def validate_dim_recursion(n: int, nu: Any, kmax: int) -> bool:
    """Exact check of the dimensional recursion at s = 0, 2, ..., 2 kmax."""
    nu = HalfInt.of(nu)
    if nu.twice < 2:
        raise DomainError("dimensional recursion needs nu >= 1")
    below = nu.shifted(-1)
    rows_here = _moment_rows(n, nu, kmax)
    rows_below = _moment_rows(n, below, kmax + 3)
    for k in range(kmax + 1):
        res = dim_recursion_residual(n, nu.nu, 2 * k, lambda j: rows_below[k + j], rows_here[k])
        if res != 0:
            logger.debug("dimensional recursion n=%d nu=%s fails at s=%d", n, nu, 2 * k)
            return False
    return True

# =============================================================================
# RESIDUES & PRINCIPAL PARTS
# =============================================================================

def residues_v3(nu: Any, kmax: int) -> ResidueSeq:
    """(k+1)(k+nu+1)u_{k+1} = 1/2(20(k+1/2)^2 - 20(k+1/2)nu - 4nu^2 + 1)u_k - 9(k-nu)(k-2nu)u_{k-1}"""
    nu = HalfInt.of(nu)
    if not nu.is_integer:
        raise UnsupportedPathError("V_3 residues are defined for integer nu")
    v = nu.nu
    prev, cur = Fraction(0), Fraction(1)
    out = [cur]
    for k in range(kmax):
        h = k + Fraction(1, 2)
        rhs = Fraction(1, 2) * (20 * h * h - 20 * h * v - 4 * v * v + 1) * cur - 9 * (k - v) * (k - 2 * v) * prev
        prev, cur = cur, rhs / ((k + 1) * (k + v + 1))
        out.append(cur)
    return ResidueSeq(nu=nu, values=tuple(out))


def _h_rows(nu: int, kmax: int) -> Dict[int, Dict[int, Fraction]]:
    """H(mu; k) for mu <= nu and -2mu <= k <= kmax + 2(nu - mu)."""
    top = kmax + 2 * nu
    base = _moment_rows(3, HalfInt(twice=0), top + 2)
    rows: Dict[int, Dict[int, Fraction]] = {0: {k: base[k] for k in range(top + 3)}}
    rows[0][-1] = Fraction(0)
    for mu in range(1, nu + 1):
        prev = rows[mu - 1]
        get = lambda k: prev.get(k, Fraction(0)) if k >= -2 * (mu - 1) else Fraction(0)
        row: Dict[int, Fraction] = {}
        for k in range(-2 * mu, kmax + 2 * (nu - mu) + 1):
            lead2 = 2 * (k + 1) * (k + 3 * mu)
            if lead2 != 0:
                row[k] = Fraction(mu * mu) * (get(k + 2) - 3 * get(k + 1)) / lead2
                continue
            lead1 = 2 * (k + 2 * mu) * (k + 3 * mu - 1) * (k + 3 * mu)
            if lead1 != 0:
                row[k] = Fraction(mu * mu) * ((7 * k + 15 * mu - 4) * get(k + 1) - 9 * (k + mu) * get(k)) / lead1
                continue
            raise UnresolvedCoefficientError(f"H({mu};{k}) is not determined by either relation", nu=mu, k=k)
        rows[mu] = row
    return rows


def gf3_principal_part(nu: int, kmax: int) -> Tuple[LaurentPoly, List[Fraction]]:
    """Return (q_nu, [H(nu; k) for 0 <= k <= kmax]).

    q_nu(x) = sum_{k=-2nu}^{0} H(nu; k) x^(k+2nu); the generating function's
    principal part is q_nu(1/x) x^(-2nu) minus the constant term, i.e.
    sum_{k<0} H(nu; k) x^k.
    """
    if int(nu) != nu or nu < 0:
        raise DomainError("gf3_principal_part needs an integer nu >= 0")
    nu = int(nu)
    if nu == 0:
        return LaurentPoly(), list(_moment_rows(3, HalfInt(twice=0), kmax))
    row = _h_rows(nu, kmax)[nu]
    q = LaurentPoly({k + 2 * nu: row[k] for k in range(-2 * nu, 1)})
    return q, [row[k] for k in range(kmax + 1)]


def principal_part_terms(nu: int) -> Dict[int, Fraction]:
    """Coefficients H(nu; k) for -2nu <= k <= -1."""
    if nu == 0:
        return {}
    row = _h_rows(int(nu), 0)[int(nu)]
    return {k: row[k] for k in range(-2 * int(nu), 0)}

# =============================================================================
# POLYNOMIALS IN n
# =============================================================================

def moment_poly_value(n: int, nu: Any, k: int) -> Fraction:
    v = HalfInt.of(nu).nu
    if k == 1:
        return Fraction(n)
    if k == 2:
        return Fraction(n * (n * (v + 2) - 1)) / (v + 1)
    if k == 3:
        return n * (n * n * (v + 2) * (v + 3) - 3 * n * (v + 3) + 4) / (v + 1) ** 2
    raise DomainError("closed polynomials in n exist for k in {1, 2, 3}", k=k)


def moment_poly_in_n(nu: Any, k: int, n_max: int = 8) -> Dict[str, Any]:
    """Compare the closed polynomial-in-n forms with the convolution recursion for n = 1..n_max."""
    rows = []
    for n in range(1, n_max + 1):
        closed = moment_poly_value(n, nu, k)
        exact = even_moment_conv(n, nu, k)
        rows.append({"n": n, "closed": format_rational(closed), "exact": format_rational(exact), "ok": closed == exact})
    return {"nu": str(HalfInt.of(nu)), "k": k, "rows": rows, "agree": all(r["ok"] for r in rows)}
