"""
Verification suites
Each suite recomputes published values and cross-checks independent paths
(exact, closed form, quadrature, simulation) and reports pass/fail per check
"""
from __future__ import annotations

import logging
from fractions import Fraction
from math import comb
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from pydantic import BaseModel, Field

from . import closed_moments as cm
from . import densities as dn
from . import exact_moments as em
from . import montecarlo as mc
from . import quadrature as qd
from .config import get_settings
from .errors import ExcludedPointError, WalkerError
from .genfun import gf_check
from .models_pydantic import ConstBasis, KSReference, QuadSpec, SuiteReport
from .numcore import ConstCombo, LaurentPoly, parse_rational, to_real
from .specfun import hyp

logger = logging.getLogger(__name__)

Outcome = Tuple[bool, str]

# =============================================================================
# PUBLISHED TABLES
# =============================================================================

EVEN_MOMENTS: Dict[Tuple[int, int], str] = {
    (2, 0): "1 2 6 20 70 252 924 3432 12870",
    (3, 0): "1 3 15 93 639 4653 35169 272835 2157759",
    (4, 0): "1 4 28 256 2716 31504 387136 4951552 65218204",
    (5, 0): "1 5 45 545 7885 127905 2241225 41467725 798562125",
    (6, 0): "1 6 66 996 18306 384156 8848236 218040696 5651108226",
    (2, 1): "1 2 5 14 42 132 429 1430 4862",
    (3, 1): "1 3 12 57 303 1743 10629 67791 448023",
    (4, 1): "1 4 22 148 1144 9784 90346 885868 9115276",
    (5, 1): "1 5 35 305 3105 35505 444225 5970725 85068365",
    (6, 1): "1 6 51 546 6906 99156 1573011 27045906 496875786",
    (2, 2): "1 2 14/3 12 33 286/3 286 884 8398/3",
    (3, 2): "1 3 11 139/3 216 1088 5825 32763 191935",
    (4, 2): "1 4 20 352/3 2330/3 16952/3 133084/3 370752 3265208",
}

V3_ROWS: Dict[int, str] = {
    0: "1 3 15 93 639 4653 35169 272835 2157759",
    1: "1 -2 -2 -6 -24 -114 -606 -3486 -21258",
    2: "1 -5 6 2 6 18 66 278 1296",
    3: "1 -15/2 21 -20 0 -9 -20 -60 -210",
}

W3_DERIVATIVES: Dict[int, Tuple[str, str, str]] = {
    0: ("0", "0", "1"),
    1: ("1/2", "-11/16", "1"),
    2: ("17/36", "-181/320", "1"),
}

W4_DERIVATIVES: Dict[int, Tuple[str, str, str]] = {
    0: ("0", "0", "7/2"),
    1: ("3/4", "-53/9", "7/2"),
    2: ("13/24", "-48467/14175", "7/2"),
}

ODD_MOMENTS: List[Tuple[int, int, int, ConstBasis, Tuple[str, ...]]] = [
    (3, 0, 1, ConstBasis.W3, ("1", "6")),
    (3, 0, -1, ConstBasis.W3, ("1", "0")),
    (3, 1, 1, ConstBasis.W3, ("476/525", "52/7")),
    (3, 1, -3, ConstBasis.W3, ("4/3", "-4")),
    (4, 0, 1, ConstBasis.W4, ("16", "-48")),
    (4, 0, -1, ConstBasis.W4, ("4", "0")),
    (4, 1, 1, ConstBasis.W4, ("3334144/165375", "-11608064/165375")),
]

R5_PRINTED = (("0.329934", 5e-7), ("0.00661673", 5e-9), ("0.000262333", 1e-9))


def _row(text: str) -> List[Fraction]:
    return [parse_rational(t) for t in text.split()]

# =============================================================================
# HELPERS
# =============================================================================

class VerifyOptions(BaseModel):
    """Knobs shared by the suites"""
    samples: int = Field(1_000_000, ge=1000, description="Monte Carlo sample count")
    seed: Optional[int] = Field(None, ge=0, description="Monte Carlo seed; None uses settings.seed")
    workers: Optional[int] = Field(None, ge=1)
    quad: QuadSpec = Field(default_factory=QuadSpec)

    @property
    def rng_seed(self) -> int:
        return self.seed if self.seed is not None else get_settings().seed


def _check(report: SuiteReport, name: str, fn: Callable[[], Outcome]) -> None:
    try:
        passed, detail = fn()
    except WalkerError as exc:
        passed, detail = False, f"{type(exc).__name__}: {exc.message}"
    report.add(name, passed, detail)


def _close(value: Any, target: Any, tol: float) -> Outcome:
    diff = abs(to_real(value) - to_real(target))
    return diff <= tol, f"|diff|={mpmath.nstr(diff, 3)} tol={tol:g}"


def _equal(value: Any, target: Any) -> Outcome:
    if value == target:
        return True, "exact"
    return False, f"got {value}, expected {target}"


def _combo(basis: ConstBasis, coeffs: Sequence[str]) -> ConstCombo:
    return ConstCombo(basis=basis, coeffs=tuple(parse_rational(c) for c in coeffs))


def _raises(fn: Callable[[], Any], error: type) -> Outcome:
    try:
        fn()
    except error as exc:
        return True, f"raised {type(exc).__name__}"
    return False, f"expected {error.__name__}"

# =============================================================================
# EXACT SUITES
# =============================================================================

def suite_moments(opts: VerifyOptions) -> SuiteReport:
    report = SuiteReport(suite="moments")
    for (n, nu), text in EVEN_MOMENTS.items():
        expected = _row(text)
        _check(report, f"W_{n}({nu}; 2k) table",
               lambda n=n, nu=nu, e=expected: _equal(list(em.moment_table(n, nu, len(e) - 1).values), e))
    for nu in range(4):
        def agree(nu=nu) -> Outcome:
            for n in range(1, 7):
                for k in range(13):
                    if em.even_moment_multinomial(n, nu, k) != em.even_moment_conv(n, nu, k):
                        return False, f"multinomial and convolution differ at n={n} k={k}"
            return True, "n <= 6, k <= 12"
        _check(report, f"multinomial = convolution (nu={nu})", agree)
    for nu in range(3):
        for k in (1, 2, 3):
            _check(report, f"polynomial in n (nu={nu}, 2k={2 * k})",
                   lambda nu=nu, k=k: (em.moment_poly_in_n(nu, k)["agree"], "n = 1..8"))
    return report


def suite_narayana(opts: VerifyOptions) -> SuiteReport:
    report = SuiteReport(suite="narayana")
    catalan = [Fraction(comb(2 * k + 2, k + 1), k + 2) for k in range(11)]
    _check(report, "W_2(1; 2k) = C_(k+1)", lambda: _equal(list(em.moment_table(2, 1, 10).values), catalan))
    for nu in (0, 1, 2, "1/2"):
        _check(report, f"row sums of A({nu})^3 = W_4({nu}; 2k)",
               lambda nu=nu: _equal(em.narayana_power_rowsums(nu, 3, 11), list(em.moment_table(4, nu, 10).values)))
    return report


def suite_recursions(opts: VerifyOptions) -> SuiteReport:
    report = SuiteReport(suite="recursions")
    validators = {3: em.validate_recursion_w3, 4: em.validate_recursion_w4, 5: em.validate_recursion_w5}
    for n, validator in validators.items():
        for nu in range(4):
            _check(report, f"rec{n} nu={nu}", lambda v=validator, nu=nu: (v(nu, 12), "k <= 12"))
        def broken(n=n, v=validator) -> Outcome:
            values = list(em.moment_table(n, 0, 9).values)
            values[5] += 1
            return not v(0, 8, values), "perturbed table rejected"
        _check(report, f"rec{n} rejects a perturbed table", broken)
    for n in (3, 4, 5):
        for nu in (1, 2, 3):
            _check(report, f"dimensional recursion n={n} nu={nu}",
                   lambda n=n, nu=nu: (em.validate_dim_recursion(n, nu, 10), "s = 0..20"))
    return report


def suite_residues(opts: VerifyOptions) -> SuiteReport:
    report = SuiteReport(suite="residues")
    for nu, text in V3_ROWS.items():
        expected = _row(text)
        _check(report, f"V_3({nu}; k) row", lambda nu=nu, e=expected: _equal(list(em.residues_v3(nu, 8).values), e))
    _check(report, "V_3(3; 4) = 0", lambda: _equal(em.residues_v3(3, 4).values[4], 0))
    for nu in range(3):
        for m in range(3):
            _check(report, f"residue quadrature n=3 nu={nu} m={m}",
                   lambda nu=nu, m=m: _close(qd.residue_quad(3, nu, m, opts.quad).value, cm.w3_residue(nu, m).value(), 1e-6))
    return report


def suite_gf3(opts: VerifyOptions) -> SuiteReport:
    report = SuiteReport(suite="gf3")
    q2 = LaurentPoly({0: Fraction(1, 6), 1: Fraction(-5, 6), 2: 1, 3: Fraction(1, 3), 4: 1})
    _check(report, "q_2 polynomial", lambda: _equal(em.gf3_principal_part(2, 0)[0], q2))
    _check(report, "q_0 vanishes", lambda: (em.gf3_principal_part(0, 3)[0].is_zero, "no principal part"))
    for nu in range(4):
        _check(report, f"tail = W_3({nu}; 2k)",
               lambda nu=nu: _equal(em.gf3_principal_part(nu, 10)[1], list(em.moment_table(3, nu, 10).values)))
    return report

# =============================================================================
# CLOSED-FORM SUITES
# =============================================================================

def suite_odd_moments(opts: VerifyOptions) -> SuiteReport:
    report = SuiteReport(suite="odd-moments")
    for n, nu, s, basis, coeffs in ODD_MOMENTS:
        getter = cm.w3_odd if n == 3 else cm.w4_odd
        expected = _combo(basis, coeffs)
        _check(report, f"W_{n}({nu}; {s}) coefficients", lambda g=getter, nu=nu, s=s, e=expected: _equal(g(nu, s), e))
        _check(report, f"W_{n}({nu}; {s}) vs quadrature",
               lambda g=getter, n=n, nu=nu, s=s: _close(g(nu, s).value(), qd.moment_quad(n, nu, s, opts.quad).value, 1e-8))
    _check(report, "W_3(0; 1) printed digits", lambda: _close(cm.w3_odd(0, 1).value(), "1.5746", 5e-5))
    for n, getter in ((3, cm.w3_odd), (4, cm.w4_odd)):
        _check(report, f"W_{n}(1; 1) independent of ladder order",
               lambda g=getter: _equal(g(1, 1, route="s_first"), g(1, 1, route="nu_first")))
    return report


def suite_kluyver(opts: VerifyOptions) -> SuiteReport:
    report = SuiteReport(suite="kluyver")
    for n in range(2, 7):
        _check(report, f"P_{n}(0; 1) = 1/{n + 1}",
               lambda n=n: _close(qd.cdf_quad(n, 0, 1, opts.quad).value, Fraction(1, n + 1), 1e-8))
    for nu in (1, 2, 3):
        _check(report, f"P_2({nu}; 1) closed sum", lambda nu=nu: _close(dn.p2_at1(nu).value(), qd.cdf_quad(2, nu, 1, opts.quad).value, 1e-8))
        _check(report, f"P_3({nu}; 1) closed sum", lambda nu=nu: _close(dn.p3_at1_cdf(nu).value(), qd.cdf_quad(3, nu, 1, opts.quad).value, 1e-8))
    _check(report, "P_3(2; 1) printed value",
           lambda: _close(dn.p3_at1_cdf(2).value(), mpmath.mpf(1) / 4 - 256 / (135 * mpmath.pi ** 2), 1e-30))
    return report


def suite_improbable(opts: VerifyOptions) -> SuiteReport:
    report = SuiteReport(suite="improbable")
    upper = [Fraction(19, 11), 1, 1, 1, 1]
    lower = [Fraction(8, 11), Fraction(4, 3), Fraction(3, 2), Fraction(5, 3)]
    _check(report, "5F4 at 16/27 = 3 pi^2/16", lambda: _close(hyp(upper, lower, Fraction(16, 27)), 3 * mpmath.pi ** 2 / 16, 1e-10))
    return report


def suite_odd_dim(opts: VerifyOptions) -> SuiteReport:
    report = SuiteReport(suite="odd-dim")
    x = LaurentPoly.monomial
    p3 = dn.density_odd_dim(3, 1)
    _check(report, "p_3(1/2; x) pieces", lambda: _equal(
        (p3.breaks, p3.pieces), ((0, 1, 3), (x(2, Fraction(1, 2)), x(1, Fraction(3, 4)) + x(2, Fraction(-1, 4))))))
    p4 = dn.density_odd_dim(4, 1)
    p4_expected = (x(2, Fraction(1, 2)) + x(3, Fraction(-3, 16)),
                   x(1, 1) + x(2, Fraction(-1, 2)) + x(3, Fraction(1, 16)))
    _check(report, "p_4(1/2; x) pieces", lambda: _equal((p4.breaks, p4.pieces), ((0, 2, 4), p4_expected)))
    for s in (-1, 0, 1, 2, 3, 4, 5, 6):
        _check(report, f"W_4(1/2; {s}) rational form",
               lambda s=s: _equal(cm.odd_dim_moment_exact(4, "1/2", s), cm.w4_half_closed(s)))
    _check(report, "W_4(1/2; -2) limit", lambda: _close(cm.odd_dim_moment(4, "1/2", -2), cm.w4_half_closed(-2), 1e-25))
    for s in range(0, 5):
        _check(report, f"W_3(1/2; {s}) rational form",
               lambda s=s: _equal(cm.odd_dim_moment_exact(3, "1/2", s), cm.w3_half_closed(s)))
    _check(report, "p_4'(1/2; 1) relation", lambda: _equal(dn.pn_derivative_at1_residual(4, "1/2"), 0))
    _check(report, "p_4(1/2) derivative at 0 = p_3(1/2; 1)", lambda: _equal(dn.pn_diffrel0_residual(4, "1/2"), 0))
    for xv in ("1/3", "1", "3/2", "5/2"):
        _check(report, f"p_3 hypergeometric = piecewise at x={xv}",
               lambda xv=xv: _close(dn.p3_hyp("1/2", parse_rational(xv)), p3(parse_rational(xv)), 1e-10))
    _check(report, "p_2 closed = piecewise at x=7/10",
           lambda: _close(dn.p2("1/2", Fraction(7, 10)), dn.density_odd_dim(2, 1)(Fraction(7, 10)), 1e-10))
    return report

# =============================================================================
# DENSITY SUITES
# =============================================================================

def suite_p3(opts: VerifyOptions) -> SuiteReport:
    report = SuiteReport(suite="p3")
    for nu in ("1/2", 1, 2):
        for xv in (0.3, 0.9, 1.5, 2.1, 2.7):
            _check(report, f"p_3({nu}; {xv}) vs quadrature",
                   lambda nu=nu, xv=xv: _close(dn.p3_hyp(nu, xv), qd.density_quad(3, nu, xv, opts.quad).value, 1e-8))
    rng = np.random.default_rng(opts.rng_seed)
    for nu in (1, 2):
        points = rng.uniform(0.05, 2.95, 10)
        def equation(nu=nu, points=points) -> Outcome:
            worst = max(abs(dn.p3_functional_equation_residual(nu, float(t))) for t in points)
            return worst <= 1e-10, f"max residual {mpmath.nstr(worst, 3)} over 10 points"
        _check(report, f"functional equation nu={nu}", equation)
    for nu in ("1/2", 1, 2):
        def asymptotics(nu=nu) -> Outcome:
            v = float(parse_rational(nu))
            got = dn.p3_endpoint_asymptotics(nu)
            ok = (abs(got["slope0"] - (2 * v + 1)) <= 0.01 and abs(got["slope3"] - 2 * v) <= 0.01
                  and abs(got["ratio0"] - 1) <= 0.01 and abs(got["ratio3"] - 1) <= 0.01)
            return ok, ", ".join(f"{k}={val:.4f}" for k, val in got.items())
        _check(report, f"endpoint asymptotics nu={nu}", asymptotics)
    for nu in (1, 2, 3):
        _check(report, f"p_3({nu}; 1) Gamma formula", lambda nu=nu: _close(dn.p3_at1(nu), dn.p3_hyp(nu, 1), 1e-10))
    _check(report, "p_3(1; 1) = 4/pi^2", lambda: _close(dn.p3_at1(1), 4 / mpmath.pi ** 2, 1e-30))
    for xv in (0.5, 1.5, 2.5):
        _check(report, f"dimensional recursion at x={xv}", lambda xv=xv: _close(dn.p3_dim_recursion_check(1, xv), 0, 1e-9))
    _check(report, "third derivative at 1 (nu=2)", lambda: _close(dn.p3_third_derivative_residual(2), 0, 1e-6))
    return report


def suite_p4(opts: VerifyOptions) -> SuiteReport:
    report = SuiteReport(suite="p4")
    for xv in (2.5, 3, 3.5):
        _check(report, f"p_4(1; {xv}) closed vs quadrature",
               lambda xv=xv: _close(dn.p4_dim4(xv), qd.density_quad(4, 1, xv, opts.quad).value, 1e-6))
    _check(report, "p_4(0; 2) Gamma product", lambda: _close(dn.p4_domb(2), dn.p4_at2_gamma(), 1e-8))
    _check(report, "p_4(1/2; 1) = 5/16", lambda: _equal(dn.p4("1/2", Fraction(1)), Fraction(5, 16)))
    for nu in (0, 1, 2):
        _check(report, f"p_4({nu}; 2) constant combination", lambda nu=nu: _close(dn.p4_at2_combo_check(nu, opts.quad), 0, 1e-6))
    _check(report, "dimensional recursion nu=1/2 x=1", lambda: _close(dn.p4_dim_recursion_check("1/2", 1, opts.quad), 0, 1e-6))
    _check(report, "dimensional recursion nu=0 x=3", lambda: _close(dn.p4_dim_recursion_check(0, 3, opts.quad), 0, 1e-6))
    _check(report, "dimensional recursion excludes x=2",
           lambda: _raises(lambda: dn.p4_dim_recursion_check("1/2", 2), ExcludedPointError))
    return report


def suite_p5(opts: VerifyOptions) -> SuiteReport:
    report = SuiteReport(suite="p5")
    values = dn.p5_taylor(2).values()
    for k, (printed, tol) in enumerate(R5_PRINTED):
        _check(report, f"r_5,{k} printed digits", lambda k=k, printed=printed, tol=tol: _close(values[k], printed, tol))
    r50 = values[0]
    _check(report, "r_5,0 = p_4(0; 1)", lambda: _close(r50, qd.density_quad(4, 0, 1, opts.quad).value, 1e-6))
    _check(report, "r_5,0 = residue of W_5(0; s) at -2", lambda: _close(r50, qd.residue_quad(5, 0, 0, opts.quad).value, 1e-6))
    _check(report, "p_4(1; 1) from r_5,0", lambda: _close(
        qd.density_quad(4, 1, 1, opts.quad).value, r50 / 6 + 105 / (16 * mpmath.pi ** 4 * r50), 1e-6))
    for xv in (0.2, 0.5, 0.8):
        _check(report, f"p_5(0; {xv}) series vs quadrature",
               lambda xv=xv: _close(dn.p5_eval(xv), qd.density_quad(5, 0, xv, opts.quad).value, 1e-6))
    return report


def suite_derivatives(opts: VerifyOptions) -> SuiteReport:
    report = SuiteReport(suite="derivatives")
    for nu, coeffs in W3_DERIVATIVES.items():
        expected = _combo(ConstBasis.CLAUSEN, coeffs)
        _check(report, f"W_3'({nu}; 0) coefficients", lambda nu=nu, e=expected: _equal(cm.w3_derivative_at0(nu), e))
        _check(report, f"W_3'({nu}; 0) vs differentiated quadrature",
               lambda nu=nu: _close(cm.w3_derivative_at0(nu).value(), cm.w3_derivative_quad(nu), 1e-5))
    for nu, coeffs in W4_DERIVATIVES.items():
        expected = _combo(ConstBasis.ZETA3, coeffs)
        _check(report, f"W_4'({nu}; 0) coefficients", lambda nu=nu, e=expected: _equal(cm.w4_derivative_at0(nu), e))
    return report


def suite_gf(opts: VerifyOptions) -> SuiteReport:
    report = SuiteReport(suite="gf")
    cases = [("w2", 1, 0.05, 1e-10), ("w3", 2, 0.05, 1e-8), ("w3", 0, 0.05, 1e-8),
             ("w4dim4", None, 0.02, 1e-8), ("w4dim2", None, 0.02, 1e-8)]
    for kind, nu, xv, tol in cases:
        def run(kind=kind, nu=nu, xv=xv, tol=tol) -> Outcome:
            result = gf_check(kind, nu, xv, 40)
            return result.residual <= tol, f"residual {result.residual:.2e} (truncation {result.truncation_bound:.1e})"
        _check(report, f"{kind} nu={nu} x={xv}", run)
    return report

# =============================================================================
# MONTE CARLO SUITE
# =============================================================================

def suite_montecarlo(opts: VerifyOptions) -> SuiteReport:
    report = SuiteReport(suite="montecarlo")
    seed, samples, workers = opts.rng_seed, opts.samples, opts.workers
    targets = [(3, 2, 1.0, lambda: cm.w3_odd(0, 1).value()), (4, 4, 2.0, lambda: 4), (2, 4, 4.0, lambda: 14),
               (2, 3, 1.0, lambda: Fraction(4, 3))]
    for n, dim, s, target in targets:
        def moment(n=n, dim=dim, s=s, target=target) -> Outcome:
            est = mc.estimate_moments(n, dim, [s], samples, seed, workers=workers).moment_estimates[format(s, "g")]
            return est.within(float(to_real(target()))), f"{est.mean:.6f} +- {est.stderr:.1e}"
        _check(report, f"E[d^{s:g}] n={n} dim={dim}", moment)
    for n, dim, kind in ((2, 3, KSReference.CLOSED), (3, 2, KSReference.QUAD), (4, 4, KSReference.QUAD)):
        def ks(n=n, dim=dim, kind=kind) -> Outcome:
            first, rerun = mc.ks_check(n, dim, samples, seed, mc.reference_cdf(n, dim, kind), workers)
            final = rerun or first
            return mc.ks_passed(first, rerun), f"D={final.statistic:.5f} critical={final.critical:.5f}"
        _check(report, f"KS n={n} dim={dim} vs {kind.value}", ks)
    def control() -> Outcome:
        result = mc.ks_test(2, 2, samples, seed, mc.reference_cdf(2, 3), workers)
        return not result.passed, f"D={result.statistic:.5f} critical={result.critical:.5f}"
    _check(report, "KS rejects the wrong dimension", control)
    stats = {n: mc.estimate_moments(n, 2, [], samples, seed + n, cdf_points=[1.0], workers=workers) for n in range(2, 7)}
    for n, walk in stats.items():
        _check(report, f"P(d <= 1) n={n} dim=2", lambda n=n, walk=walk: (
            walk.cdf_estimates["1"].within(1 / (n + 1)), f"{walk.cdf_estimates['1'].mean:.5f}"))
    def high_dim() -> Outcome:
        est = mc.estimate_moments(5, 50, [2.0], min(samples, 200_000), seed, workers=workers).moment_estimates["2"]
        return est.within(5.0), f"{est.mean:.5f} +- {est.stderr:.1e}"
    _check(report, "E[d^2] = n in dimension 50", high_dim)
    return report

# =============================================================================
# REGISTRY
# =============================================================================

SUITES: Dict[str, Callable[[VerifyOptions], SuiteReport]] = {
    "moments": suite_moments,
    "narayana": suite_narayana,
    "recursions": suite_recursions,
    "residues": suite_residues,
    "gf3": suite_gf3,
    "odd-moments": suite_odd_moments,
    "kluyver": suite_kluyver,
    "improbable": suite_improbable,
    "odd-dim": suite_odd_dim,
    "p3": suite_p3,
    "p4": suite_p4,
    "p5": suite_p5,
    "derivatives": suite_derivatives,
    "gf": suite_gf,
    "montecarlo": suite_montecarlo,
}


def run_suites(name: str = "all", opts: Optional[VerifyOptions] = None) -> List[SuiteReport]:
    """Run one suite by name, or every suite for ``all``."""
    opts = opts or VerifyOptions()
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(['all', *SUITES])}")
    reports = []
    for suite in names:
        logger.info("running suite %s", suite)
        reports.append(SUITES[suite](opts))
    return reports


def validate_reports(reports: Sequence[SuiteReport]) -> Dict[str, Any]:
    """
    Summarize suite reports

    Returns:
        dict: 'valid' plus 'errors' (failed checks) and 'warnings' (empty suites)
    """
    errors = []
    warnings = []
    for report in reports:
        if not report.checks:
            warnings.append(f"Suite {report.suite} ran no checks")
        for check in report.checks:
            if not check.passed:
                errors.append(f"{report.suite}: {check.name} ({check.detail})")
    return {
        'valid': len(errors) == 0,
        'errors': errors,
        'warnings': warnings,
    }
