"""
Test the verification suites and their summary
"""
import mpmath
import pytest

from walker.densities import p5_taylor
from walker.errors import DomainError
from walker.models_pydantic import SuiteReport
from walker.validate import R5_PRINTED, SUITES, VerifyOptions, _check, run_suites, validate_reports


@pytest.mark.parametrize("name", ["moments", "narayana", "recursions", "gf3", "improbable", "odd-dim", "gf"])
def test_exact_and_closed_suites_pass(name):
    (report,) = run_suites(name, VerifyOptions(samples=1000))
    failures = [f"{c.name}: {c.detail}" for c in report.checks if not c.passed]
    assert report.checks
    assert failures == []


def test_printed_five_step_coefficients_within_tolerance():
    for value, (printed, tol) in zip(p5_taylor(2).values(), R5_PRINTED):
        assert abs(value - mpmath.mpf(printed)) < tol


def test_registry_names():
    assert set(SUITES) == {"moments", "narayana", "recursions", "residues", "gf3", "odd-moments", "kluyver",
                           "improbable", "odd-dim", "p3", "p4", "p5", "derivatives", "gf", "montecarlo"}


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suites("everything")


def test_library_errors_become_failed_checks():
    report = SuiteReport(suite="demo")

    def boom():
        raise DomainError("outside the support", x=5)

    _check(report, "raises", boom)
    _check(report, "fine", lambda: (True, "exact"))
    assert [c.passed for c in report.checks] == [False, True]
    assert report.checks[0].detail == "DomainError: outside the support"
    assert not report.passed


def test_summary_of_reports():
    good = SuiteReport(suite="good")
    good.add("one", True)
    empty = SuiteReport(suite="empty")
    bad = SuiteReport(suite="bad")
    bad.add("two", False, "got 3, expected 4")
    summary = validate_reports([good, empty, bad])
    assert summary["valid"] is False
    assert summary["errors"] == ["bad: two (got 3, expected 4)"]
    assert summary["warnings"] == ["Suite empty ran no checks"]
    assert validate_reports([good])["valid"] is True
