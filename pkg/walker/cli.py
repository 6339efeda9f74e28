"""Walker CLI.

End-user workflow:
    walker moments --steps 4 --dim 4 --upto 5
    walker moment --steps 3 --dim 2 --s 1 --closed
    walker density --steps 3 --dim 5 --grid 0 3 7
    walker simulate --steps 3 --dim 2 --samples 100000 --s 1,2
    walker verify --suite all
"""
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from fractions import Fraction
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import mpmath
import pandas as pd
import typer

from walker import __version__
from walker.closed_moments import moment as moment_point
from walker.closed_moments import w3_residue
from walker.config import get_settings, load_dotenv_into_environ, precision_context
from walker.densities import cdf as cdf_point
from walker.densities import density as density_point
from walker.errors import WalkerError
from walker.exact_moments import moment_table, residues_v3
from walker.genfun import gf_check
from walker.models_pydantic import DensityMethod, GFKind, KSReference, OutputFormat, QuadSpec
from walker.montecarlo import simulate as simulate_walks
from walker.numcore import HalfInt, format_rational, parse_rational
from walker.specfun import constants_table
from walker.utils import configure_logging, format_real, log, write_file
from walker.validate import SUITES, VerifyOptions, run_suites, validate_reports


app = typer.Typer(help="Walker CLI - moments, densities and distributions of uniform random walks")

DEFAULT_DIGITS = 20


def run(argv=None) -> int:
    """Run the Typer app with an explicit argv list and return the exit code.

    Usage errors exit with 2, computation errors with 1.
    """
    argv = argv if argv is not None else sys.argv[1:]
    try:
        app(prog_name="walker", args=list(argv))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else (0 if exc.code is None else 1)
    return 0


@app.callback()
def main(
    precision: Optional[int] = typer.Option(None, "--precision", help="Decimal digits (default: WALKER_PRECISION or 50)"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log progress to stderr"),
):
    """Shared options: working precision and logging."""
    load_dotenv_into_environ()
    settings = get_settings()
    configure_logging("INFO" if verbose else settings.log_level)
    mpmath.mp.dps = precision if precision is not None else settings.precision

# =============================================================================
# OUTPUT HELPERS
# =============================================================================

def _meta(**extra: Any) -> Dict[str, Any]:
    meta = {"version": __version__, "precision": mpmath.mp.dps}
    meta.update({k: v for k, v in extra.items() if v is not None})
    return meta


def _render(value: Any, digits: int) -> Any:
    if value is None:
        return ""
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return format_rational(value)
    if isinstance(value, (mpmath.mpf, float)):
        return format_real(value, digits)
    return value


def _emit(rows: List[Dict[str, Any]], fmt: OutputFormat, meta: Dict[str, Any], out: Optional[str], digits: int) -> None:
    rows = [{k: _render(v, digits) for k, v in row.items()} for row in rows]
    if OutputFormat(fmt) == OutputFormat.JSON:
        text = json.dumps({"meta": meta, "rows": rows}, indent=2) + "\n"
    else:
        header = "# walker " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n"
        text = header + pd.DataFrame(rows).to_csv(index=False, lineterminator="\n")
    if out:
        write_file(out, text)
        typer.echo(f"[OK] Wrote {len(rows)} row(s) to {out}")
    else:
        typer.echo(text, nl=False)


def _emit_json(payload: Dict[str, Any], out: Optional[str]) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out:
        write_file(out, text)
        typer.echo(f"[OK] Wrote {out}")
    else:
        typer.echo(text, nl=False)


@contextmanager
def _guard() -> Iterator[None]:
    """Turn library errors into a structured error document and exit code 1."""
    try:
        yield
    except WalkerError as exc:
        typer.echo(json.dumps({"error": exc.to_dict()}, indent=2))
        typer.echo(f"[ERROR] {exc.message}", err=True)
        raise typer.Exit(1)
    except ValueError as exc:
        # pydantic validation of option combinations
        typer.echo(json.dumps({"error": {"type": type(exc).__name__, "code": "invalid", "message": str(exc)}}, indent=2))
        typer.echo(f"[ERROR] {exc}", err=True)
        raise typer.Exit(1)


def _nu(dim: int) -> HalfInt:
    return HalfInt.from_dim(dim)


def _quad_spec(boost: Optional[int], tol: float, max_zones: int) -> QuadSpec:
    return QuadSpec(boost_k=boost, tol=tol, max_zones=max_zones)


def _points(xs: Sequence[str], grid: Optional[Tuple[str, str, int]]) -> List[Fraction]:
    points = [parse_rational(x) for x in xs]
    if grid is not None:
        a, b, m = parse_rational(grid[0]), parse_rational(grid[1]), int(grid[2])
        if m < 2:
            points.append(a)
        else:
            points.extend(a + (b - a) * Fraction(i, m - 1) for i in range(m))
    if not points:
        raise typer.BadParameter("give --x or --grid")
    return points


def _ordered_map(fn: Callable[[Any], Any], items: Sequence[Any], workers: Optional[int]) -> List[Any]:
    workers = workers or get_settings().workers
    if workers == 1 or len(items) < 2:
        return [fn(item) for item in items]
    dps = mpmath.mp.dps

    def call(item: Any) -> Any:
        with mpmath.workdps(dps):
            return fn(item)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(call, items))

# =============================================================================
# COMMANDS
# =============================================================================

@app.command()
def moments(
    steps: int = typer.Option(..., "--steps", min=1),
    dim: int = typer.Option(..., "--dim", min=2),
    upto: int = typer.Option(10, "--upto", min=1, help="Number of rows, k = 0..upto-1"),
    fmt: OutputFormat = typer.Option(OutputFormat.CSV, "--format"),
    out: Optional[str] = typer.Option(None, "--out"),
):
    """Exact even moments W_n(nu; 2k)."""
    with _guard():
        table = moment_table(steps, _nu(dim), upto - 1)
        _emit(table.rows(), fmt, _meta(steps=steps, dim=dim), out, DEFAULT_DIGITS)


@app.command()
def moment(
    steps: int = typer.Option(..., "--steps", min=1),
    dim: int = typer.Option(..., "--dim", min=2),
    s: str = typer.Option(..., "--s", help="Order, e.g. 1, -1/2 or 0.75"),
    closed: bool = typer.Option(False, "--closed", help="Refuse the quadrature fallback"),
    quad: bool = typer.Option(False, "--quad", help="Force the Bessel-integral oracle"),
    boost: Optional[int] = typer.Option(None, "--boost", min=0),
    tol: float = typer.Option(1e-10, "--tol"),
    max_zones: int = typer.Option(10_000, "--max-zones"),
    digits: int = typer.Option(DEFAULT_DIGITS, "--digits", min=5),
):
    """One moment W_n(nu; s) with the path that produced it."""
    if closed and quad:
        typer.echo("[ERROR] --closed and --quad are exclusive")
        raise typer.Exit(2)
    method = DensityMethod.CLOSED if closed else DensityMethod.QUADRATURE if quad else DensityMethod.AUTO
    with _guard():
        point = moment_point(steps, _nu(dim), parse_rational(s), method, _quad_spec(boost, tol, max_zones))
        payload: Dict[str, Any] = {
            "meta": _meta(steps=steps, dim=dim),
            "s": format_rational(parse_rational(s)),
            "value": format_real(point.value, digits),
            "method": point.method,
        }
        if point.exact is not None:
            payload["exact"] = format_rational(point.exact)
        if point.combo is not None:
            payload["combo"] = point.combo.to_dict()
            payload["combo_text"] = str(point.combo)
        if point.est_error is not None:
            payload["est_error"] = format_real(point.est_error, 3)
        _emit_json(payload, None)


def _curve(evaluate: Callable[..., Any], steps: int, dim: int, x: List[str], grid, method: DensityMethod,
           boost: Optional[int], tol: float, max_zones: int, workers: Optional[int], fmt: OutputFormat,
           out: Optional[str], digits: int) -> None:
    with _guard():
        nu = _nu(dim)
        spec = _quad_spec(boost, tol, max_zones)
        points = _points(x, grid)
        log(f"evaluating {len(points)} point(s) for n={steps} dim={dim}")
        results = _ordered_map(lambda p: evaluate(steps, nu, p, method, spec), points, workers)
        rows = [{"x": r.x, "value": r.value, "method": r.method.value, "est_error": r.est_error} for r in results]
        _emit(rows, fmt, _meta(steps=steps, dim=dim), out, digits)


@app.command()
def density(
    steps: int = typer.Option(..., "--steps", min=1),
    dim: int = typer.Option(..., "--dim", min=2),
    x: List[str] = typer.Option([], "--x", help="Evaluation point; repeatable"),
    grid: Optional[Tuple[str, str, int]] = typer.Option(None, "--grid", help="a b m: m uniform points on [a, b]"),
    method: DensityMethod = typer.Option(DensityMethod.AUTO, "--method"),
    boost: Optional[int] = typer.Option(None, "--boost", min=0),
    tol: float = typer.Option(1e-10, "--tol"),
    max_zones: int = typer.Option(10_000, "--max-zones"),
    workers: Optional[int] = typer.Option(None, "--workers", min=1),
    fmt: OutputFormat = typer.Option(OutputFormat.CSV, "--format"),
    out: Optional[str] = typer.Option(None, "--out"),
    digits: int = typer.Option(DEFAULT_DIGITS, "--digits", min=5),
):
    """Density p_n(nu; x) as CSV columns x, value, method, est_error."""
    _curve(density_point, steps, dim, x, grid, method, boost, tol, max_zones, workers, fmt, out, digits)


@app.command()
def cdf(
    steps: int = typer.Option(..., "--steps", min=1),
    dim: int = typer.Option(..., "--dim", min=2),
    x: List[str] = typer.Option([], "--x", help="Evaluation point; repeatable"),
    grid: Optional[Tuple[str, str, int]] = typer.Option(None, "--grid", help="a b m: m uniform points on [a, b]"),
    method: DensityMethod = typer.Option(DensityMethod.AUTO, "--method"),
    boost: Optional[int] = typer.Option(None, "--boost", min=0),
    tol: float = typer.Option(1e-10, "--tol"),
    max_zones: int = typer.Option(10_000, "--max-zones"),
    workers: Optional[int] = typer.Option(None, "--workers", min=1),
    fmt: OutputFormat = typer.Option(OutputFormat.CSV, "--format"),
    out: Optional[str] = typer.Option(None, "--out"),
    digits: int = typer.Option(DEFAULT_DIGITS, "--digits", min=5),
):
    """Distribution function P_n(nu; x)."""
    _curve(cdf_point, steps, dim, x, grid, method, boost, tol, max_zones, workers, fmt, out, digits)


@app.command()
def residues(
    dim: int = typer.Option(..., "--dim", min=2),
    upto: int = typer.Option(9, "--upto", min=1, help="Number of rows, k = 0..upto-1"),
    fmt: OutputFormat = typer.Option(OutputFormat.CSV, "--format"),
    out: Optional[str] = typer.Option(None, "--out"),
    digits: int = typer.Option(DEFAULT_DIGITS, "--digits", min=5),
):
    """Residue numerators V_3(nu; k) and the residues of W_3(nu; s) at s = -d-2k."""
    with _guard():
        nu = _nu(dim)
        seq = residues_v3(nu, upto - 1)
        rows = []
        for k, value in enumerate(seq.values):
            row = {"k": k, "pole": -dim - 2 * k, "V3": value}
            if nu.is_integer:
                row["residue"] = w3_residue(int(nu), k).value()
            rows.append(row)
        _emit(rows, fmt, _meta(dim=dim), out, digits)


@app.command()
def constants(
    digits: int = typer.Option(50, "--digits", min=10, max=2000),
    out: Optional[str] = typer.Option(None, "--out"),
):
    """Named constants of the registry as JSON."""
    with _guard():
        with precision_context(digits + 5):
            table = constants_table()
            values = {name: mpmath.nstr(value, digits) for name, value in table.items()}
        _emit_json({"meta": _meta(digits=digits), "constants": values}, out)


@app.command()
def gf(
    kind: GFKind = typer.Option(..., "--kind"),
    dim: Optional[int] = typer.Option(None, "--dim", min=2, help="Required for w2 and w3"),
    x: str = typer.Option("1/20", "--x"),
    kmax: int = typer.Option(40, "--kmax", min=0),
):
    """Compare a closed generating function with its truncated moment series."""
    with _guard():
        nu = _nu(dim) if dim is not None else None
        result = gf_check(kind, nu, parse_rational(x), kmax)
        payload = result.model_dump(mode="json", exclude={"closed", "series"})
        payload["closed"] = format_real(result.closed, DEFAULT_DIGITS)
        payload["series"] = format_real(result.series, DEFAULT_DIGITS)
        _emit_json({"meta": _meta(), **payload}, None)


@app.command()
def simulate(
    steps: int = typer.Option(..., "--steps", min=1),
    dim: int = typer.Option(..., "--dim", min=2),
    samples: int = typer.Option(100_000, "--samples", min=2),
    seed: Optional[int] = typer.Option(None, "--seed", min=0, help="Default: WALKER_SEED"),
    s: str = typer.Option("1,2", "--s", help="Comma-separated moment orders"),
    ks: KSReference = typer.Option(KSReference.NONE, "--ks"),
    cdf_at: str = typer.Option("", "--cdf-at", help="Comma-separated points for empirical CDF values"),
    workers: Optional[int] = typer.Option(None, "--workers", min=1),
    out: Optional[str] = typer.Option(None, "--out"),
):
    """Monte Carlo moment and CDF estimates, optionally with a KS test."""
    with _guard():
        seed = seed if seed is not None else get_settings().seed
        orders = [float(v) for v in s.split(",") if v.strip()]
        points = [float(v) for v in cdf_at.split(",") if v.strip()]
        stats = simulate_walks(steps, dim, orders, samples, seed, ks=ks, cdf_points=points, workers=workers)
        _emit_json({"meta": _meta(seed=seed, rng=stats.rng_algorithm), **stats.model_dump(mode="json")}, out)
        if stats.ks is not None:
            final = stats.ks_rerun or stats.ks
            if not final.passed:
                typer.echo(f"[WARN] KS statistic {final.statistic:.5f} above {final.critical:.5f}", err=True)


@app.command()
def verify(
    suite: str = typer.Option("all", "--suite", help="One of: all, " + ", ".join(SUITES)),
    samples: int = typer.Option(1_000_000, "--samples", min=1000),
    seed: Optional[int] = typer.Option(None, "--seed", min=0),
    workers: Optional[int] = typer.Option(None, "--workers", min=1),
    show_checks: bool = typer.Option(False, "--checks", help="List every check, not only failures"),
):
    """Run verification suites and print a pass/fail table; exit 0 iff all pass."""
    if suite != "all" and suite not in SUITES:
        typer.echo(f"[ERROR] Unknown suite '{suite}'")
        raise typer.Exit(2)
    with _guard():
        reports = run_suites(suite, VerifyOptions(samples=samples, seed=seed, workers=workers))
    typer.echo(f"# walker version={__version__} precision={mpmath.mp.dps}")
    for report in reports:
        failed = sum(1 for c in report.checks if not c.passed)
        status = "PASS" if report.passed else "FAIL"
        typer.echo(f"{report.suite:<12} {status}  {len(report.checks) - failed}/{len(report.checks)}")
        for check in report.checks:
            if show_checks or not check.passed:
                mark = "[OK]" if check.passed else "[FAIL]"
                typer.echo(f"    {mark} {check.name}: {check.detail}")
    summary = validate_reports(reports)
    for warning in summary["warnings"]:
        typer.echo(f"[WARN] {warning}")
    if not summary["valid"]:
        typer.echo(f"[ERROR] {len(summary['errors'])} check(s) failed")
        raise typer.Exit(1)
    typer.echo("[OK] All checks passed")


if __name__ == "__main__":
    raise SystemExit(run())
